"""Exception hierarchy shared by every module."""


class PointDynError(Exception):
    """Base class for all library errors."""


class InputError(PointDynError, ValueError):
    """Malformed input or a point outside its space."""


class CapabilityError(PointDynError):
    """The operation is undefined for this map (e.g. two-sided on a non-invertible map)."""


class ScaleError(PointDynError):
    """A configured resource cap was exceeded."""


class ConstructionError(PointDynError):
    """A requested object cannot be built from the given data."""


class PreconditionError(PointDynError):
    """A theorem hypothesis required by the harness does not hold."""

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis

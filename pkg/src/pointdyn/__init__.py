"""Pointwise dynamics at explicitly bounded scale.

Exact rational checkers for pointwise properties of interval, circle and
line maps, a classifier for convergence modes of map sequences, and a
harness that compares limit-transfer conditions with direct checks.
"""

from .convergence import MapFamily, classify_convergence, constant_family, mode_status
from .errors import CapabilityError, InputError, PointDynError, PreconditionError, ScaleError
from .fixtures import REGISTRY, check_property, resolve_family, resolve_map, verify_fixtures
from .maps import PLMap, PowerMap, RotationMap, AffineLineMap, orbit
from .metric import Space, format_rational, parse_rational
from .theorems import HarnessScale, run_clause
from .verdict import DEFAULT_SCALE, ScaleConfig, Status, Verdict

__all__ = [
    "AffineLineMap", "CapabilityError", "DEFAULT_SCALE", "HarnessScale", "InputError", "MapFamily", "PLMap",
    "PointDynError", "PowerMap", "PreconditionError", "REGISTRY", "RotationMap", "ScaleConfig", "ScaleError",
    "Space", "Status", "Verdict", "check_property", "classify_convergence", "constant_family",
    "format_rational", "mode_status", "orbit", "parse_rational", "resolve_family", "resolve_map",
    "run_clause", "verify_fixtures",
]
__version__ = "0.1.0"

"""Scale configuration and the three-valued verdict records."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Any

from .errors import InputError
from .metric import format_rational, parse_rational, to_fraction


class Status(str, enum.Enum):
    CONFIRMED = "confirmed_at_scale"
    REFUTED = "refuted_at_scale"
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


def meet(statuses) -> Status:
    """Conjunction: refuted if any refuted, confirmed only if all confirmed."""
    statuses = list(statuses)
    if any(s is Status.REFUTED for s in statuses):
        return Status.REFUTED
    if statuses and all(s is Status.CONFIRMED for s in statuses):
        return Status.CONFIRMED
    return Status.INCONCLUSIVE


def _pow2(*exps):
    return tuple(Fraction(1, 2**e) for e in exps)


@dataclass(frozen=True)
class ScaleConfig:
    """Every truncation parameter a checker uses.

    ``basis`` is the radius of the open balls used as targets ``V`` in
    transitivity checks; ``rotation_horizon`` replaces ``horizon`` for
    circle rotations, whose recurrence times are long.
    """

    horizon: int = 200
    grid: Fraction = Fraction(1, 2**12)
    delta_sweep: tuple = _pow2(2, 4, 6, 8, 10)
    eps_list: tuple = _pow2(3, 4, 5, 6, 7, 8)
    basis: Fraction = Fraction(1, 2**6)
    max_period: int = 4
    rotation_horizon: int = 10_000
    pseudo_orbits: int = 4
    perturbations: int = 32
    window: int = 100
    pattern_budget: int = 16
    max_gap: int = 32
    measure_tol: Fraction = Fraction(1, 1000)
    candidate_cap: int = 4096
    seed: int = 0

    def __post_init__(self):
        for name in ("grid", "basis", "measure_tol"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        object.__setattr__(self, "delta_sweep", tuple(to_fraction(d) for d in self.delta_sweep))
        object.__setattr__(self, "eps_list", tuple(to_fraction(e) for e in self.eps_list))
        if self.horizon < 1:
            raise InputError("horizon must be at least 1")
        if self.grid <= 0 or self.basis <= 0:
            raise InputError("grid and basis must be positive")
        if not self.delta_sweep or any(d <= 0 for d in self.delta_sweep):
            raise InputError("delta sweep must be non-empty and positive")
        if any(a <= b for a, b in zip(self.delta_sweep, self.delta_sweep[1:])):
            raise InputError("delta sweep must be strictly decreasing")
        if not self.eps_list or any(e <= 0 for e in self.eps_list):
            raise InputError("epsilon list must be non-empty and positive")

    def with_(self, **changes) -> "ScaleConfig":
        return replace(self, **changes)

    @property
    def eps_min(self):
        return min(self.eps_list)

    def to_json(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Fraction):
                v = format_rational(v)
            elif isinstance(v, tuple):
                v = [format_rational(x) for x in v]
            out[f.name] = v
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ScaleConfig":
        kwargs = {}
        names = {f.name for f in fields(cls)}
        for key, v in data.items():
            if key not in names:
                raise InputError(f"unknown scale field {key!r}")
            if key in ("delta_sweep", "eps_list"):
                v = tuple(parse_rational(str(x)) for x in v)
            elif key in ("grid", "basis", "measure_tol"):
                v = parse_rational(str(v))
            else:
                v = int(v)
            kwargs[key] = v
        return cls(**kwargs)


DEFAULT_SCALE = ScaleConfig()


def jsonable(obj: Any):
    """Recursively convert Fractions/tuples/dataclasses to JSON-friendly values."""
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, float):
        return format_rational(obj) if obj in (float("inf"), float("-inf")) else obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    return obj


@dataclass
class Verdict:
    property: str
    point: Any
    status: Status
    witness: dict = field(default_factory=dict)
    scale: ScaleConfig | None = None
    notes: list = field(default_factory=list)

    @property
    def confirmed(self):
        return self.status is Status.CONFIRMED

    @property
    def refuted(self):
        return self.status is Status.REFUTED

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "point": jsonable(self.point),
            "status": self.status.value,
            "witness": jsonable(self.witness),
            "scale": self.scale.to_json() if self.scale else None,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class IndexSetWitness:
    """A truncated index set, listed exactly."""

    tag: str
    params: dict
    bounds: tuple
    indices: tuple
    exact: bool = True

    @property
    def empty(self):
        return not self.indices

    def minimum(self):
        return min(self.indices) if self.indices else None

    def to_json(self):
        return {"tag": self.tag, "params": jsonable(self.params), "bounds": list(self.bounds),
                "indices": list(self.indices), "exact": self.exact}

"""Closed rational intervals and finite unions of them.

Endpoints are Fractions.  On the real line an endpoint may also be
``-inf``/``inf`` (plain floats); Python compares those correctly against
Fractions, and no arithmetic other than comparison is done on them here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .metric import format_rational, to_fraction

INF = float("inf")


def _coerce(v):
    if isinstance(v, float) and v in (INF, -INF):
        return v
    return to_fraction(v)


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _coerce(self.lo))
        object.__setattr__(self, "hi", _coerce(self.hi))
        if self.lo > self.hi:
            raise InputError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        if self.lo == -INF or self.hi == INF:
            raise InputError("unbounded interval has no midpoint")
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def intersect(self, other: "Interval"):
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def as_strings(self):
        return [format_rational(self.lo), format_rational(self.hi)]

    def to_json(self):
        return self.as_strings()

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def ball(center, radius) -> Interval:
    return Interval(center - radius, center + radius)


def normalize(intervals: Iterable[Interval]) -> tuple:
    """Sort and merge overlapping or touching closed intervals."""
    items = sorted(i for i in intervals if i is not None)
    out = []
    for iv in items:
        if out and iv.lo <= out[-1].hi:
            if iv.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return tuple(out)


def intersect_sets(a: Sequence[Interval], b: Sequence[Interval]) -> tuple:
    """Intersection of two normalized interval lists (linear merge)."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        piece = a[i].intersect(b[j])
        if piece is not None:
            out.append(piece)
        if a[i].hi < b[j].hi:
            i += 1
        else:
            j += 1
    return normalize(out)


def clip(intervals: Sequence[Interval], window: Interval) -> tuple:
    return intersect_sets(normalize(intervals), (window,))


def measure(intervals: Sequence[Interval]):
    return sum((iv.length for iv in normalize(intervals)), Fraction(0))


def contains(intervals: Sequence[Interval], x) -> bool:
    return any(iv.contains(x) for iv in intervals)


def hull(intervals: Sequence[Interval]):
    items = normalize(intervals)
    if not items:
        return None
    return Interval(items[0].lo, items[-1].hi)


def subset(a: Sequence[Interval], b: Sequence[Interval]) -> bool:
    """Whether every interval of ``a`` lies inside one interval of ``b``."""
    b = normalize(b)
    return all(any(o.lo <= iv.lo and iv.hi <= o.hi for o in b) for iv in normalize(a))


def representative(intervals: Sequence[Interval], near=None):
    """A deterministic member: the point closest to ``near`` or the first midpoint."""
    items = normalize(intervals)
    if not items:
        return None
    if near is not None:
        best = None
        for iv in items:
            p = min(max(near, iv.lo), iv.hi)
            if best is None or abs(p - near) < abs(best - near):
                best = p
        return best
    iv = items[0]
    if iv.lo == -INF and iv.hi == INF:
        return Fraction(0)
    if iv.lo == -INF:
        return iv.hi
    if iv.hi == INF:
        return iv.lo
    return iv.midpoint


def to_json(intervals: Sequence[Interval]):
    return [iv.as_strings() for iv in normalize(intervals)]

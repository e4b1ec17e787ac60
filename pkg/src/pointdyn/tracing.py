"""Exact feasibility of orbit constraints by interval preimage intersection.

Given constraints ``f^n(y) ∈ C_n`` for indices in a window, the set of
admissible ``y`` is computed backwards (forward indices) with preimages and
forwards (negative indices) with images.  Every step is exact for
piecewise-linear, affine and rotation maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import intervals as ivs
from .errors import CapabilityError, ScaleError
from .intervals import Interval
from .maps import DynMap, RotationMap, arc
from .metric import Space

MAX_PIECES = 100_000


def closed_ball(space: Space, center, radius) -> tuple:
    """``B[center, radius]`` intersected with the space's domain, as intervals."""
    if space is Space.CIRCLE:
        return arc(center - radius, center + radius)
    iv = Interval(center - radius, center + radius)
    if space is Space.INTERVAL:
        iv = iv.intersect(Interval(0, 1))
        return (iv,) if iv is not None else ()
    return (iv,)


@dataclass(frozen=True)
class OpenSet:
    """An open ball of the space, stored as closed pieces plus openness flags.

    ``pieces`` holds ``(lo, hi, lo_closed, hi_closed)``; an end is closed only
    where it coincides with the boundary of [0, 1] (or the seam of the circle).
    """

    pieces: tuple
    center: Fraction
    radius: Fraction

    def closure(self) -> tuple:
        return ivs.normalize(Interval(lo, hi) for lo, hi, _, _ in self.pieces)

    def contains(self, p) -> bool:
        for lo, hi, lc, hc in self.pieces:
            if (lo < p or (lc and lo == p)) and (p < hi or (hc and p == hi)):
                return True
        return False

    def meets(self, closed: Sequence[Interval], tol=Fraction(0)):
        """Whether a closed set meets this open set.

        Returns True/False when decided with margin ``tol``, None otherwise.
        """
        undecided = False
        for iv in closed:
            for lo, hi, lc, hc in self.pieces:
                left_ok = iv.hi > lo + tol or (lc and tol == 0 and iv.hi >= lo)
                right_ok = iv.lo < hi - tol or (hc and tol == 0 and iv.lo <= hi)
                if left_ok and right_ok:
                    return True
                if tol and iv.hi >= lo - tol and iv.lo <= hi + tol:
                    undecided = True
        return None if undecided else False

    def to_json(self):
        return {"center": self.center, "radius": self.radius,
                "pieces": [[lo, hi, lc, hc] for lo, hi, lc, hc in self.pieces]}


def open_ball(space: Space, center, radius) -> OpenSet:
    if space is Space.CIRCLE:
        if radius >= Fraction(1, 2):
            return OpenSet(((Fraction(0), Fraction(1), True, True),), center, radius)
        lo, hi = center - radius, center + radius
        if lo < 0:
            pieces = ((lo + 1, Fraction(1), False, True), (Fraction(0), hi, True, False))
        elif hi > 1:
            pieces = ((lo, Fraction(1), False, True), (Fraction(0), hi - 1, True, False))
        else:
            pieces = ((lo, hi, False, False),)
        return OpenSet(pieces, center, radius)
    lo, hi = center - radius, center + radius
    lc = hc = False
    if space is Space.INTERVAL:
        if lo <= 0:
            lo, lc = Fraction(0), True
        if hi >= 1:
            hi, hc = Fraction(1), True
    return OpenSet(((lo, hi, lc, hc),), center, radius)


def _check(pieces):
    if len(pieces) > MAX_PIECES:
        raise ScaleError(f"feasible set fragmented into more than {MAX_PIECES} pieces")
    return pieces


def _pre(f: DynMap, pieces, window):
    out = []
    for iv in pieces:
        out.extend(f.preimage(iv, window))
    return ivs.normalize(out)


def _img(f: DynMap, pieces):
    out = []
    for iv in pieces:
        out.extend(f.image(iv))
    return ivs.normalize(out)


def feasible_set(f: DynMap, constraints: Mapping[int, Sequence[Interval]]) -> tuple:
    """Exact set of ``y`` with ``f^n(y) ∈ constraints[n]`` for every key ``n``.

    Keys may be negative (requires an invertible map).  Missing indices
    between the extreme keys are unconstrained.
    """
    domain = (f.domain(),)
    if not constraints:
        return domain
    keys = sorted(constraints)
    hi_key = max(keys[-1], 0)
    lo_key = min(keys[0], 0)
    if lo_key < 0 and not f.invertible:
        raise CapabilityError("negative-time constraints need an invertible map")
    window = f.domain()
    fwd = None
    for n in range(hi_key, -1, -1):
        c = constraints.get(n)
        if fwd is None:
            fwd = ivs.normalize(c) if c is not None else None
        else:
            fwd = _check(_pre(f, fwd, window))
            if c is not None:
                fwd = ivs.intersect_sets(fwd, ivs.normalize(c))
        if fwd is not None and not fwd:
            return ()
    result = fwd if fwd is not None else domain
    if lo_key < 0:
        back = None
        for n in range(lo_key, 1):
            c = constraints.get(n)
            if back is not None:
                back = _check(_img(f, back))
            if c is not None:
                back = ivs.normalize(c) if back is None else ivs.intersect_sets(back, ivs.normalize(c))
            if back is not None and not back:
                return ()
        if back is not None:
            result = ivs.intersect_sets(result, back)
    return result


def tube_constraints(f: DynMap, points: Mapping[int, Fraction], radius) -> dict:
    """Closed ``radius``-balls around each indexed point."""
    return {n: closed_ball(f.space, p, radius) for n, p in points.items()}


def rotation_slack(f: DynMap, span: int) -> Fraction:
    """Extra margin rotations need after ``span`` steps of dyadic angle error."""
    if isinstance(f, RotationMap):
        return f.error_after(span)
    return Fraction(0)

"""Exact dynamical maps: piecewise-linear, rotations, affine maps of the line
and power maps, together with orbit and interval-geometry computations."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

from . import intervals as ivs
from .errors import CapabilityError, InputError, ScaleError
from .intervals import INF, Interval
from .metric import (
    HighPrecisionReal,
    Space,
    check_point,
    format_rational,
    parse_rational,
    to_fraction,
    wrap,
)

DEFAULT_MAX_BREAKPOINTS = 10**6
# PowerMap images are rounded outward once exact endpoints grow past this many bits.
POWER_EXACT_BITS = 1 << 15
POWER_ROUNDING = Fraction(1, 1 << 4096)

FORWARD = "forward"
TWO_SIDED = "two-sided"


class DynMap:
    """Common surface of every map class."""

    space: Space
    invertible: bool = False
    kind: str = ""
    image_tolerance = Fraction(0)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        raise NotImplementedError

    def iterate_value(self, x, k: int):
        """``f^k(x)``; negative ``k`` uses the inverse."""
        if k < 0:
            return self.inverse().iterate_value(x, -k)
        for _ in range(k):
            x = self.eval(x)
        return x

    def inverse(self) -> "DynMap":
        raise CapabilityError(f"{self.kind} map is not invertible")

    def image(self, iv: Interval) -> tuple:
        raise NotImplementedError

    def preimage(self, iv: Interval, window: Interval | None = None) -> tuple:
        raise NotImplementedError

    def domain(self) -> Interval:
        if self.space is Space.LINE:
            return Interval(-INF, INF)
        return Interval(0, 1)

    @property
    def nondecreasing(self) -> bool:
        return False

    @property
    def is_isometry(self) -> bool:
        return False

    def lipschitz(self):
        raise NotImplementedError

    def sample_points(self) -> list:
        """Points where the map changes behaviour (breakpoints)."""
        return []


def _pair(a, b):
    return (to_fraction(a), to_fraction(b))


class PLMap(DynMap):
    """Continuous piecewise-linear map given by its breakpoints.

    On the unit interval the breakpoints must cover 0 and 1.  On the line
    the map continues with ``left_slope``/``right_slope`` beyond the first and
    last breakpoint (both default to the adjacent segment's slope).
    """

    kind = "pl"

    def __init__(self, breakpoints, space=Space.INTERVAL, left_slope=None, right_slope=None):
        space = Space(space)
        if space is Space.CIRCLE:
            raise InputError("piecewise-linear maps live on the interval or the line")
        pts = [_pair(x, y) for x, y in breakpoints]
        if not pts:
            raise InputError("a PL map needs at least one breakpoint")
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if x1 <= x0:
                raise InputError("breakpoint abscissae must be strictly increasing")
        self.space = space
        if space is Space.INTERVAL:
            if pts[0][0] != 0 or pts[-1][0] != 1:
                raise InputError("interval maps need breakpoints at 0 and 1")
            if any(not (0 <= y <= 1) for _, y in pts):
                raise InputError("interval map leaves [0, 1]")
            self.left_slope = self.right_slope = None
        else:
            if len(pts) == 1 and (left_slope is None or right_slope is None):
                raise InputError("single-breakpoint line maps need both tail slopes")
            self.left_slope = to_fraction(left_slope) if left_slope is not None else _slope(pts[0], pts[1])
            self.right_slope = to_fraction(right_slope) if right_slope is not None else _slope(pts[-2], pts[-1])
        self.breakpoints = tuple(_canonical(pts, self.left_slope, self.right_slope))
        self.xs = [p[0] for p in self.breakpoints]
        self.ys = [p[1] for p in self.breakpoints]
        self._inner = [_slope(a, b) for a, b in zip(self.breakpoints, self.breakpoints[1:])]
        self._hash = None
        self._isometry = None
        slopes = self.slopes()
        strict_inc = all(s > 0 for s in slopes)
        strict_dec = all(s < 0 for s in slopes)
        if space is Space.INTERVAL:
            onto = {self.ys[0], self.ys[-1]} == {Fraction(0), Fraction(1)}
            self.invertible = (strict_inc or strict_dec) and onto
        else:
            self.invertible = strict_inc or strict_dec
        self._nondecreasing = all(s >= 0 for s in slopes)

    # -- structure -------------------------------------------------------
    def slopes(self) -> list:
        inner = list(self._inner)
        if self.space is Space.LINE:
            return [self.left_slope, *inner, self.right_slope]
        return inner

    def pieces(self):
        """Yield ``(lo, hi, slope, value_at_lo)`` for each linear piece."""
        bp = self.breakpoints
        if self.space is Space.LINE:
            yield (-INF, bp[0][0], self.left_slope, None)
        for a, b, s in zip(bp, bp[1:], self._inner):
            yield (a[0], b[0], s, a[1])
        if self.space is Space.LINE:
            yield (bp[-1][0], INF, self.right_slope, bp[-1][1])

    @property
    def nondecreasing(self):
        return self._nondecreasing

    @property
    def is_isometry(self):
        if self._isometry is None:
            self._isometry = all(abs(s) == 1 for s in self.slopes()) and self.invertible
        return self._isometry

    def lipschitz(self):
        return max(abs(s) for s in self.slopes())

    def sample_points(self):
        return list(self.xs)

    def __eq__(self, other):
        return (
            isinstance(other, PLMap)
            and self.space == other.space
            and self.breakpoints == other.breakpoints
            and self.left_slope == other.left_slope
            and self.right_slope == other.right_slope
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, self.breakpoints, self.left_slope, self.right_slope))
        return self._hash

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in self.breakpoints[:6])
        more = "" if len(self.breakpoints) <= 6 else f", ... {len(self.breakpoints)} total"
        return f"PLMap[{self.space.value}]({pts}{more})"

    # -- evaluation ------------------------------------------------------
    def eval(self, x):
        x = check_point(self.space, x)
        xs, ys = self.xs, self.ys
        if self.space is Space.LINE:
            if x <= xs[0]:
                return ys[0] + self.left_slope * (x - xs[0])
            if x >= xs[-1]:
                return ys[-1] + self.right_slope * (x - xs[-1])
        i = bisect.bisect_right(xs, x) - 1
        if i >= len(xs) - 1:
            return ys[-1]
        x0 = xs[i]
        if x == x0:
            return ys[i]
        return ys[i] + self._inner[i] * (x - x0)

    def inverse(self):
        return invert_pl(self)

    def image(self, iv):
        return interval_image(self, iv)

    def preimage(self, iv, window=None):
        return interval_preimage(self, iv, window)

    def to_json(self):
        out = {
            "space": self.space.value,
            "kind": "pl",
            "breakpoints": [[format_rational(x), format_rational(y)] for x, y in self.breakpoints],
        }
        if self.space is Space.LINE:
            out["left_slope"] = format_rational(self.left_slope)
            out["right_slope"] = format_rational(self.right_slope)
        return out


def _slope(a, b):
    return (b[1] - a[1]) / (b[0] - a[0])


def _canonical(pts, left_slope=None, right_slope=None):
    """Drop interior breakpoints where the slope does not change."""
    if len(pts) <= 2 and left_slope is None:
        return pts
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        if _slope(out[-1], pts[i]) != _slope(pts[i], pts[i + 1]):
            out.append(pts[i])
    if len(pts) > 1:
        out.append(pts[-1])
    if left_slope is not None:
        # line maps: tails may absorb end breakpoints
        while len(out) >= 2 and _slope(out[0], out[1]) == left_slope:
            out.pop(0)
        while len(out) >= 2 and _slope(out[-2], out[-1]) == right_slope:
            out.pop()
        if len(out) == 1 and left_slope == right_slope:
            x, y = out[0]
            out = [(Fraction(0), y - left_slope * x)]
    return out


def affine_as_pl(a, b) -> PLMap:
    a, b = to_fraction(a), to_fraction(b)
    return PLMap([(0, b)], Space.LINE, left_slope=a, right_slope=a)


def as_pl(f: DynMap) -> PLMap:
    if isinstance(f, PLMap):
        return f
    if isinstance(f, AffineLineMap):
        return affine_as_pl(f.a, f.b)
    raise CapabilityError(f"{f.kind} map has no piecewise-linear form")


def identity_pl(space=Space.INTERVAL) -> PLMap:
    if Space(space) is Space.LINE:
        return affine_as_pl(1, 0)
    return PLMap([(0, 0), (1, 1)])


def compose_pl(f: PLMap, g: PLMap, max_breakpoints=DEFAULT_MAX_BREAKPOINTS) -> PLMap:
    """Exact ``f ∘ g``."""
    f, g = as_pl(f), as_pl(g)
    if f.space is not g.space:
        raise InputError("cannot compose maps on different spaces")
    cand = set(g.xs)
    fxs = f.xs
    for lo, hi, s, _ in g.pieces():
        if s == 0:
            continue
        # values of g at the piece ends (tails are unbounded)
        if lo == -INF:
            y_hi = g.ys[0]
            y_lo = -INF if s > 0 else INF
        elif hi == INF:
            y_lo = g.ys[-1]
            y_hi = INF if s > 0 else -INF
        else:
            y_lo, y_hi = g.eval(lo), g.eval(hi)
        vmin, vmax = min(y_lo, y_hi), max(y_lo, y_hi)
        i0 = bisect.bisect_left(fxs, vmin) if vmin != -INF else 0
        i1 = bisect.bisect_right(fxs, vmax) if vmax != INF else len(fxs)
        for t in fxs[i0:i1]:
            if lo == -INF:
                x = hi + (t - y_hi) / s
            else:
                x = lo + (t - g.eval(lo)) / s
            cand.add(x)
        if len(cand) > max_breakpoints:
            raise ScaleError(f"composition exceeds {max_breakpoints} breakpoints")
    xs = sorted(cand)
    pts = [(x, f.eval(g.eval(x))) for x in xs]
    if f.space is Space.INTERVAL:
        return PLMap(pts)
    ls = _tail_slope(f, g.left_slope, left=True)
    rs = _tail_slope(f, g.right_slope, left=False)
    return PLMap(pts, Space.LINE, left_slope=ls, right_slope=rs)


def _tail_slope(f: PLMap, gs, left: bool):
    if gs == 0:
        return Fraction(0)
    # as x -> -inf (left) g(x) -> -inf iff gs > 0
    goes_down = (gs > 0) == left
    return gs * (f.left_slope if goes_down else f.right_slope)


def iterate_pl(f: PLMap, k: int, max_breakpoints=DEFAULT_MAX_BREAKPOINTS) -> PLMap:
    """Exact k-th iterate; raises :class:`ScaleError` past the breakpoint cap."""
    f = as_pl(f)
    if k < 1:
        raise InputError("iterate count must be at least 1")
    acc = f
    for _ in range(k - 1):
        acc = compose_pl(f, acc, max_breakpoints)
        if len(acc.breakpoints) > max_breakpoints:
            raise ScaleError(f"iterate exceeds {max_breakpoints} breakpoints")
    return acc


def invert_pl(f: PLMap) -> PLMap:
    f = as_pl(f)
    if not f.invertible:
        raise CapabilityError("map is not a strictly monotone bijection")
    pts = sorted((y, x) for x, y in f.breakpoints)
    if f.space is Space.INTERVAL:
        return PLMap(pts)
    increasing = f.left_slope > 0
    ls = 1 / (f.left_slope if increasing else f.right_slope)
    rs = 1 / (f.right_slope if increasing else f.left_slope)
    return PLMap(pts, Space.LINE, left_slope=ls, right_slope=rs)


def interval_image(f: PLMap, iv: Interval) -> tuple:
    """Exact set image of a closed interval, as merged closed intervals."""
    f = as_pl(f)
    out = []
    for lo, hi, s, _ in f.pieces():
        a, b = max(lo, iv.lo), min(hi, iv.hi)
        if a > b:
            continue
        ya = _eval_ext(f, a, s)
        yb = _eval_ext(f, b, s)
        out.append(Interval(min(ya, yb), max(ya, yb)))
    return ivs.normalize(out)


def _eval_ext(f, x, s):
    if x == -INF:
        return -INF if s > 0 else (INF if s < 0 else f.ys[0])
    if x == INF:
        return INF if s > 0 else (-INF if s < 0 else f.ys[-1])
    return f.eval(x)


def interval_preimage(f: PLMap, iv: Interval, window: Interval | None = None) -> tuple:
    """Exact ``{x : f(x) in iv}`` (optionally clipped to ``window``)."""
    f = as_pl(f)
    out = []
    for lo, hi, s, _ in f.pieces():
        if s == 0:
            y = f.eval(hi if lo == -INF else lo)
            if iv.contains(y):
                out.append(Interval(lo, hi))
            continue
        # x = anchor + (y - y_anchor)/s
        ax = hi if lo == -INF else lo
        ay = f.eval(ax)
        t1 = ax + (iv.lo - ay) / s if iv.lo != -INF else (-INF if s > 0 else INF)
        t2 = ax + (iv.hi - ay) / s if iv.hi != INF else (INF if s > 0 else -INF)
        a, b = max(lo, min(t1, t2)), min(hi, max(t1, t2))
        if a <= b:
            out.append(Interval(a, b))
    res = ivs.normalize(out)
    if window is not None:
        res = ivs.clip(res, window)
    return res


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple
    intervals: tuple

    def meets(self, region: Interval, exclude=None) -> list:
        """Members (points or interval samples) inside ``region`` other than ``exclude``."""
        hits = [p for p in self.points if region.contains(p) and p != exclude]
        for iv in self.intervals:
            piece = iv.intersect(region)
            if piece is None:
                continue
            for p in (piece.lo, piece.midpoint if piece.length else piece.lo, piece.hi):
                if p != exclude and p not in hits:
                    hits.append(p)
        return sorted(hits)

    def is_empty(self):
        return not self.points and not self.intervals

    def to_json(self):
        return {
            "points": [format_rational(p) for p in self.points],
            "intervals": ivs.to_json(self.intervals),
        }


def fixed_points(f: DynMap, k: int = 1, window: Interval | None = None,
                 max_breakpoints=DEFAULT_MAX_BREAKPOINTS) -> FixedPointSet:
    """Complete exact solution set of ``f^k(x) = x``."""
    if isinstance(f, (RotationMap, AffineLineMap, PowerMap)):
        res = f.fixed_points(k)
    else:
        g = iterate_pl(f, k, max_breakpoints)
        pts, comps = [], []
        for lo, hi, s, _ in g.pieces():
            if lo == -INF or hi == INF:
                anchor = hi if lo == -INF else lo
                d = g.eval(anchor) - anchor
                if s == 1:
                    if d == 0:
                        comps.append(Interval(lo, hi))
                    continue
                root = anchor - d / (s - 1)
                if lo <= root <= hi:
                    pts.append(root)
                continue
            ha, hb = g.eval(lo) - lo, g.eval(hi) - hi
            if ha == 0 and hb == 0:
                comps.append(Interval(lo, hi))
            elif ha == 0:
                pts.append(lo)
            elif hb == 0:
                pts.append(hi)
            elif (ha < 0) != (hb < 0):
                pts.append(lo + ha * (hi - lo) / (ha - hb))
        comps = list(ivs.normalize(comps))
        pts = sorted({p for p in pts if not ivs.contains(comps, p)})
        res = FixedPointSet(tuple(pts), tuple(comps))
    if window is not None:
        res = FixedPointSet(
            tuple(p for p in res.points if window.contains(p)),
            ivs.clip(res.intervals, window),
        )
    return res


class RotationMap(DynMap):
    """Circle rotation ``x ↦ x + α (mod 1)``.

    ``alpha`` is a :class:`HighPrecisionReal`; computations use its dyadic
    value exactly and every position after ``k`` steps is within ``k·error``
    of the true rotation.
    """

    kind = "rotation"
    space = Space.CIRCLE
    invertible = True

    def __init__(self, alpha):
        if not isinstance(alpha, HighPrecisionReal):
            alpha = HighPrecisionReal(to_fraction(alpha))
        self.alpha = HighPrecisionReal(wrap(alpha.value), alpha.error, alpha.irrational)

    @property
    def angle(self) -> Fraction:
        return self.alpha.value

    @property
    def rational(self) -> bool:
        return not self.alpha.irrational and self.alpha.error == 0

    def eval(self, x):
        return wrap(check_point(Space.CIRCLE, x) + self.angle)

    def iterate_value(self, x, k):
        return wrap(check_point(Space.CIRCLE, x) + k * self.angle)

    def error_after(self, k) -> Fraction:
        return abs(k) * self.alpha.error

    def inverse(self):
        return RotationMap(HighPrecisionReal(wrap(-self.angle), self.alpha.error, self.alpha.irrational))

    def shift_arc(self, iv: Interval, k: int) -> tuple:
        return arc(iv.lo + k * self.angle, iv.hi + k * self.angle)

    def image(self, iv):
        return self.shift_arc(iv, 1)

    def preimage(self, iv, window=None):
        res = self.shift_arc(iv, -1)
        return ivs.clip(res, window) if window is not None else res

    def domain(self):
        return Interval(0, 1)

    @property
    def nondecreasing(self):
        return True

    @property
    def is_isometry(self):
        return True

    def lipschitz(self):
        return Fraction(1)

    def fixed_points(self, k):
        if self.rational and wrap(k * self.angle) == 0:
            return FixedPointSet((), (Interval(0, 1),))
        return FixedPointSet((), ())

    def __eq__(self, other):
        return isinstance(other, RotationMap) and self.alpha == other.alpha

    def __hash__(self):
        return hash(self.alpha)

    def __repr__(self):
        return f"RotationMap({float(self.angle):.12g})"

    def to_json(self):
        if self.alpha.error == 0 and not self.alpha.irrational:
            alpha = format_rational(self.angle)
        else:
            alpha = self.alpha.to_hex()
        return {"space": "circle", "kind": "rotation", "alpha": alpha,
                "alpha_error": format_rational(self.alpha.error),
                "irrational": self.alpha.irrational}


def arc(lo, hi) -> tuple:
    """The closed arc from ``lo`` to ``hi`` (hi >= lo) as intervals of [0, 1]."""
    if hi - lo >= 1:
        return (Interval(0, 1),)
    a, b = wrap(lo), wrap(lo) + (hi - lo)
    if b <= 1:
        return (Interval(a, b),)
    return ivs.normalize([Interval(a, 1), Interval(0, b - 1)])


class AffineLineMap(DynMap):
    """``x ↦ a·x + b`` on the real line."""

    kind = "affine"
    space = Space.LINE

    def __init__(self, a, b=0):
        self.a = to_fraction(a)
        self.b = to_fraction(b)
        self.invertible = self.a != 0

    def eval(self, x):
        return self.a * to_fraction(x) + self.b

    def iterate_value(self, x, k):
        if k < 0:
            return self.inverse().iterate_value(x, -k)
        ak = self.a**k
        # b(1 + a + ... + a^(k-1))
        geo = k * self.b if self.a == 1 else self.b * (ak - 1) / (self.a - 1)
        return ak * to_fraction(x) + geo

    def iterate(self, k) -> "AffineLineMap":
        return AffineLineMap(self.a**k, self.iterate_value(0, k))

    def inverse(self):
        if not self.invertible:
            raise CapabilityError("constant affine map is not invertible")
        return AffineLineMap(1 / self.a, -self.b / self.a)

    def image(self, iv):
        if self.a == 0:
            return (Interval(self.b, self.b),)
        ends = [self._ext(iv.lo), self._ext(iv.hi)]
        return (Interval(min(ends), max(ends)),)

    def _ext(self, x):
        if x in (INF, -INF):
            return x if self.a > 0 else -x
        return self.a * x + self.b

    def preimage(self, iv, window=None):
        return interval_preimage(as_pl(self), iv, window)

    @property
    def nondecreasing(self):
        return self.a >= 0

    @property
    def is_isometry(self):
        return abs(self.a) == 1

    def lipschitz(self):
        return abs(self.a)

    def fixed_points(self, k):
        g = self.iterate(k)
        if g.a == 1:
            return FixedPointSet((), (Interval(-INF, INF),)) if g.b == 0 else FixedPointSet((), ())
        return FixedPointSet((g.b / (1 - g.a),), ())

    def sample_points(self):
        return [Fraction(0)]

    def __eq__(self, other):
        return isinstance(other, AffineLineMap) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"AffineLineMap({self.a}x + {self.b})"

    def to_json(self):
        return {"space": "line", "kind": "affine", "a": format_rational(self.a), "b": format_rational(self.b)}


class PowerMap(DynMap):
    """``x ↦ x^p`` on [0, 1] (p >= 1), evaluated exactly.

    Images of intervals are exact until endpoint numerators exceed
    ``POWER_EXACT_BITS`` bits; after that they are rounded outward to a
    dyadic grid of mesh ``POWER_ROUNDING`` and ``image_tolerance`` records
    the slack hit tests must respect.
    """

    kind = "power"
    space = Space.INTERVAL
    image_tolerance = POWER_ROUNDING

    def __init__(self, p: int):
        if int(p) != p or p < 1:
            raise InputError("power must be a positive integer")
        self.p = int(p)
        self.invertible = True

    def eval(self, x):
        # exact while small; afterwards nearest point of the POWER_ROUNDING grid
        return self._bounded_pow(check_point(Space.INTERVAL, x), None)

    def _bounded_pow(self, x, up):
        if x.numerator.bit_length() * self.p < POWER_EXACT_BITS and x.denominator.bit_length() * self.p < POWER_EXACT_BITS:
            return x**self.p
        m = POWER_ROUNDING.denominator

        def rnd(v):
            if up is None:
                return Fraction(round(v * m), m)
            return Fraction(math.ceil(v * m) if up else math.floor(v * m), m)

        base = rnd(x)
        v = base
        for _ in range(self.p - 1):
            v = rnd(v * base)
        return min(max(v, Fraction(0)), Fraction(1))

    def image(self, iv):
        return (Interval(self._bounded_pow(iv.lo, False), self._bounded_pow(iv.hi, True)),)

    def preimage(self, iv, window=None):
        raise CapabilityError("preimages of the power map are irrational")

    def inverse(self):
        raise CapabilityError("inverse of the power map is not exactly representable")

    @property
    def nondecreasing(self):
        return True

    def lipschitz(self):
        return Fraction(self.p)

    def fixed_points(self, k):
        if self.p == 1:
            return FixedPointSet((), (Interval(0, 1),))
        return FixedPointSet((Fraction(0), Fraction(1)), ())

    def sample_points(self):
        return [Fraction(0), Fraction(1)]

    def __eq__(self, other):
        return isinstance(other, PowerMap) and self.p == other.p

    def __hash__(self):
        return hash(("power", self.p))

    def __repr__(self):
        return f"PowerMap({self.p})"

    def to_json(self):
        return {"space": "interval", "kind": "power", "p": self.p}


def eval_map(f: DynMap, x):
    return f.eval(x)


@dataclass(frozen=True)
class OrbitSegment:
    base: Fraction
    direction: str
    indices: tuple
    points: tuple

    def at(self, n):
        return self.points[self.indices.index(n)]

    def as_dict(self):
        return dict(zip(self.indices, self.points))


def orbit(f: DynMap, x, horizon: int, direction: str = FORWARD) -> OrbitSegment:
    """Orbit segment over ``[0, horizon]`` or ``[-horizon, horizon]``."""
    x = check_point(f.space, x)
    if direction not in (FORWARD, TWO_SIDED):
        raise InputError(f"unknown direction {direction!r}")
    if direction == TWO_SIDED and not f.invertible:
        raise CapabilityError("two-sided orbits need an invertible map")
    if isinstance(f, RotationMap):
        lo = -horizon if direction == TWO_SIDED else 0
        idx = tuple(range(lo, horizon + 1))
        return OrbitSegment(x, direction, idx, tuple(f.iterate_value(x, n) for n in idx))
    fwd = [x]
    for _ in range(horizon):
        fwd.append(f.eval(fwd[-1]))
    if direction == FORWARD:
        return OrbitSegment(x, direction, tuple(range(horizon + 1)), tuple(fwd))
    inv = f.inverse()
    back = [x]
    for _ in range(horizon):
        back.append(inv.eval(back[-1]))
    pts = tuple(reversed(back[1:])) + tuple(fwd)
    return OrbitSegment(x, direction, tuple(range(-horizon, horizon + 1)), pts)


# -- serialization -------------------------------------------------------

def map_from_json(data: dict) -> DynMap:
    try:
        kind = data["kind"]
        space = Space.parse(data.get("space", "interval"))
    except (KeyError, TypeError):
        raise InputError("map description needs 'kind' and 'space'") from None
    if kind == "pl":
        pts = [(parse_rational(a), parse_rational(b)) for a, b in data["breakpoints"]]
        ls = data.get("left_slope")
        rs = data.get("right_slope")
        return PLMap(pts, space,
                     parse_rational(ls) if ls is not None else None,
                     parse_rational(rs) if rs is not None else None)
    if kind == "rotation":
        text = str(data["alpha"])
        err = parse_rational(str(data.get("alpha_error", "0")))
        if text.lstrip("-").startswith("0x"):
            alpha = HighPrecisionReal.from_hex(text, err, bool(data.get("irrational", False)))
        else:
            alpha = HighPrecisionReal(parse_rational(text), err, bool(data.get("irrational", False)))
        return RotationMap(alpha)
    if kind == "affine":
        return AffineLineMap(parse_rational(str(data["a"])), parse_rational(str(data.get("b", "0"))))
    if kind == "power":
        return PowerMap(int(data["p"]))
    raise InputError(f"unknown map kind {kind!r}")


def map_to_json(f: DynMap) -> dict:
    return f.to_json()

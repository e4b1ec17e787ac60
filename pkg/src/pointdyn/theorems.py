"""Finite-truncation harness for the limit-transfer statements.

Each statement says that a property of the limit ``f`` at ``x`` holds exactly
when a family of index sets built from the members ``f_n`` has a nonempty
tail intersection ``∪_{m>=1} ∩_{n>=m} S(f_n)``.  The harness truncates the
union at ``m <= M`` and the intersection at ``n <= N``, computes that
condition, runs the direct checker on the limit and records whether the two
verdicts are compatible.

A nonempty truncated tail is reported with a witness re-checked in every
member of the tail.  An empty truncated tail says nothing about larger
``m`` or ``N``, so it only counts as a refutation when certified; the one
certificate available is a family that is constant by construction, where
every index set is the limit's own and the direct certificate transfers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import intervals as ivs
from .convergence import ConvergenceConfig, MapFamily, mode_status
from .errors import CapabilityError, InputError, PreconditionError, ScaleError
from .intervals import INF, Interval
from .maps import FORWARD, TWO_SIDED, DynMap, RotationMap, arc, fixed_points
from .metric import Space, check_point, format_rational
from .pointwise import (
    check_expansive_point,
    check_periodic_density_point,
    check_positively_expansive_point,
    check_sensitive_point,
    check_transitive_point,
    containment_certificate,
    dist,
    inverse_of,
    nonseparating_set,
    sensitivity_radii,
    target_basis,
    _tail_start,
)
from .shadowing import check_shadowable_point, check_specification_point, shadow_delta_status, spec_gap_status
from .stability import check_persistent_point, check_weak_stable_point, stability_delta_status, variant_setup
from .tracing import MAX_PIECES, closed_ball, open_ball
from .verdict import DEFAULT_SCALE, ScaleConfig, Status, Verdict, jsonable

PROPERTIES = ("pos-expansive", "expansive", "sensitive", "periodic-density", "transitive", "mixing")
SHADOW_VARIANTS = ("shadowable+", "shadowable", "specification")
STABILITY_VARIANTS = ("alpha-persistent", "weak-stable")


@dataclass(frozen=True)
class HarnessScale:
    """Truncation of the union (``M``) and of the intersection (``N``)."""

    M: int = 8
    N: int = 16
    horizon: int = 100

    def __post_init__(self):
        if not 1 <= self.M <= self.N:
            raise InputError("need N >= M >= 1")
        if self.horizon < 1:
            raise InputError("horizon must be at least 1")

    def to_json(self):
        return {"M": self.M, "N": self.N, "horizon": self.horizon}


DEFAULT_HARNESS = HarnessScale()


@dataclass
class TruncatedTailCondition:
    """``∩_{n=m}^{N} S(f_n)`` for the smallest ``m <= M`` that keeps it nonempty."""

    tag: str
    params: dict
    M: int
    N: int
    nonempty: bool
    witness: object = None
    start: int | None = None

    def to_json(self):
        return {"tag": self.tag, "params": jsonable(self.params), "M": self.M, "N": self.N,
                "nonempty": self.nonempty, "witness": jsonable(self.witness), "start": self.start}


def _least(items):
    try:
        return min(items)
    except TypeError:
        return min(items, key=repr)


def truncated_tail_nonempty(family, setgen: Callable[[int], object], M: int, N: int,
                            tag: str = "", params=None) -> TruncatedTailCondition:
    """Is ``∩_{n=m}^{N} setgen(n)`` nonempty for some ``m <= M``?

    Intersections only shrink as ``m`` decreases, so ``m = M`` decides; the
    reported start is the smallest ``m`` whose tail still holds the witness set.
    """
    if not 1 <= M <= N:
        raise InputError("need N >= M >= 1")
    name = getattr(family, "name", family)
    params = {"family": name, **(params or {})}
    sets = {}

    def get(n):
        if n not in sets:
            sets[n] = frozenset(setgen(n))
        return sets[n]

    common = None
    for n in range(M, N + 1):
        common = get(n) if common is None else common & get(n)
        if not common:
            return TruncatedTailCondition(tag, params, M, N, False)
    start = M
    while start > 1:
        nxt = common & get(start - 1)
        if not nxt:
            break
        common, start = nxt, start - 1
    return TruncatedTailCondition(tag, params, M, N, True, _least(common), start)


@dataclass
class AgreementRecord:
    property: str
    point: Fraction
    condition: Status
    direct: Status
    agree: bool
    scale: dict
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self):
        return {"property": self.property, "point": jsonable(self.point),
                "condition": self.condition.value, "direct": self.direct.value,
                "agree": self.agree, "scale": jsonable(self.scale),
                "details": jsonable(self.details), "notes": list(self.notes)}


def _compatible(a: Status, b: Status) -> bool:
    return {a, b} != {Status.CONFIRMED, Status.REFUTED}


def _record(prop, x, cond_status, cond_detail, direct: Verdict, hs, cfg, notes=()):
    return AgreementRecord(prop, x, cond_status, direct.status, _compatible(cond_status, direct.status),
                           {"harness": hs.to_json(), "config": cfg.to_json()},
                           {"condition": cond_detail, "direct": direct.witness}, list(notes))


def _settle_empty(fam: MapFamily, direct: Verdict, detail: dict):
    """Status of a condition whose truncated tail came out empty."""
    if fam.constant and direct.refuted:
        detail["certificate"] = "constant family: the index sets are the limit's own"
        return Status.REFUTED
    detail["uncertified"] = "tail empty at this truncation; larger m or N may differ"
    return Status.INCONCLUSIVE


# -- hypotheses ----------------------------------------------------------------------

_MODE_NAMES = {"pwoc": "pointwise weak orbital convergence", "oc": "orbital convergence"}


def require_mode(fam: MapFamily, mode: str, hs: HarnessScale, inverse: bool = False) -> dict:
    """Raise :class:`PreconditionError` when the classifier refutes ``mode``."""
    ccfg = ConvergenceConfig(horizon=hs.horizon)
    target = fam
    if inverse:
        if not fam.has_inverses(hs.N):
            raise PreconditionError(f"{fam.name}: members or limit are not invertible", f"{mode} of inverses")
        target = fam.inverse_family()
    res = mode_status(target, mode, ccfg)
    label = f"{mode} of inverses" if inverse else mode
    if res.status is Status.REFUTED:
        lows = res.witness.get("lower_bounds", {})
        floor = f", deviation stays >= {format_rational(min(lows.values()))}" if lows else ""
        raise PreconditionError(
            f"{target.name}: {_MODE_NAMES[mode]} refuted{floor}; the transfer statement "
            f"assumes {mode}, so differing verdicts for members and limit are no contradiction",
            label)
    return {label: res.status.value}


# -- set helpers -----------------------------------------------------------------------

def _far_region(space: Space, c, delta) -> tuple:
    """Closure of ``{z : d(z, c) > delta}``."""
    if space is Space.CIRCLE:
        if delta >= Fraction(1, 2):
            return ()
        return arc(c + delta, c + 1 - delta)
    if space is Space.LINE:
        return (Interval(-INF, c - delta), Interval(c + delta, INF))
    out = []
    if c - delta >= 0:
        out.append(Interval(0, c - delta))
    if c + delta <= 1:
        out.append(Interval(c + delta, 1))
    return tuple(out)


def _pre_once(f: DynMap, pieces):
    out = []
    window = f.domain()
    for iv in pieces:
        out.extend(f.preimage(iv, window))
    res = ivs.normalize(out)
    if len(res) > MAX_PIECES:
        raise ScaleError(f"preimage fragmented into more than {MAX_PIECES} pieces")
    return res


def _pullback(f: DynMap, pieces, k: int):
    """Outer approximation of ``f^{-k}(pieces)`` (exact off rotations)."""
    if not pieces:
        return ()
    if isinstance(f, RotationMap):
        s = f.error_after(k)
        return ivs.normalize(p for iv in pieces for p in arc(iv.lo - k * f.angle - s, iv.hi - k * f.angle + s))
    cur = tuple(pieces)
    for _ in range(k):
        cur = _pre_once(f, cur)
        if not cur:
            break
    return cur


def _err(f: DynMap, k: int):
    return f.error_after(abs(k)) if isinstance(f, RotationMap) else Fraction(0)


def _candidates_in(pieces):
    """Interior sample points of positive-length pieces, longest first."""
    out = []
    for iv in sorted(pieces, key=lambda p: -(p.hi - p.lo) if p.hi != INF and p.lo != -INF else 0):
        if iv.lo == -INF or iv.hi == INF:
            out.append((iv.hi - 1) if iv.lo == -INF else iv.lo + 1)
        elif iv.hi > iv.lo:
            out.append((iv.lo + iv.hi) / 2)
    return out


class _Members:
    def __init__(self, fam: MapFamily, hs: HarnessScale):
        self.fam, self.hs = fam, hs
        self._orbits = {}

    def tail(self, start=None):
        return range(self.hs.M if start is None else start, self.hs.N + 1)

    def orbit(self, n, x, backward=False):
        key = (n, x, backward)
        if key not in self._orbits:
            f = self.fam(n)
            g = inverse_of(f) if backward else f
            pts = [x]
            for k in range(1, self.hs.horizon + 1):
                pts.append(g.iterate_value(x, k) if isinstance(g, RotationMap) else g.eval(pts[-1]))
            self._orbits[key] = pts
        return self._orbits[key]


# -- pointwise properties ------------------------------------------------------------

def _probe_points(f: DynMap, x, delta, cfg: ScaleConfig):
    """Points y ≠ x: a geometric ladder toward x and a lattice of mesh ``cfg.basis``."""
    pts = set()
    r = delta
    while r >= cfg.grid:
        pts.update((x + r, x - r))
        r /= 2
    if f.space is Space.LINE:
        lo, hi = x - 4, x + 4
    else:
        lo, hi = Fraction(0), Fraction(1)
    n = int((hi - lo) / cfg.basis)
    pts.update(lo + i * cfg.basis for i in range(n + 1))
    out = []
    for p in pts:
        if f.space is Space.CIRCLE:
            p = p % 1
        elif f.space is Space.INTERVAL and not 0 <= p <= 1:
            continue
        if p != x:
            out.append(p)
    return sorted(out, key=lambda p: (dist(f.space, p, x), p))


def _expansive_condition(fam, mem: _Members, x, cfg, two_sided):
    space = fam.space
    hs = mem.hs
    failures = {}
    for delta in sorted(cfg.delta_sweep):
        bad = None
        witnesses = {}
        for y in _probe_points(fam.limit, x, delta, cfg):
            def setgen(n, y=y):
                f = fam(n)
                out = set()
                for backward in ((False, True) if two_sided else (False,)):
                    ox, oy = mem.orbit(n, x, backward), mem.orbit(n, y, backward)
                    for k in range(0 if not backward else 1, hs.horizon + 1):
                        if dist(space, ox[k], oy[k]) - 2 * _err(f, k) > delta:
                            out.add(-k if backward else k)
                return out
            cond = truncated_tail_nonempty(fam, setgen, hs.M, hs.N, "E" if two_sided else "E+",
                                           {"x": x, "y": y, "delta": delta})
            if not cond.nonempty:
                bad = cond
                break
            witnesses[y] = (cond.witness, cond.start)
        if bad is None:
            return Status.CONFIRMED, {"delta": delta, "index_per_y": witnesses}
        failures[delta] = bad
    return None, {"empty_tails": failures}


def _sensitive_condition(fam, mem: _Members, x, cfg):
    space = fam.space
    failures = {}
    for delta in sorted(cfg.delta_sweep):
        found = {}
        failed = None
        for eps in sensitivity_radii(cfg, delta):
            hit = _sensitive_pair(fam, mem, x, eps, delta, space)
            if hit is None:
                failed = eps
                break
            found[eps] = hit
        if failed is None:
            return Status.CONFIRMED, {"delta": delta, "pairs": found}
        failures[delta] = {"epsilon": failed}
    return None, {"empty_tails": failures}


def _sensitive_pair(fam, mem, x, eps, delta, space):
    """A pair ``(y, k)`` in ``Se_x(f_n, eps, delta)`` for every ``n`` of the tail."""
    hs = mem.hs
    ball = closed_ball(space, x, eps)
    for k in range(1, hs.horizon + 1):
        s = ball
        for n in mem.tail():
            far = _far_region(space, mem.orbit(n, x)[k], delta + 2 * _err(fam(n), k))
            s = ivs.intersect_sets(s, _pullback(fam(n), far, k))
            if not s:
                break
        for y in _candidates_in(s):
            if not dist(space, x, y) < eps:
                continue
            if all(dist(space, mem.orbit(n, x)[k], mem.orbit(n, y)[k]) - 2 * _err(fam(n), k) > delta
                   for n in mem.tail()):
                return (y, k)
    return None


def _periodic_condition(fam, mem: _Members, x, cfg):
    space = fam.space
    hs = mem.hs
    tight = min(cfg.delta_sweep)
    found = {}
    for eps in sorted(cfg.eps_list):
        region = Interval(x - eps, x + eps)
        zs = set()
        for n in mem.tail():
            for k in range(1, cfg.max_period + 1):
                try:
                    zs.update(fixed_points(fam(n), k).meets(region, exclude=x))
                except (CapabilityError, ScaleError):
                    pass
        zs.update(p for p in (x - eps / 2, x + eps / 2, x - eps / 4, x + eps / 4))
        zs = [z % 1 if space is Space.CIRCLE else z for z in zs]
        zs = [z for z in zs if (space is not Space.INTERVAL or 0 <= z <= 1) and 0 < dist(space, z, x) < eps]

        def setgen(n):
            f = fam(n)
            out = set()
            for z in zs:
                for k in range(1, cfg.max_period + 1):
                    if dist(space, f.iterate_value(z, k), z) + _err(f, k) < tight:
                        out.add((z, k))
            return out

        cond = truncated_tail_nonempty(fam, setgen, hs.M, hs.N, "P", {"x": x, "epsilon": eps, "delta": tight})
        if not cond.nonempty:
            return None, {"epsilon": eps, "candidates": len(zs)}
        found[eps] = (cond.witness, cond.start)
    return Status.CONFIRMED, {"periodic_witnesses": found, "delta": tight}


def _transitive_condition(fam, mem: _Members, x, cfg, mode):
    space = fam.space
    hs = mem.hs
    u = open_ball(space, x, cfg.eps_min)
    per_target = {}
    worst = None
    for v in target_basis(fam.limit, x, cfg.basis):
        hits, empty = set(), set()
        cur = {n: v.closure() for n in mem.tail()}
        for k in range(1, hs.horizon + 1):
            s = u.closure()
            for n in mem.tail():
                f = fam(n)
                cur[n] = _pullback(f, v.closure(), k) if isinstance(f, RotationMap) else _pre_once(f, cur[n])
                s = ivs.intersect_sets(s, cur[n])
            if not s:
                empty.add(k)
                continue
            for y in _candidates_in(s):
                if u.contains(y) and all(_lands(fam(n), y, k, v) for n in mem.tail()):
                    hits.add(k)
                    break
        per_target[v.center] = (hits, empty)
        if mode == "transitive":
            if not hits:
                worst = v.center
                if len(empty) == hs.horizon:
                    break
        elif _tail_start(hits, hs.horizon) is None:
            worst = v.center
    if worst is None:
        if mode == "transitive":
            return Status.CONFIRMED, {"U": u, "first_common_hit": {c: min(h) for c, (h, _) in per_target.items()}}
        return Status.CONFIRMED, {"U": u, "tail_starts": {c: _tail_start(h, hs.horizon)
                                                           for c, (h, _) in per_target.items()}}
    hits, empty = per_target[worst]
    return None, {"U": u, "V_center": worst, "common_hits": sorted(hits), "exactly_empty": len(empty)}


def _lands(f: DynMap, y, k, v) -> bool:
    z = f.iterate_value(y, k)
    if isinstance(f, RotationMap):
        return dist(Space.CIRCLE, z, v.center) + f.error_after(k) < v.radius
    return v.contains(z)


_DIRECT = {
    "pos-expansive": check_positively_expansive_point,
    "expansive": check_expansive_point,
    "sensitive": check_sensitive_point,
    "periodic-density": check_periodic_density_point,
    "transitive": lambda f, x, cfg: check_transitive_point(f, x, cfg, "transitive"),
    "mixing": lambda f, x, cfg: check_transitive_point(f, x, cfg, "mixing"),
}


def verify_limit_property(prop: str, fam: MapFamily, x, cfg: ScaleConfig = DEFAULT_SCALE,
                          hs: HarnessScale = DEFAULT_HARNESS) -> AgreementRecord:
    """Condition on the members versus the direct verdict on the limit.

    Requires that pointwise weak orbital convergence is not refuted (and,
    for two-sided expansivity, the same for the inverse family).
    """
    if prop not in PROPERTIES:
        raise InputError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTIES)}")
    x = check_point(fam.space, x)
    hyp = require_mode(fam, "pwoc", hs)
    if prop == "expansive":
        hyp.update(require_mode(fam, "pwoc", hs, inverse=True))
    cfg = cfg.with_(horizon=hs.horizon)
    direct = _DIRECT[prop](fam.limit, x, cfg)
    mem = _Members(fam, hs)
    try:
        if prop in ("pos-expansive", "expansive"):
            st, detail = _expansive_condition(fam, mem, x, cfg, prop == "expansive")
        elif prop == "sensitive":
            st, detail = _sensitive_condition(fam, mem, x, cfg)
        elif prop == "periodic-density":
            st, detail = _periodic_condition(fam, mem, x, cfg)
        else:
            st, detail = _transitive_condition(fam, mem, x, cfg, prop)
    except (ScaleError, CapabilityError) as exc:
        st, detail = Status.INCONCLUSIVE, {"unsupported": str(exc)}
    if st is None:
        st = _settle_empty(fam, direct, detail)
    detail["hypotheses"] = hyp
    return _record(prop, x, st, detail, direct, hs, cfg)


# -- measure expansivity -------------------------------------------------------------------

def _condition_set(fam, mem: _Members, x, delta, two_sided):
    """``{y : ∩_{n=M}^{N} E_x(f_n, y, delta) = ∅}`` (forward or two-sided), exact."""
    space = fam.space
    hs = mem.hs
    maps = {id(fam(n)): fam(n) for n in mem.tail()}
    if len(maps) == 1:
        f = next(iter(maps.values()))
        if not isinstance(f, RotationMap):
            # one distinct member: the union over the tail is that map's own tube
            return nonseparating_set(f, x, delta, hs.horizon,
                                     direction=TWO_SIDED if two_sided else FORWARD).intervals
    result = (fam.limit.domain(),)
    for backward in ((False, True) if two_sided else (False,)):
        for k in range(0 if not backward else 1, hs.horizon + 1):
            near = []
            for n in mem.tail():
                f = fam(n)
                g = inverse_of(f) if backward else f
                ball = closed_ball(space, mem.orbit(n, x, backward)[k], delta + 2 * _err(f, k))
                near.extend(_pullback(g, ball, k))
            result = ivs.intersect_sets(result, ivs.normalize(near))
            if not result:
                return ()
    return result


def negligible(space: Space, x, delta, m, cfg: ScaleConfig) -> bool:
    """``m`` is at most ``cfg.measure_tol`` times the measure of the closed ``delta``-ball at ``x``."""
    return m <= cfg.measure_tol * ivs.measure(closed_ball(space, x, delta))


def check_measure_expansive_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE,
                                  direction: str = FORWARD) -> Verdict:
    """Pointwise measure expansivity from exact non-separating sets.

    Confirmed once some ``δ`` has a negligible non-separating set; refuted
    when every ``δ`` of the sweep has a trapped interval around ``x``.
    """
    if f.space is Space.LINE:
        raise CapabilityError("Lebesgue measure estimates need a bounded space")
    x = check_point(f.space, x)
    st, w = _direct_measure(f, x, cfg, direction)
    return Verdict("measure-expansive" + ("" if direction == TWO_SIDED else "+"), x, st, w, cfg)


def _direct_measure(f: DynMap, x, cfg: ScaleConfig, direction):
    two_sided = direction == TWO_SIDED
    certified = {}
    measures = {}
    for delta in cfg.delta_sweep:
        ns = nonseparating_set(f, x, delta, cfg.horizon, direction=direction)
        measures[delta] = ns.measure
        if negligible(f.space, x, delta, ns.measure, cfg):
            return Status.CONFIRMED, {"delta": delta, "measure": ns.measure, "measures": measures}
        piece = next((iv for iv in ns.intervals if iv.contains(x)), None)
        # a region of diameter <= delta around x whose images never spread beyond delta
        region = piece.intersect(Interval(x - delta / 2, x + delta / 2)) if piece is not None else None
        if region is not None and region.hi > region.lo:
            cert = containment_certificate(f, region, delta, cfg.horizon, two_sided)
            if cert is not None:
                certified[delta] = {"trapped": region, "certificate": cert}
    if len(certified) == len(cfg.delta_sweep):
        return Status.REFUTED, {"measures": measures, "trapped": certified}
    return Status.INCONCLUSIVE, {"measures": measures, "trapped": certified}


def verify_limit_measure_expansivity(fam: MapFamily, x, cfg: ScaleConfig = DEFAULT_SCALE,
                                     direction: str = FORWARD, hs: HarnessScale = DEFAULT_HARNESS) -> AgreementRecord:
    """Measure of the points whose truncated tail condition is empty, against the limit's Φ/Γ sets.

    The condition holds at ``δ`` when that measure is negligible: at most
    ``cfg.measure_tol`` times the measure of the ``δ``-ball around ``x``.
    The limit's own non-separating sets at ``δ/3`` and ``δ`` bracket the
    untruncated condition set and are reported alongside.
    """
    if fam.space is Space.LINE:
        raise CapabilityError("Lebesgue measure estimates need a bounded space")
    x = check_point(fam.space, x)
    two_sided = direction == TWO_SIDED
    hyp = require_mode(fam, "pwoc", hs)
    if two_sided:
        hyp.update(require_mode(fam, "pwoc", hs, inverse=True))
    cfg = cfg.with_(horizon=hs.horizon)
    direct = check_measure_expansive_point(fam.limit, x, cfg, direction)
    mem = _Members(fam, hs)
    measures, brackets = {}, {}
    st = None
    try:
        for delta in cfg.delta_sweep:
            c = _condition_set(fam, mem, x, delta, two_sided)
            measures[delta] = ivs.measure(c)
            lo = nonseparating_set(fam.limit, x, delta / 3, hs.horizon, direction=direction).measure
            hi = nonseparating_set(fam.limit, x, delta, hs.horizon, direction=direction).measure
            brackets[delta] = (lo, hi)
            if negligible(fam.space, x, delta, measures[delta], cfg):
                st = Status.CONFIRMED
                break
    except (ScaleError, CapabilityError) as exc:
        st = Status.INCONCLUSIVE
        measures["unsupported"] = str(exc)
    detail = {"condition_measures": measures, "limit_brackets": brackets, "hypotheses": hyp}
    if st is None:
        st = _settle_empty(fam, direct, detail)
    return _record(direct.property, x, st, detail, direct, hs, cfg)


# -- shadowing and specification -------------------------------------------------------------

def _tail_common(fam, mem, values, status_fn):
    """First value confirmed by every member of the tail, or ``None``."""
    cache = {}
    for v in values:
        ok = True
        for n in mem.tail():
            f = fam(n)
            key = (f, v)
            if key not in cache:
                cache[key] = status_fn(f, v)[0]
            if cache[key] is not Status.CONFIRMED:
                ok = False
                break
        if ok:
            return v
    return None


def verify_limit_shadowing(fam: MapFamily, x, cfg: ScaleConfig = DEFAULT_SCALE, variant: str = "shadowable+",
                           hs: HarnessScale = DEFAULT_HARNESS) -> AgreementRecord:
    """Tail-common ``δ`` (or gap ``M``) for every ``ε`` versus the direct check on the limit.

    Requires orbital convergence not refuted, for the inverse family too in
    the two-sided variant.
    """
    if variant not in SHADOW_VARIANTS:
        raise InputError(f"unknown variant {variant!r}; expected one of {', '.join(SHADOW_VARIANTS)}")
    x = check_point(fam.space, x)
    hyp = require_mode(fam, "oc", hs)
    two_sided = variant == "shadowable"
    if two_sided:
        hyp.update(require_mode(fam, "oc", hs, inverse=True))
    cfg = cfg.with_(horizon=hs.horizon)
    if variant == "specification":
        direct = check_specification_point(fam.limit, x, cfg)
        values = range(1, cfg.max_gap + 1)

        def status_fn(eps):
            return lambda f, gap: spec_gap_status(f, x, eps, gap, cfg, cfg.pattern_budget)
    else:
        direct = check_shadowable_point(fam.limit, x, cfg, TWO_SIDED if two_sided else FORWARD)
        values = cfg.delta_sweep

        def status_fn(eps):
            return lambda f, delta: shadow_delta_status(f, x, eps, delta, cfg, two_sided)
    return _tail_record(variant, fam, x, cfg, hs, direct, values, status_fn, hyp)


def _tail_record(prop, fam, x, cfg, hs, direct, values, status_fn, hyp):
    mem = _Members(fam, hs)
    common = {}
    st = Status.CONFIRMED
    detail = {"hypotheses": hyp}
    try:
        for eps in sorted(cfg.eps_list):
            v = _tail_common(fam, mem, values, status_fn(eps))
            if v is None:
                detail["epsilon"] = eps
                st = None
                break
            common[eps] = v
    except (ScaleError, CapabilityError) as exc:
        st = Status.INCONCLUSIVE
        detail["unsupported"] = str(exc)
    detail["common"] = common
    if st is None:
        st = _settle_empty(fam, direct, detail)
    return _record(prop, x, st, detail, direct, hs, cfg)


def verify_limit_persistence(fam: MapFamily, x, cfg: ScaleConfig = DEFAULT_SCALE, variant: str = "alpha-persistent",
                             hs: HarnessScale = DEFAULT_HARNESS) -> AgreementRecord:
    """Tail-common ``δ`` in the persistence (or weak-stability) sets versus the limit.

    Requires orbital convergence of the family and of its inverses.
    """
    if variant not in STABILITY_VARIANTS:
        raise InputError(f"unknown variant {variant!r}; expected one of {', '.join(STABILITY_VARIANTS)}")
    x = check_point(fam.space, x)
    hyp = require_mode(fam, "oc", hs)
    hyp.update(require_mode(fam, "oc", hs, inverse=True))
    cfg = cfg.with_(horizon=hs.horizon)
    check = check_persistent_point if variant == "alpha-persistent" else check_weak_stable_point
    direct = check(fam.limit, x, cfg)
    budget, sample_fn, continuity = variant_setup(variant, x, cfg)

    def status_fn(eps):
        return lambda f, delta: stability_delta_status(f, x, eps, delta, cfg, budget, sample_fn, continuity)

    return _tail_record(variant, fam, x, cfg, hs, direct, cfg.delta_sweep, status_fn, hyp)


CLAUSES = {
    **{p: ("property", p) for p in PROPERTIES},
    "measure+": ("measure", FORWARD),
    "measure": ("measure", TWO_SIDED),
    **{v: ("shadowing", v) for v in SHADOW_VARIANTS},
    **{v: ("persistence", v) for v in STABILITY_VARIANTS},
}


def run_clause(clause: str, fam: MapFamily, x, cfg: ScaleConfig = DEFAULT_SCALE,
               hs: HarnessScale = DEFAULT_HARNESS) -> AgreementRecord:
    if clause not in CLAUSES:
        raise InputError(f"unknown clause {clause!r}; expected one of {', '.join(CLAUSES)}")
    kind, arg = CLAUSES[clause]
    if kind == "property":
        return verify_limit_property(arg, fam, x, cfg, hs)
    if kind == "measure":
        return verify_limit_measure_expansivity(fam, x, cfg, arg, hs)
    if kind == "shadowing":
        return verify_limit_shadowing(fam, x, cfg, arg, hs)
    return verify_limit_persistence(fam, x, cfg, arg, hs)

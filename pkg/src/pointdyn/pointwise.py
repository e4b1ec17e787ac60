"""Finite-scale checkers for pointwise dynamical properties.

Every checker returns a :class:`~pointdyn.verdict.Verdict`.  Confirmations
list the evidence found inside the truncation window; refutations carry a
certificate that rules the property out for the whole (untruncated) orbit:
an interval that contains the relevant neighbourhood, is mapped into itself
and stays below the separation threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import intervals as ivs
from .errors import CapabilityError, InputError, ScaleError
from .intervals import INF, Interval
from .maps import (
    FORWARD,
    TWO_SIDED,
    DynMap,
    PLMap,
    RotationMap,
    fixed_points,
    iterate_pl,
    orbit,
)
from .metric import Space, check_point, wrap
from .tracing import OpenSet, feasible_set, open_ball, tube_constraints
from .verdict import DEFAULT_SCALE, IndexSetWitness, ScaleConfig, Status, Verdict, meet

_inverse_cache: dict = {}


def inverse_of(f: DynMap) -> DynMap:
    inv = _inverse_cache.get(f)
    if inv is None:
        inv = f.inverse()
        _inverse_cache[f] = inv
    return inv


def dist(space: Space, a, b):
    d = abs(a - b)
    if space is Space.CIRCLE:
        d = d - math.floor(d)
        return min(d, 1 - d)
    if space is Space.LINE:
        return min(d, Fraction(1))
    return d


# -- candidate points -----------------------------------------------------

def candidates(f: DynMap, x, radius, cfg: ScaleConfig, extra=()) -> list:
    """Points ``y ≠ x`` with ``d(x, y) < radius``, closest first.

    Midpoints of the dyadic partition of mesh ``cfg.grid``, breakpoints of
    low iterates of ``f`` and any ``extra`` points.
    """
    g = cfg.grid
    space = f.space
    pts = set()
    lo_i = math.floor((x - radius) / g) - 1
    hi_i = math.ceil((x + radius) / g) + 1
    for i in range(lo_i, hi_i + 1):
        pts.add((i + Fraction(1, 2)) * g)
    pts.update(_breakpoint_candidates(f, cfg))
    pts.update(extra)
    out = []
    for p in pts:
        if space is Space.CIRCLE:
            p = wrap(p)
        elif space is Space.INTERVAL and not (0 <= p <= 1):
            continue
        d = dist(space, x, p)
        if 0 < d < radius:
            out.append((d, p))
    out.sort()
    return [p for _, p in out]


_bp_cache: dict = {}


def _breakpoint_candidates(f: DynMap, cfg: ScaleConfig) -> list:
    key = (f, cfg.candidate_cap)
    if key in _bp_cache:
        return _bp_cache[key]
    pts = list(f.sample_points())
    if isinstance(f, PLMap):
        for k in (2, 3):
            try:
                g = iterate_pl(f, k, max_breakpoints=cfg.candidate_cap)
            except ScaleError:
                break
            pts.extend(g.xs)
    pts = [p for p in pts if p not in (INF, -INF)]
    _bp_cache[key] = pts
    return pts


# -- orbits and separation ----------------------------------------------------

class OrbitCache:
    """Forward (and optionally backward) orbit of the base point."""

    def __init__(self, f: DynMap, x, horizon: int, two_sided: bool):
        self.f = f
        self.x = x
        self.fwd = list(orbit(f, x, horizon, FORWARD).points)
        self.bwd = []
        if two_sided:
            inv = inverse_of(f)
            p = x
            for _ in range(horizon):
                p = inv.eval(p)
                self.bwd.append(p)


def separation_time(cache: OrbitCache, y, delta, two_sided: bool, start: int = 0):
    """Index of smallest ``|n|`` (forward first on ties) with ``d(f^n x, f^n y) > delta``."""
    f = cache.f
    space = f.space
    if f.is_isometry:
        return 0 if dist(space, cache.x, y) > delta and start == 0 else None
    inv = inverse_of(f) if two_sided else None
    p = q = y
    for n, a in enumerate(cache.fwd):
        if n:
            p = f.eval(p)
        if n >= start and dist(space, p, a) > delta:
            return n
        if inv is not None and n < len(cache.bwd):
            q = inv.eval(q)
            if dist(space, q, cache.bwd[n]) > delta:
                return -(n + 1)
    return None


def separation_index_set(f: DynMap, x, y, delta, horizon: int, direction: str = FORWARD) -> IndexSetWitness:
    """Exactly the indices in the window where the two orbits are more than ``delta`` apart."""
    x = check_point(f.space, x)
    y = check_point(f.space, y)
    if x == y:
        raise InputError("separation sets need distinct points")
    ox = orbit(f, x, horizon, direction)
    oy = orbit(f, y, horizon, direction)
    idx = tuple(n for n, a, b in zip(ox.indices, ox.points, oy.points) if dist(f.space, a, b) > delta)
    lo = -horizon if direction == TWO_SIDED else 0
    return IndexSetWitness("E" if direction == TWO_SIDED else "E+", {"x": x, "y": y, "delta": delta},
                           (lo, horizon), idx)


# -- containment certificates -------------------------------------------------

_marks_cache: dict = {}


def _fixed_marks(f: DynMap) -> list:
    if f in _marks_cache:
        return _marks_cache[f]
    fp = fixed_points(f, 1)
    marks = list(fp.points)
    for iv in fp.intervals:
        marks.extend([iv.lo, iv.hi])
    out = sorted(m for m in marks if m not in (INF, -INF))
    _marks_cache[f] = out
    return out


def _invariant_extension(f: DynMap, h: Interval, bound, backward: bool):
    """An interval ``J ⊇ h`` with ``f(J) ⊆ J`` (or ``f⁻¹(J) ⊆ J``) and length <= ``bound``."""
    if isinstance(f, RotationMap):
        if f.angle == 0 and f.alpha.error == 0 and h.length <= bound:
            return h
        return None
    g = inverse_of(f) if backward else f
    marks = _fixed_marks(f)
    left = [m for m in marks if m <= h.lo]
    right = [m for m in marks if m >= h.hi]
    options = [h]
    if left:
        options.append(Interval(left[-1], h.hi))
    if right:
        options.append(Interval(h.lo, right[0]))
    if left and right:
        options.append(Interval(left[-1], right[0]))
    for j in options:
        if j.length > bound:
            continue
        if ivs.subset(g.image(j), (j,)):
            return j
    return None


def containment_certificate(f: DynMap, region: Interval, bound, steps: int, two_sided: bool):
    """Certificate that every orbit from ``region`` stays within ``bound`` of each other.

    Iterates the hull of the region until it lands in an invariant interval
    of length <= ``bound``; each intermediate hull must also be that short.
    For two-sided certificates the same is done with the inverse map.
    """
    cert = {"region": region, "bound": bound}
    parts = [("forward", False)] + ([("backward", True)] if two_sided else [])
    for name, backward in parts:
        g = inverse_of(f) if backward else f
        h = region
        found = None
        for n in range(steps + 1):
            if h.length > bound:
                return None
            j = _invariant_extension(f, h, bound, backward)
            if j is not None:
                found = (n, j)
                break
            h = ivs.hull(g.image(h))
        if found is None:
            return None
        cert[f"{name}_steps"] = found[0]
        cert[f"{name}_invariant"] = found[1]
    return cert


def region_around(f: DynMap, x, r) -> Interval | None:
    if f.space is Space.CIRCLE:
        return Interval(x - r, x + r)
    iv = Interval(x - r, x + r)
    if f.space is Space.INTERVAL:
        iv = iv.intersect(Interval(0, 1))
    return iv


def _radii(start, floor):
    r = start
    while r >= floor:
        yield r
        r /= 2


# -- expansivity ---------------------------------------------------------------

def _expansivity(f, x, cfg, two_sided, prop):
    x = check_point(f.space, x)
    cache = OrbitCache(f, x, cfg.horizon, two_sided)
    refutations = {}
    failures = {}
    # smallest thresholds first: they are the likeliest to separate everything
    for delta in reversed(cfg.delta_sweep):
        # a certificate settles this threshold without scanning candidates
        for r in _radii(delta / 2, cfg.grid / 2):
            region = region_around(f, x, r)
            cert = containment_certificate(f, region, delta, cfg.horizon, two_sided)
            if cert is not None:
                companion = region.hi if region.hi != x else region.lo
                if f.space is Space.CIRCLE:
                    companion = wrap(companion)
                refutations[delta] = {"companion": companion, "certificate": cert}
                break
        if delta in refutations:
            continue
        seps = []
        failing = None
        for y in candidates(f, x, delta + cfg.grid, cfg):
            n = separation_time(cache, y, delta, two_sided)
            if n is None:
                failing = y
                break
            seps.append((y, n))
        if failing is None:
            return Verdict(prop, x, Status.CONFIRMED,
                           {"delta": delta, "separations": seps, "two_sided": two_sided}, cfg)
        failures[delta] = failing
    if len(refutations) == len(cfg.delta_sweep):
        return Verdict(prop, x, Status.REFUTED, {"per_delta": refutations, "two_sided": two_sided}, cfg)
    return Verdict(prop, x, Status.INCONCLUSIVE,
                   {"unseparated": failures, "certified": sorted(refutations)}, cfg)


def check_expansive_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE) -> Verdict:
    if not f.invertible:
        raise CapabilityError("expansive points are defined for invertible maps only")
    return _expansivity(f, x, cfg, True, "expansive")


def check_positively_expansive_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE) -> Verdict:
    return _expansivity(f, x, cfg, False, "positively-expansive")


# -- sensitivity ---------------------------------------------------------------

def sensitivity_radii(cfg: ScaleConfig, delta) -> list:
    """Neighbourhood radii tested against ``delta``, smallest first.

    Only radii below ``delta`` are informative: a larger ball always holds
    points that start more than ``delta`` away.
    """
    radii = {e for e in cfg.eps_list if e < delta} | {delta / 2, delta / 4}
    return sorted(radii)


def check_sensitive_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE) -> Verdict:
    x = check_point(f.space, x)
    cache = OrbitCache(f, x, cfg.horizon, False)
    refutations = {}
    failures = {}
    for delta in reversed(cfg.delta_sweep):
        for r in _radii(min(cfg.eps_min, delta), cfg.grid / 2):
            cert = containment_certificate(f, region_around(f, x, r), delta, cfg.horizon, False)
            if cert is not None:
                refutations[delta] = {"radius": r, "certificate": cert}
                break
        if delta in refutations:
            continue
        pairs = {}
        failed_eps = None
        for eps in sensitivity_radii(cfg, delta):
            extra = [x + eps / 2, x - eps / 2, x + eps / 4, x - eps / 4]
            found = None
            for y in reversed(candidates(f, x, eps, cfg, extra)):
                n = separation_time(cache, y, delta, False, start=1)
                if n is not None:
                    found = (y, n)
                    break
            if found is None:
                failed_eps = eps
                break
            pairs[eps] = found
        if failed_eps is None:
            return Verdict("sensitive", x, Status.CONFIRMED, {"delta": delta, "pairs": pairs}, cfg)
        failures[delta] = failed_eps
    if len(refutations) == len(cfg.delta_sweep):
        return Verdict("sensitive", x, Status.REFUTED, {"per_delta": refutations}, cfg)
    return Verdict("sensitive", x, Status.INCONCLUSIVE,
                   {"failed_radius": failures, "certified": sorted(refutations)}, cfg)


# -- periodic points -----------------------------------------------------------

def periodic_points_near(f: DynMap, x, eps, max_period: int):
    """First ``(z, k)`` with ``z ≠ x``, ``d(z, x) < eps`` and ``f^k(z) = z``."""
    region = region_around(f, x, eps)
    for k in range(1, max_period + 1):
        fp = fixed_points(f, k)
        if isinstance(f, RotationMap):
            if fp.intervals:
                return (wrap(x + eps / 2), k)
            continue
        for z in fp.meets(region, exclude=x):
            if 0 < abs(z - x) < eps:
                return (z, k)
    return None


def check_periodic_density_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE, max_period=None) -> Verdict:
    x = check_point(f.space, x)
    max_period = max_period or cfg.max_period
    found = {}
    for eps in sorted(cfg.eps_list, reverse=True):
        hit = periodic_points_near(f, x, eps, max_period)
        if hit is None:
            cert = _no_periodic_certificate(f, x, eps, max_period)
            if cert is not None:
                return Verdict("periodic-density", x, Status.REFUTED, {"epsilon": eps, "certificate": cert}, cfg)
            return Verdict("periodic-density", x, Status.INCONCLUSIVE,
                           {"epsilon": eps, "reason": "no periodic point found, no certificate"}, cfg)
        found[eps] = {"point": hit[0], "period": hit[1]}
    return Verdict("periodic-density", x, Status.CONFIRMED, {"periodic_points": found}, cfg)


def _no_periodic_certificate(f, x, eps, max_period):
    if isinstance(f, RotationMap):
        if f.alpha.irrational:
            return {"reason": "irrational rotation has no periodic points"}
        return None
    if not f.nondecreasing:
        return None
    # a nondecreasing self-map of an interval or the line has only fixed points as periodic points
    return {"reason": "nondecreasing map: every periodic point is fixed",
            "checked_periods": max_period,
            "fixed_points": fixed_points(f, 1).to_json(),
            "deleted_ball": [x - eps, x + eps]}


# -- transitivity and mixing ---------------------------------------------------

def _image_sequence(f: DynMap, u: tuple, horizon: int):
    imgs = []
    cur = u
    for _ in range(horizon):
        nxt = []
        for iv in cur:
            nxt.extend(f.image(iv))
        cur = ivs.normalize(nxt)
        imgs.append(cur)
    return imgs


def hitting_times(f: DynMap, x, u: OpenSet, v: OpenSet, horizon: int, images=None) -> IndexSetWitness:
    """Truncated ``{n >= 1 : f^n(U) ∩ V ≠ ∅}``.

    Exact for interval maps; for rotations each image is an arc whose
    position is known to within the accumulated angle error, and indices
    whose membership that error leaves undecided are reported as
    non-members with ``exact=False``.
    """
    if not u.contains(check_point(f.space, x)):
        raise InputError("U must contain x")
    closure = u.closure()
    hits, exact = [], True
    if isinstance(f, RotationMap):
        for n in range(1, horizon + 1):
            img = ivs.normalize(p for iv in closure for p in f.shift_arc(iv, n))
            m = v.meets(img, f.error_after(n))
            if m is None:
                exact = False
            elif m:
                hits.append(n)
    else:
        if images is None:
            images = _image_sequence(f, closure, horizon)
        for n, img in enumerate(images[:horizon], start=1):
            m = v.meets(img, f.image_tolerance * n)
            if m is None:
                exact = False
            elif m:
                hits.append(n)
    return IndexSetWitness("N", {"x": x, "U": u, "V": v}, (1, horizon), tuple(hits), exact)


def target_basis(f: DynMap, x, radius) -> list:
    """Open balls of the given radius centred on a lattice of the same mesh."""
    if f.space is Space.LINE:
        lo, hi = math.floor(x) - 1, math.ceil(x) + 1
    else:
        lo, hi = 0, 1
    count = int((hi - lo) / radius)
    centers = [lo + i * radius for i in range(count + 1)]
    if f.space is Space.CIRCLE:
        centers = centers[:-1]
    return [open_ball(f.space, c, radius) for c in centers]


def _rotation_cover_time(f: RotationMap, width, limit: int):
    """Smallest K with every gap of {kα : 0<=k<=K} shorter than ``width`` (margin included)."""
    pts = [Fraction(0)]
    import bisect as _b
    for k in range(1, limit + 1):
        _b.insort(pts, f.iterate_value(0, k))
        if k % 16 and k != limit:
            continue
        gaps = [b - a for a, b in zip(pts, pts[1:])] + [1 - pts[-1] + pts[0]]
        if max(gaps) + 2 * f.error_after(k) < width:
            return k
    return None


def _never_hits_certificate(f: DynMap, u: OpenSet, v: OpenSet, images=()):
    """Proof that no image of U ever meets V.

    For rotations by a rational angle, the finitely many images of U miss V.
    Otherwise some image ``f^n(U)`` (n >= 0) lies in a forward-invariant
    interval disjoint from V while the earlier images miss V.
    """
    if isinstance(f, RotationMap):
        if not f.rational:
            return None
        q = Fraction(f.angle).denominator
        union = ivs.normalize(p for iv in u.closure() for k in range(q) for p in f.shift_arc(iv, k))
        if v.meets(union) is False:
            return {"kind": "periodic-rotation", "period": q, "orbit_of_U": union}
        return None
    bound = INF if f.space is Space.LINE else 1
    seq = [u.closure(), *images]
    for n, img in enumerate(seq):
        if n and v.meets(img, f.image_tolerance * n) is not False:
            return None
        j = _invariant_extension(f, ivs.hull(img), bound, False)
        if j is not None and v.meets((j,)) is False:
            return {"kind": "invariant-interval", "after": n, "invariant": j}
    return None


def _gap_target(f: RotationMap, u: OpenSet):
    """For a rational rotation: an open arc missed by every image of U."""
    q = Fraction(f.angle).denominator
    union = ivs.normalize(p for iv in u.closure() for k in range(q) for p in f.shift_arc(iv, k))
    if len(union) == 1 and union[0].lo == 0 and union[0].hi == 1:
        return None
    # complement gaps on [0,1]
    pts = [Fraction(0)] + [e for iv in union for e in (iv.lo, iv.hi)] + [Fraction(1)]
    best = None
    for a, b in zip(pts[0::2], pts[1::2]):
        if b > a and (best is None or b - a > best[1] - best[0]):
            best = (a, b)
    if best is None:
        return None
    c, r = (best[0] + best[1]) / 2, (best[1] - best[0]) / 4
    return open_ball(Space.CIRCLE, c, r)


def check_transitive_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE, mode: str = "transitive") -> Verdict:
    if mode not in ("transitive", "mixing"):
        raise InputError(f"unknown mode {mode!r}")
    x = check_point(f.space, x)
    u = open_ball(f.space, x, cfg.eps_min)
    basis = target_basis(f, x, cfg.basis)
    prop = mode
    if isinstance(f, RotationMap):
        return _rotation_transitivity(f, x, u, basis, cfg, mode)
    horizon = cfg.horizon
    images = _image_sequence(f, u.closure(), horizon)
    per_target = []
    for v in basis:
        hs = hitting_times(f, x, u, v, horizon, images)
        per_target.append((v, hs))
    if mode == "transitive":
        misses = [(v, hs) for v, hs in per_target if hs.empty]
        if not misses:
            return Verdict(prop, x, Status.CONFIRMED,
                           {"U": u, "first_hits": [(v.center, hs.minimum()) for v, hs in per_target]}, cfg)
        for v, _ in misses:
            cert = _never_hits_certificate(f, u, v, images)
            if cert is not None:
                return Verdict(prop, x, Status.REFUTED, {"U": u, "V": v, "certificate": cert}, cfg)
        return Verdict(prop, x, Status.INCONCLUSIVE, {"U": u, "unhit": [v.center for v, _ in misses]}, cfg)
    tails = []
    bad = []
    for v, hs in per_target:
        k = _tail_start(hs.indices, horizon)
        if k is None:
            bad.append((v, hs))
        else:
            tails.append((v.center, k))
    if not bad:
        return Verdict(prop, x, Status.CONFIRMED, {"U": u, "tail_starts": tails}, cfg)
    for v, hs in bad:
        cert = _never_hits_certificate(f, u, v, images)
        if cert is not None:
            return Verdict(prop, x, Status.REFUTED, {"U": u, "V": v, "certificate": cert}, cfg)
    return Verdict(prop, x, Status.INCONCLUSIVE, {"U": u, "no_tail": [v.center for v, _ in bad]}, cfg)


def _tail_start(indices, horizon: int):
    """Start of a full tail ``[k, horizon]`` inside ``indices`` with ``k <= horizon/2``."""
    s = set(indices)
    k = horizon
    if k not in s:
        return None
    while k - 1 >= 1 and (k - 1) in s:
        k -= 1
    return k if k <= horizon // 2 else None


def _rotation_transitivity(f: RotationMap, x, u, basis, cfg, mode):
    limit = cfg.rotation_horizon
    width = 2 * cfg.eps_min
    if f.rational:
        v = _gap_target(f, u)
        if v is not None:
            cert = _never_hits_certificate(f, u, v)
            return Verdict(mode, x, Status.REFUTED, {"U": u, "V": v, "certificate": cert}, cfg)
        # orbit of U covers the circle: every target is hit within one period
        k = Fraction(f.angle).denominator
    else:
        k = _rotation_cover_time(f, width, limit)
    if mode == "transitive":
        if k is None:
            return Verdict(mode, x, Status.INCONCLUSIVE, {"reason": "orbit gaps not below |U| within horizon"}, cfg)
        firsts = []
        for v in basis:
            hs = hitting_times(f, x, u, v, k)
            if hs.empty:
                return Verdict(mode, x, Status.INCONCLUSIVE, {"U": u, "unhit": v.center}, cfg)
            firsts.append((v.center, hs.minimum()))
        return Verdict(mode, x, Status.CONFIRMED, {"U": u, "cover_time": k, "first_hits": firsts}, cfg)
    # mixing: an isometry maps U to arcs of fixed length, so any target whose
    # combined arc with U is shorter than the circle is missed again and again
    v = basis[len(basis) // 2]
    if 2 * cfg.eps_min + 2 * v.radius >= 1:
        return Verdict(mode, x, Status.INCONCLUSIVE, {"reason": "targets too large"}, cfg)
    horizon = min(limit, max(cfg.horizon, 2 * (k or cfg.horizon)))
    hs = hitting_times(f, x, u, v, horizon)
    hit = set(hs.indices)
    misses = [n for n in range(horizon // 2 + 1, horizon + 1) if n not in hit]
    if misses:
        cert = {"kind": "isometry", "arc_length": 2 * cfg.eps_min + 2 * v.radius,
                "late_misses": misses[:8], "window": horizon}
        return Verdict(mode, x, Status.REFUTED, {"U": u, "V": v, "certificate": cert}, cfg)
    return Verdict(mode, x, Status.INCONCLUSIVE, {"U": u, "V": v, "reason": "no late miss found"}, cfg)


def check_devaney_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE) -> Verdict:
    parts = {
        "transitive": check_transitive_point(f, x, cfg, "transitive"),
        "periodic-density": check_periodic_density_point(f, x, cfg),
        "sensitive": check_sensitive_point(f, x, cfg),
    }
    status = meet(v.status for v in parts.values())
    # a transitive point with dense periodic points on an infinite space is sensitive
    theorem_ok = not (parts["transitive"].confirmed and parts["periodic-density"].confirmed
                      and parts["sensitive"].refuted)
    witness = {name: {"status": v.status, "witness": v.witness} for name, v in parts.items()}
    witness["transitive_periodic_implies_sensitive"] = theorem_ok
    notes = [] if theorem_ok else ["transitive + periodic density confirmed but sensitivity refuted"]
    return Verdict("devaney", check_point(f.space, x), status, witness, cfg, notes)


# -- non-separating sets ----------------------------------------------------------

@dataclass
class NonSeparatingSet:
    center: Fraction
    delta: Fraction
    horizon: int
    direction: str
    intervals: tuple
    measure: Fraction
    over_approximation: bool = True

    def to_json(self):
        return {"center": self.center, "delta": self.delta, "horizon": self.horizon,
                "direction": self.direction, "intervals": ivs.to_json(self.intervals),
                "measure": self.measure, "over_approximation": self.over_approximation}


def nonseparating_set(f: DynMap, x, delta, horizon: int, grid=None, direction: str = FORWARD) -> NonSeparatingSet:
    """Exact ``{y : d(f^n x, f^n y) <= delta for |n| <= horizon}`` with its Lebesgue measure."""
    x = check_point(f.space, x)
    if direction == TWO_SIDED and not f.invertible:
        raise CapabilityError("two-sided non-separating sets need an invertible map")
    seg = orbit(f, x, horizon, direction)
    cons = tube_constraints(f, dict(zip(seg.indices, seg.points)), delta)
    pieces = feasible_set(f, cons)
    return NonSeparatingSet(x, Fraction(delta), horizon, direction, pieces, ivs.measure(pieces))

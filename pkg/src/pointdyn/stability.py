"""Perturbations and finite-scale checks for α-persistent and weakly stable points.

A ``g``-orbit is an ``f``-pseudo-orbit whose jumps are at most ``D(f, g)``,
so both notions reduce to the exact tracer of :mod:`pointdyn.shadowing`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapabilityError, ConstructionError, InputError
from .intervals import INF
from .maps import (
    AffineLineMap,
    DynMap,
    PLMap,
    RotationMap,
    as_pl,
    compose_pl,
    identity_pl,
)
from .metric import HighPrecisionReal, Space, check_point
from .pointwise import check_expansive_point, dist
from .shadowing import trace_constraints
from .verdict import DEFAULT_SCALE, ScaleConfig, Status, Verdict

CONSTANT_SHIFT = "constant-shift"
INTERPOLATING = "pl-interpolating"
JIGGLE = "seeded-jiggle"


@dataclass
class PerturbationFamily:
    """A perturbed map together with how it was made and an exact bound on ``D(base, g)``."""

    base: DynMap
    kind: str
    params: dict
    g: DynMap
    bound: Fraction

    def to_json(self):
        return {"kind": self.kind, "params": self.params, "bound": self.bound, "map": self.g.to_json()}


def make_interpolating_perturbation(pairs, delta, space=Space.INTERVAL) -> DynMap:
    """Increasing PL homeomorphism ``φ`` with ``φ(p_i) = q_i`` and ``D(φ, id) < delta``.

    On [0, 1] the ends are pinned; on the line the map continues with slope 1.
    """
    space = Space(space)
    delta = Fraction(delta)
    pts = sorted((Fraction(p), Fraction(q)) for p, q in pairs)
    if not pts:
        return identity_pl(space)
    ps = [p for p, _ in pts]
    qs = [q for _, q in pts]
    if len(set(ps)) != len(ps) or len(set(qs)) != len(qs):
        raise ConstructionError("interpolation points must be distinct")
    if any(abs(q - p) >= delta for p, q in pts):
        raise ConstructionError("every pair must satisfy d(p, q) < delta")
    if space is Space.INTERVAL:
        if pts[0][0] > 0:
            pts.insert(0, (Fraction(0), Fraction(0)))
        if pts[-1][0] < 1:
            pts.append((Fraction(1), Fraction(1)))
        if pts[0] != (0, 0) or pts[-1] != (1, 1):
            raise ConstructionError("a homeomorphism of [0, 1] fixing its ends cannot move 0 or 1")
        if any(not 0 <= q <= 1 for _, q in pts):
            raise ConstructionError("targets must lie in [0, 1]")
    elif space is Space.CIRCLE:
        raise ConstructionError("interpolating perturbations are built on the interval or the line")
    for (_, q0), (_, q1) in zip(pts, pts[1:]):
        if q1 <= q0:
            raise ConstructionError("pairs are not order-preserving; no monotone interpolation exists")
    if space is Space.LINE:
        if len(pts) == 1:
            return PLMap(pts, space, left_slope=1, right_slope=1)
        return PLMap(pts, space, left_slope=1, right_slope=1)
    return PLMap(pts, space)


def displacement(phi: DynMap):
    """Exact ``sup |φ(x) − x|`` for PL or affine maps (attained at a breakpoint)."""
    if isinstance(phi, RotationMap):
        d = phi.angle
        return min(d, 1 - d)
    if isinstance(phi, AffineLineMap):
        return Fraction(0) if (phi.a, phi.b) == (1, 0) else (abs(phi.b) if phi.a == 1 else INF)
    pl = as_pl(phi)
    if pl.space is Space.LINE and (pl.left_slope != 1 or pl.right_slope != 1):
        return INF
    return max(abs(y - x) for x, y in pl.breakpoints)


def _post_compose(phi: DynMap, f: DynMap) -> DynMap:
    """``φ ∘ f`` with the exact representation available for the pair."""
    if isinstance(f, RotationMap):
        if isinstance(phi, RotationMap):
            a = HighPrecisionReal(phi.alpha.value + f.alpha.value, phi.alpha.error + f.alpha.error,
                                  f.alpha.irrational)
            return RotationMap(a)
        raise CapabilityError("rotations are only perturbed by further rotations")
    if isinstance(f, AffineLineMap) and isinstance(phi, AffineLineMap):
        return AffineLineMap(phi.a * f.a, phi.a * f.b + phi.b)
    return compose_pl(as_pl(phi), as_pl(f))


def shift_map(space: Space, c) -> DynMap:
    """Translation by ``c``; on [0, 1] a PL homeomorphism moving the middle by exactly ``c``."""
    c = Fraction(c)
    if space is Space.LINE:
        return AffineLineMap(1, c)
    if space is Space.CIRCLE:
        return RotationMap(HighPrecisionReal(c % 1))
    a = abs(c)
    if a == 0:
        return identity_pl(space)
    if not a < Fraction(1, 4):
        raise ConstructionError("interval shifts need |c| < 1/4")
    if c > 0:
        return PLMap([(0, 0), (a, 2 * a), (1 - 2 * a, 1 - a), (1, 1)])
    return PLMap([(0, 0), (2 * a, a), (1 - a, 1 - 2 * a), (1, 1)])


def constant_shift(f: DynMap, c) -> PerturbationFamily:
    phi = shift_map(f.space, c)
    g = _post_compose(phi, f)
    return PerturbationFamily(f, CONSTANT_SHIFT, {"c": Fraction(c)}, g, displacement(phi))


def interpolating(f: DynMap, pairs, delta) -> PerturbationFamily:
    phi = make_interpolating_perturbation(pairs, delta, f.space)
    return PerturbationFamily(f, INTERPOLATING, {"pairs": [list(p) for p in pairs], "delta": Fraction(delta)},
                              _post_compose(phi, f), displacement(phi))


def jiggle(f: DynMap, x, delta, seed: int, count: int = 3) -> PerturbationFamily | None:
    """Seeded random order-preserving pairs near the orbit of ``x``; None if none fits."""
    rng = random.Random(seed)
    delta = Fraction(delta)
    mesh = delta / 64
    for _ in range(8):
        if f.space is Space.LINE:
            base = [Fraction(x) + rng.randint(-64, 64) * Fraction(1, 16) for _ in range(count)]
        else:
            base = [Fraction(rng.randint(1, 255), 256) for _ in range(count)]
        base = sorted(set(base))
        pairs = [(p, p + rng.randint(-31, 31) * mesh) for p in base]
        try:
            fam = interpolating(f, pairs, delta)
        except ConstructionError:
            continue
        fam.kind = JIGGLE
        fam.params = {"seed": seed, "pairs": [list(p) for p in pairs], "delta": delta}
        return fam
    return None


def perturbations(f: DynMap, x, delta, cfg: ScaleConfig, budget: int) -> list:
    """Shifts by ``±δ/2`` first, then a bump at ``x`` and seeded jiggles, ``budget`` in total."""
    delta = Fraction(delta)
    out = [constant_shift(f, delta / 2), constant_shift(f, -delta / 2)]
    if f.space is not Space.CIRCLE:
        fx = f.eval(x)
        for s in (1, -1):
            try:
                out.append(interpolating(f, [(fx, fx + s * delta / 2)], delta))
            except ConstructionError:
                pass
        k = 0
        while len(out) < budget and k < 4 * budget:
            fam = jiggle(f, x, delta, cfg.seed * 1_000_003 + k)
            k += 1
            if fam is not None:
                out.append(fam)
    return [p for p in out[:max(budget, 2)] if p.bound < delta]


def g_orbit(fam: PerturbationFamily, y, window: int) -> dict:
    g = fam.g
    pts = {0: y}
    p = y
    for n in range(1, window + 1):
        p = g.eval(p)
        pts[n] = p
    inv = g.inverse()
    p = y
    for n in range(1, window + 1):
        p = inv.eval(p)
        pts[-n] = p
    return pts


def _require_invertible(f: DynMap):
    if not f.invertible:
        raise CapabilityError("persistence and stability are defined for invertible maps only")


def variant_setup(variant: str, x, cfg: ScaleConfig, budget=None):
    """``(budget, sample_fn, continuity)`` for ``alpha-persistent`` or ``weak-stable``."""
    if variant == "alpha-persistent":
        return (cfg.perturbations if budget is None else budget), (lambda fam: [x]), False
    if variant != "weak-stable":
        raise InputError(f"unknown stability variant {variant!r}")
    step = max(1, cfg.window // 4)

    def samples(fam):
        orb = g_orbit(fam, x, step)
        return [orb[-step], x, orb[step]]

    return max(2, (cfg.perturbations if budget is None else budget) // 4), samples, True


def check_persistent_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE, budget=None) -> Verdict:
    """α-persistent point at finite scale (two-sided window ``[-cfg.window, cfg.window]``)."""
    _require_invertible(f)
    x = check_point(f.space, x)
    return _stability(f, x, cfg, "alpha-persistent", *variant_setup("alpha-persistent", x, cfg, budget))


def check_weak_stable_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE, budget=None) -> Verdict:
    """Weak topological stability surrogate: trace several points of the ``g``-orbit of ``x``.

    Tracers are chosen nearest to their base points; pairs of samples closer
    than ``δ`` must get tracers closer than ``ε``.
    """
    _require_invertible(f)
    x = check_point(f.space, x)
    return _stability(f, x, cfg, "weak-stable", *variant_setup("weak-stable", x, cfg, budget))


def _stability(f, x, cfg, prop, budget, sample_fn, continuity):
    per_eps = {}
    statuses = []
    for eps in sorted(cfg.eps_list):
        status, witness = _stability_at(f, x, eps, cfg, budget, sample_fn, continuity)
        per_eps[eps] = {"status": status, **witness}
        statuses.append(status)
        if status is Status.REFUTED:
            return Verdict(prop, x, Status.REFUTED, {"epsilon": eps, **witness}, cfg)
    if all(s is Status.CONFIRMED for s in statuses):
        return Verdict(prop, x, Status.CONFIRMED, {"per_epsilon": per_eps}, cfg)
    return Verdict(prop, x, Status.INCONCLUSIVE, {"per_epsilon": per_eps}, cfg)


def stability_delta_status(f, x, eps, delta, cfg, budget, sample_fn, continuity):
    """Does ``delta`` serve ``eps`` against every generated perturbation?"""
    tracers = []
    undecided = False
    for fam in perturbations(f, x, delta, cfg, budget):
        picked = []
        for y in sample_fn(fam):
            res = trace_constraints(f, g_orbit(fam, y, cfg.window), eps)
            if res.empty:
                return Status.REFUTED, {"perturbation": fam, "sample": y, "window": cfg.window, "trace": res}
            if not res.traced:
                undecided = True
                continue
            picked.append((y, res.tracer))
        if continuity and not _continuity_ok(f, picked, delta, eps):
            undecided = True
        tracers.append({"perturbation": fam.kind, "bound": fam.bound, "tracers": picked})
    if undecided:
        return Status.INCONCLUSIVE, {"reason": "tracer on the boundary or continuity check failed"}
    return Status.CONFIRMED, {"delta": delta, "checked": tracers}


def _stability_at(f, x, eps, cfg, budget, sample_fn, continuity):
    refuting = {}
    for delta in cfg.delta_sweep:
        status, witness = stability_delta_status(f, x, eps, delta, cfg, budget, sample_fn, continuity)
        if status is Status.CONFIRMED:
            return status, witness
        if status is Status.REFUTED:
            refuting[delta] = witness
    if len(refuting) == len(cfg.delta_sweep):
        return Status.REFUTED, {"refuting": refuting}
    return Status.INCONCLUSIVE, {"refuting": refuting,
                                 "reason": "tracer on the boundary or continuity check failed"}


def _continuity_ok(f, picked, delta, eps):
    for i, (y1, h1) in enumerate(picked):
        for y2, h2 in picked[i + 1:]:
            if dist(f.space, y1, y2) < delta and not dist(f.space, h1, h2) < eps:
                return False
    return True


def check_topologically_stable_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE) -> Verdict:
    """Reported through persistence when ``x`` is an expansive point; otherwise unsupported."""
    exp = check_expansive_point(f, x, cfg)
    if not exp.confirmed:
        return Verdict("topologically-stable", check_point(f.space, x), Status.INCONCLUSIVE,
                       {"expansive": exp.status}, cfg, ["unsupported: x is not a confirmed expansive point"])
    pers = check_persistent_point(f, x, cfg)
    return Verdict("topologically-stable", pers.point, pers.status,
                   {"expansive": exp.witness, "alpha-persistent": pers.witness}, cfg,
                   ["equivalent to alpha-persistence at expansive points"])

"""Pseudo-orbits, exact tracing, shadowable and specification points.

Tracing is a feasibility problem: the set of ``y`` whose orbit stays within
``ε`` of a finite pseudo-orbit is an intersection of preimages of closed
balls, which :func:`~pointdyn.tracing.feasible_set` computes exactly.  An
empty closed feasible set rules out the open condition as well; a
non-empty one yields a representative tracer that is re-checked against
the strict inequality by direct iteration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import intervals as ivs
from .errors import CapabilityError, InputError
from .intervals import INF
from .maps import FORWARD, TWO_SIDED, DynMap, RotationMap
from .metric import Space, check_point, format_rational, parse_rational, wrap
from .pointwise import dist, inverse_of
from .tracing import closed_ball, feasible_set
from .verdict import DEFAULT_SCALE, ScaleConfig, Status, Verdict

NOISE = "noise"
DRIFT = "drift"
SWITCH = "switch"
# noisy points are rounded to this dyadic mesh to keep denominators small
NOISE_MESH = Fraction(1, 2**40)


@dataclass(frozen=True)
class PseudoOrbit:
    """Points ``x_n`` for ``n = start, ..., start + len(points) - 1``; ``x_0`` is the point it runs through."""

    points: tuple
    delta: Fraction
    start: int = 0

    @property
    def indices(self):
        return range(self.start, self.start + len(self.points))

    @property
    def through(self):
        return self.points[-self.start]

    def as_dict(self) -> dict:
        return dict(zip(self.indices, self.points))

    @property
    def two_sided(self):
        return self.start < 0

    def to_json(self):
        out = {"delta": format_rational(self.delta), "points": [format_rational(p) for p in self.points]}
        if self.start:
            out["start"] = self.start
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PseudoOrbit":
        try:
            pts = tuple(parse_rational(str(p)) for p in data["points"])
            delta = parse_rational(str(data["delta"]))
        except KeyError as exc:
            raise InputError(f"pseudo-orbit file lacks {exc.args[0]!r}") from None
        start = int(data.get("start", 0))
        if not pts or not (start <= 0 < start + len(pts)):
            raise InputError("pseudo-orbit must contain index 0")
        return cls(pts, delta, start)


def _settle(space: Space, p):
    if space is Space.CIRCLE:
        return wrap(p)
    if space is Space.INTERVAL:
        return min(max(p, Fraction(0)), Fraction(1))
    return p


def _round(p):
    return Fraction(round(p / NOISE_MESH)) * NOISE_MESH


def make_pseudo_orbit(f: DynMap, x0, delta, length: int, strategy: str = NOISE, *, seed: int = 0,
                      scale=Fraction(1), direction: int = 1, target=None, at: int = 0,
                      two_sided: bool = False) -> PseudoOrbit:
    """A ``delta``-pseudo-orbit through ``x0`` with ``length`` forward steps.

    ``noise`` adds seeded uniform kicks in ``(-scale·δ/2, scale·δ/2)``
    (``scale=0`` gives the true orbit); ``drift`` adds ``direction·δ/2`` at
    every step; ``switch`` follows the orbit and at step ``at`` jumps
    ``3δ/4`` towards ``target``.  Points are kept in the space (clamped on
    [0, 1], wrapped on the circle).  ``two_sided`` builds the past with the
    same rule applied to the inverse map.
    """
    x0 = check_point(f.space, x0)
    delta = Fraction(delta)
    if delta <= 0:
        raise InputError("delta must be positive")
    if length < 0:
        raise InputError("length must be non-negative")
    if strategy not in (NOISE, DRIFT, SWITCH):
        raise InputError(f"unknown pseudo-orbit strategy {strategy!r}")
    rng = random.Random(seed)
    space = f.space

    def kick(n, image):
        if strategy == NOISE:
            if not scale:
                return image
            half = int(delta / 2 * scale / NOISE_MESH) - 1
            if half <= 0:
                return image
            return _round(image + rng.randint(-half, half) * NOISE_MESH)
        if strategy == DRIFT:
            return image + direction * delta / 2
        if n == at and target is not None:
            step = min(abs(target - image), 3 * delta / 4)
            return image + step if target >= image else image - step
        return image

    fwd = [x0]
    for n in range(length):
        fwd.append(_settle(space, kick(n, f.eval(fwd[-1]))))
    if not two_sided:
        return PseudoOrbit(tuple(fwd), delta, 0)
    if not f.invertible:
        raise CapabilityError("two-sided pseudo-orbits need an invertible map")
    inv = inverse_of(f)
    back = [x0]
    for n in range(length):
        # choose x_{-n-1} with f(x_{-n-1}) = kicked x_{-n}
        back.append(inv.eval(_settle(space, kick(-n - 1, back[-1]))))
    return PseudoOrbit(tuple(reversed(back[1:])) + tuple(fwd), delta, -length)


def verify_pseudo_orbit(f: DynMap, p: PseudoOrbit) -> dict:
    """``valid`` iff every jump ``d(f(x_n), x_{n+1})`` is below the claimed delta."""
    gaps = [dist(f.space, f.eval(a), b) for a, b in zip(p.points, p.points[1:])]
    worst = max(gaps, default=Fraction(0))
    return {"valid": worst < p.delta, "max_gap": worst}


@dataclass
class TraceResult:
    epsilon: Fraction
    feasible: tuple
    tracer: Fraction | None
    strict: bool

    @property
    def traced(self):
        return self.tracer is not None and self.strict

    @property
    def empty(self):
        return not self.feasible

    def to_json(self):
        return {"epsilon": self.epsilon, "feasible": ivs.to_json(self.feasible),
                "tracer": self.tracer, "strict": self.strict}


def _interior_point(pieces):
    """Midpoint of the longest piece (an endpoint of an unbounded one)."""
    best = None
    for iv in pieces:
        if iv.lo == -INF or iv.hi == INF:
            return ivs.representative((iv,))
        if best is None or iv.length > best.length:
            best = iv
    return best.midpoint if best is not None else None


def trace_constraints(f: DynMap, targets: dict, eps, tracer=None) -> TraceResult:
    """Exact feasible set for ``d(f^n(y), targets[n]) <= eps``, with a strict re-check."""
    eps = Fraction(eps)
    slack = Fraction(0)
    if isinstance(f, RotationMap) and targets:
        slack = f.error_after(max(abs(n) for n in targets))
    cons = {n: closed_ball(f.space, c, eps + slack) for n, c in targets.items()}
    pieces = feasible_set(f, cons)
    y = tracer if tracer is not None else _interior_point(pieces)
    strict = y is not None and tracer_ok(f, y, targets, eps - slack)
    return TraceResult(eps, pieces, y, strict)


def tracer_ok(f: DynMap, y, targets: dict, eps) -> bool:
    """Direct iteration: ``d(f^n(y), targets[n]) < eps`` at every index."""
    if not targets:
        return True
    lo, hi = min(min(targets), 0), max(max(targets), 0)
    if lo < 0 and not f.invertible:
        raise CapabilityError("negative indices need an invertible map")
    p = y
    for n in range(0, hi + 1):
        if n:
            p = f.eval(p)
        if n in targets and not dist(f.space, p, targets[n]) < eps:
            return False
    if lo < 0:
        inv = inverse_of(f)
        p = y
        for n in range(-1, lo - 1, -1):
            p = inv.eval(p)
            if n in targets and not dist(f.space, p, targets[n]) < eps:
                return False
    return True


def trace_set(f: DynMap, p: PseudoOrbit, epsilon) -> TraceResult:
    if p.two_sided and not f.invertible:
        raise CapabilityError("two-sided tracing needs an invertible map")
    return trace_constraints(f, p.as_dict(), epsilon)


# -- shadowable points ---------------------------------------------------------

def pseudo_orbit_family(f: DynMap, x, delta, cfg: ScaleConfig, two_sided: bool) -> list:
    """Seeded noise orbits plus both drifts and switches towards both ends."""
    length = cfg.window
    fam = []
    for k in range(cfg.pseudo_orbits):
        fam.append(("noise", k, make_pseudo_orbit(f, x, delta, length, NOISE, seed=cfg.seed + k,
                                                  two_sided=two_sided)))
    for d in (1, -1):
        fam.append(("drift", d, make_pseudo_orbit(f, x, delta, length, DRIFT, direction=d,
                                                  two_sided=two_sided)))
    if f.space is Space.LINE:
        ends = (x - 1, x + 1)
    elif f.space is Space.CIRCLE:
        ends = (wrap(x + Fraction(1, 2)),)
    else:
        ends = (Fraction(0), Fraction(1))
    for t in ends:
        for at in (0, length // 4):
            fam.append(("switch", (t, at), make_pseudo_orbit(f, x, delta, length, SWITCH, target=t,
                                                             at=at, two_sided=two_sided)))
    return fam


def check_shadowable_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE, direction: str = FORWARD) -> Verdict:
    """Positive (``forward``) or two-sided shadowable point at finite scale."""
    x = check_point(f.space, x)
    two_sided = direction == TWO_SIDED
    if two_sided and not f.invertible:
        raise CapabilityError("two-sided shadowing needs an invertible map")
    prop = "shadowable" if two_sided else "shadowable+"
    per_eps = {}
    statuses = []
    for eps in sorted(cfg.eps_list):
        status, witness = _shadow_at(f, x, eps, cfg, two_sided)
        per_eps[eps] = {"status": status, **witness}
        statuses.append(status)
        if status is Status.REFUTED:
            return Verdict(prop, x, Status.REFUTED, {"epsilon": eps, **witness}, cfg)
    if all(s is Status.CONFIRMED for s in statuses):
        return Verdict(prop, x, Status.CONFIRMED, {"per_epsilon": per_eps}, cfg)
    return Verdict(prop, x, Status.INCONCLUSIVE, {"per_epsilon": per_eps}, cfg)


def shadow_delta_status(f, x, eps, delta, cfg, two_sided):
    """Does ``delta`` serve ``eps`` at ``x``?  Confirmed when every pseudo-orbit of the family is traced."""
    tracers = []
    boundary = None
    for kind, param, p in pseudo_orbit_family(f, x, delta, cfg, two_sided):
        res = trace_set(f, p, eps)
        if res.traced:
            tracers.append({"kind": kind, "param": param, "tracer": res.tracer})
            continue
        failure = {"kind": kind, "param": param, "pseudo_orbit": p, "trace": res}
        if res.empty:
            return Status.REFUTED, failure
        # the feasible set only touches the boundary: no proof either way
        boundary = boundary or failure
    if boundary is not None:
        return Status.INCONCLUSIVE, boundary
    return Status.CONFIRMED, {"delta": delta, "tracers": tracers}


def _shadow_at(f, x, eps, cfg, two_sided):
    untraceable = {}
    for delta in cfg.delta_sweep:
        status, witness = shadow_delta_status(f, x, eps, delta, cfg, two_sided)
        if status is Status.CONFIRMED:
            return status, witness
        if status is Status.REFUTED:
            untraceable[delta] = witness
    if len(untraceable) == len(cfg.delta_sweep):
        return Status.REFUTED, {"untraceable": untraceable}
    return Status.INCONCLUSIVE, {"untraceable": untraceable}


# -- specification points ---------------------------------------------------------

@dataclass(frozen=True)
class GapPattern:
    """Blocks ``[a_j, b_j]`` with ``b_{j-1} < a_j`` and ``a_j - b_{j-1} >= gap``."""

    blocks: tuple
    gap: int

    def __post_init__(self):
        prev = None
        for a, b in self.blocks:
            if not (0 <= a <= b):
                raise InputError("blocks need 0 <= a <= b")
            if prev is not None and (a <= prev or a - prev < self.gap):
                raise InputError("blocks violate the ordering or gap constraint")
            prev = b

    def to_json(self):
        return {"blocks": [list(b) for b in self.blocks], "gap": self.gap}


def demand_constraints(f: DynMap, pattern: GapPattern, points) -> dict:
    """Targets ``f^i(x_j)`` for every ``i`` in block ``j``."""
    targets = {}
    for (a, b), p in zip(pattern.blocks, points):
        v = f.iterate_value(p, a)
        for i in range(a, b + 1):
            if i > a:
                v = f.eval(v)
            targets[i] = v
    return targets


def _far_points(f: DynMap, x, a: int, eps) -> list:
    """Demand points whose orbit at time ``a`` sits far from that of ``x``."""
    if f.space is Space.LINE:
        base = f.iterate_value(x, a)
        out = []
        for k in (-1, 0, 1, 2, 3):
            for s in (1, -1):
                z = base + s * Fraction(2) ** k
                out.append(f.iterate_value(z, -a) if f.invertible and a else x + s * Fraction(2) ** k)
        return out
    pts = {Fraction(k, 8) for k in range(9)} if f.space is Space.INTERVAL else {Fraction(k, 8) for k in range(8)}
    pts.update(p for p in f.sample_points() if p not in (INF, -INF))
    return sorted(pts)


def specification_demands(f: DynMap, x, eps, gap: int, cfg: ScaleConfig, budget: int):
    """Deterministic demands: two-block far-target patterns first, then seeded random ones."""
    rng = random.Random(f"{cfg.seed}:{gap}:{eps}")
    out = []
    for z in _far_points(f, x, gap, eps):
        out.append((GapPattern(((0, 0), (gap, gap)), gap), (x, z)))
    for _ in range(budget):
        k = rng.randint(2, 4)
        blocks = []
        a = 0
        for j in range(k):
            length = rng.randint(0, 7)
            blocks.append((a, a + length))
            a = a + length + gap + rng.randint(0, 2)
        pool = _far_points(f, x, blocks[1][0], eps)
        pts = [x] + [rng.choice(pool) for _ in range(k - 1)]
        out.append((GapPattern(tuple(blocks), gap), tuple(pts)))
    return out


def check_specification_point(f: DynMap, x, cfg: ScaleConfig = DEFAULT_SCALE, pattern_budget=None) -> Verdict:
    """Finite-scale specification point check.

    Demands always start with ``x_1 = x`` on a block beginning at time 0;
    later demand points may repeat.  ``M`` is swept upward from 1.
    """
    x = check_point(f.space, x)
    budget = cfg.pattern_budget if pattern_budget is None else pattern_budget
    per_eps = {}
    statuses = []
    for eps in sorted(cfg.eps_list):
        status, witness = _spec_at(f, x, eps, cfg, budget)
        per_eps[eps] = {"status": status, **witness}
        statuses.append(status)
        if status is Status.REFUTED:
            return Verdict("specification", x, Status.REFUTED, {"epsilon": eps, **witness}, cfg)
    if all(s is Status.CONFIRMED for s in statuses):
        return Verdict("specification", x, Status.CONFIRMED, {"per_epsilon": per_eps}, cfg)
    return Verdict("specification", x, Status.INCONCLUSIVE, {"per_epsilon": per_eps}, cfg)


def spec_gap_status(f, x, eps, gap, cfg, budget):
    """Does gap ``M = gap`` serve ``eps`` at ``x`` on every generated demand?"""
    boundary = False
    solved = []
    for pattern, pts in specification_demands(f, x, eps, gap, cfg, budget):
        res = trace_constraints(f, demand_constraints(f, pattern, pts), eps)
        if res.traced:
            solved.append({"pattern": pattern, "points": pts, "tracer": res.tracer})
            continue
        if res.empty:
            return Status.REFUTED, {"pattern": pattern, "points": pts, "trace": res}
        boundary = True
    if boundary:
        return Status.INCONCLUSIVE, {"demands_met": len(solved)}
    return Status.CONFIRMED, {"M": gap, "demands_met": len(solved)}


def _spec_at(f, x, eps, cfg, budget):
    failures = {}
    for gap in range(1, cfg.max_gap + 1):
        status, witness = spec_gap_status(f, x, eps, gap, cfg, budget)
        if status is Status.CONFIRMED:
            return status, witness
        if status is Status.REFUTED:
            failures[gap] = witness
    if len(failures) == cfg.max_gap:
        return Status.REFUTED, {"failing_demands": failures}
    return Status.INCONCLUSIVE, {"failing_demands": failures}

"""Map sequences, the sup metric and the convergence-mode classifier.

Modes, strongest first: orbital (oc), uniform (uc), weak orbital (woc),
pointwise weak orbital (pwoc), pointwise (pc).  Deviations are measured in
the bounded metric ``min(d, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import InputError, ScaleError
from .intervals import INF
from .maps import AffineLineMap, DynMap, PLMap, RotationMap, as_pl, compose_pl
from .metric import Space
from .pointwise import dist
from .verdict import Status, jsonable

MODES = ("oc", "uc", "woc", "pwoc", "pc")
ONE = Fraction(1)


@dataclass
class MapFamily:
    """``n ↦ f_n`` for ``1 <= n <= n_max`` together with a candidate limit."""

    name: str
    member: Callable[[int], DynMap]
    limit: DynMap
    n_max: int = 16
    params: dict = field(default_factory=dict)
    samples: tuple | None = None
    # every member equals the limit (known by construction, not by probing)
    constant: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, n: int) -> DynMap:
        if n < 1:
            raise InputError("family indices start at 1")
        if n not in self._cache:
            f = self.member(n)
            if f.space is not self.limit.space:
                raise InputError(f"member {n} of {self.name} lives on another space")
            self._cache[n] = f
        return self._cache[n]

    @property
    def space(self) -> Space:
        return self.limit.space

    def has_inverses(self, upto: int | None = None) -> bool:
        upto = upto or self.n_max
        return self.limit.invertible and all(self(n).invertible for n in range(1, upto + 1))

    def inverse_family(self) -> "MapFamily":
        if not self.limit.invertible:
            raise InputError(f"limit of {self.name} is not invertible")
        return MapFamily(self.name + "^-1", lambda n: self(n).inverse(), self.limit.inverse(),
                         self.n_max, dict(self.params), self.samples, self.constant)

    def sample_points(self) -> tuple:
        if self.samples is not None:
            return self.samples
        if self.space is Space.LINE:
            return tuple(Fraction(v) for v in (-2, -1, 0, Fraction(1, 2), 1, 2))
        if self.space is Space.CIRCLE:
            return tuple(Fraction(k, 4) for k in range(4))
        return tuple(Fraction(k, 4) for k in range(5))

    def to_json(self):
        return {"family": self.name, "params": jsonable(self.params), "n_max": self.n_max}


def constant_family(f: DynMap, name="const", n_max=16) -> MapFamily:
    return MapFamily(name, lambda n: f, f, n_max, constant=True)


@dataclass(frozen=True)
class Bound:
    """A quantity known to lie in ``[lower, upper]``; ``exact`` when they coincide by construction."""

    lower: Fraction
    upper: Fraction
    exact: bool
    where: object = None

    def to_json(self):
        return {"lower": self.lower, "upper": self.upper, "exact": self.exact, "where": jsonable(self.where)}


def _cap(v):
    return ONE if v == INF or v >= 1 else Fraction(v)


def _grid(space: Space, grid):
    if space is Space.LINE:
        n = int(4 / grid)
        return [Fraction(-4) + i * grid for i in range(2 * n + 1)]
    n = int(1 / grid)
    return [i * grid for i in range(n + (0 if space is Space.CIRCLE else 1))]


def _pl_sup(f: PLMap, g: PLMap):
    """Exact ``sup min(|f − g|, 1)`` for two PL maps on the same space."""
    if f.space is Space.LINE and (f.left_slope != g.left_slope or f.right_slope != g.right_slope):
        return ONE, ("tail", None)
    best, where = Fraction(0), None
    for x in sorted(set(f.xs) | set(g.xs)):
        d = abs(f.eval(x) - g.eval(x))
        if d > best:
            best, where = d, x
    return _cap(best), where


def sup_distance(f: DynMap, g: DynMap, grid=Fraction(1, 2**8)) -> Bound:
    """``D(f, g) = sup_x min(d(f(x), g(x)), 1)``."""
    if f.space is not g.space:
        raise InputError("maps act on different spaces")
    if f == g:
        return Bound(Fraction(0), Fraction(0), True)
    if isinstance(f, RotationMap) and isinstance(g, RotationMap):
        d = dist(Space.CIRCLE, f.angle, g.angle)
        err = f.alpha.error + g.alpha.error
        return Bound(max(d - err, Fraction(0)), d + err, err == 0)
    if isinstance(f, AffineLineMap) and isinstance(g, AffineLineMap):
        if f.a != g.a:
            return Bound(ONE, ONE, True, "unbounded difference")
        v = _cap(abs(f.b - g.b))
        return Bound(v, v, True)
    if isinstance(f, (PLMap, AffineLineMap)) and isinstance(g, (PLMap, AffineLineMap)):
        v, where = _pl_sup(as_pl(f), as_pl(g))
        return Bound(v, v, True, where)
    pts = _grid(f.space, grid)
    lo, where = Fraction(0), None
    for x in pts:
        d = min(dist(f.space, f.eval(x), g.eval(x)), ONE)
        if d > lo:
            lo, where = d, x
    up = min(lo + (f.lipschitz() + g.lipschitz()) * grid / 2, ONE)
    return Bound(lo, up, False, where)


def orbital_deviation(fn: DynMap, f: DynMap, horizon: int, grid=Fraction(1, 2**8),
                      max_breakpoints: int = 20_000) -> Bound:
    """``sup_{1<=k<=K} sup_x min(d(fn^k(x), f^k(x)), 1)``."""
    if fn.space is not f.space:
        raise InputError("maps act on different spaces")
    if fn == f:
        return Bound(Fraction(0), Fraction(0), True)
    if isinstance(fn, RotationMap) and isinstance(f, RotationMap):
        step = fn.angle - f.angle
        err = fn.alpha.error + f.alpha.error
        best, where = Fraction(0), None
        for k in range(1, horizon + 1):
            d = dist(Space.CIRCLE, k * step, 0)
            if d > best:
                best, where = d, k
        slack = horizon * err
        return Bound(max(best - slack, Fraction(0)), min(best + slack, Fraction(1, 2)), err == 0, where)
    if isinstance(fn, AffineLineMap) and isinstance(f, AffineLineMap):
        best, where = Fraction(0), None
        for k in range(1, horizon + 1):
            a1, a2 = fn.a**k, f.a**k
            if a1 != a2:
                return Bound(ONE, ONE, True, k)
            d = _cap(abs(fn.iterate_value(0, k) - f.iterate_value(0, k)))
            if d > best:
                best, where = d, k
        return Bound(best, best, True, where)
    if isinstance(fn, (PLMap, AffineLineMap)) and isinstance(f, (PLMap, AffineLineMap)):
        try:
            return _pl_orbital(as_pl(fn), as_pl(f), horizon, max_breakpoints)
        except ScaleError:
            pass
    return _grid_orbital(fn, f, horizon, grid)


def _pl_orbital(fn: PLMap, f: PLMap, horizon: int, cap: int) -> Bound:
    a, b = fn, f
    best, where = Fraction(0), None
    for k in range(1, horizon + 1):
        if k > 1:
            a = compose_pl(fn, a, cap)
            b = compose_pl(f, b, cap)
        d, x = _pl_sup(a, b)
        if d > best:
            best, where = d, (k, x)
        if best == 1:
            break
    return Bound(best, best, True, where)


def _grid_orbital(fn, f, horizon, grid) -> Bound:
    best, where = Fraction(0), None
    for x in _grid(f.space, grid):
        p = q = x
        for k in range(1, horizon + 1):
            p, q = fn.eval(p), f.eval(q)
            d = min(dist(f.space, p, q), ONE)
            if d > best:
                best, where = d, (k, x)
            if p == q:
                break
        if best == ONE:
            return Bound(best, best, True, where)
    return Bound(best, ONE, False, where)


# -- classification --------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceConfig:
    horizon: int = 200
    rotation_horizon: int = 10_000
    woc_horizon: int = 8
    grid: Fraction = Fraction(1, 2**8)
    tolerances: tuple = tuple(Fraction(1, 2**j) for j in range(1, 11))
    probes: tuple | None = None

    def probe_set(self, n_max: int) -> tuple:
        if self.probes is not None:
            return tuple(n for n in self.probes if 1 <= n <= n_max)
        out, n = [], 1
        while n <= n_max:
            out.append(n)
            n *= 2
        return tuple(out)

    def to_json(self):
        return jsonable({"horizon": self.horizon, "rotation_horizon": self.rotation_horizon,
                         "woc_horizon": self.woc_horizon, "grid": self.grid,
                         "tolerances": list(self.tolerances), "probes": self.probes})


@dataclass
class ModeResult:
    status: Status
    witness: dict
    notes: list = field(default_factory=list)

    def to_json(self):
        return {"status": self.status.value, "witness": jsonable(self.witness), "notes": list(self.notes)}


@dataclass
class ConvergenceReport:
    family: str
    modes: dict
    config: ConvergenceConfig

    def status(self, mode: str) -> Status:
        return self.modes[mode].status

    def hierarchy_ok(self) -> bool:
        """No stronger mode confirmed while a weaker one is refuted."""
        for i, strong in enumerate(MODES):
            for weak in MODES[i + 1:]:
                if self.status(strong) is Status.CONFIRMED and self.status(weak) is Status.REFUTED:
                    return False
        return True

    def to_json(self):
        return {"family": self.family, "modes": {m: self.modes[m].to_json() for m in MODES},
                "config": self.config.to_json()}


def judge(values, cfg: ConvergenceConfig):
    """Classify a probed deviation sequence ``[(n, Bound)]``.

    Vanishing: the last upper bound is 0, or the upper bounds never increase,
    strictly decrease over the second half of the probes and the last one is
    at most 3/4 of the one at the midpoint probe.  Persistent: every lower
    bound stays above a listed tolerance and the last lower bound keeps 3/4
    of the largest one.
    """
    ups = [b.upper for _, b in values]
    lows = [b.lower for _, b in values]
    ns = [n for n, _ in values]
    if ups[-1] == 0:
        return Status.CONFIRMED, {"deviation": dict(zip(ns, ups)), "rule": "zero"}
    mid = len(ups) // 2
    if (len(ups) >= 2 and all(b <= a for a, b in zip(ups, ups[1:]))
            and all(b < a for a, b in zip(ups[mid:], ups[mid + 1:]))
            and ups[-1] <= Fraction(3, 4) * ups[mid]):
        return Status.CONFIRMED, {"deviation": dict(zip(ns, ups)), "rule": "decreasing"}
    floor = min(lows)
    tol = next((t for t in sorted(cfg.tolerances, reverse=True) if floor >= t), None)
    if tol is not None and lows[-1] >= Fraction(3, 4) * max(lows):
        return Status.REFUTED, {"lower_bounds": dict(zip(ns, lows)), "persistent_above": tol}
    return Status.INCONCLUSIVE, {"upper": dict(zip(ns, ups)), "lower": dict(zip(ns, lows))}


def _combine(results):
    """All confirmed -> confirmed; any refuted -> refuted (first witness kept)."""
    for key, (st, w) in results.items():
        if st is Status.REFUTED:
            return Status.REFUTED, {"at": key, **w}
    if all(st is Status.CONFIRMED for st, _ in results.values()):
        return Status.CONFIRMED, {"per_probe": {k: w for k, (_, w) in results.items()}}
    return Status.INCONCLUSIVE, {"per_probe": {k: {"status": st, **w} for k, (st, w) in results.items()}}


def classify_convergence(fam: MapFamily, cfg: ConvergenceConfig | None = None) -> ConvergenceReport:
    cfg = cfg or ConvergenceConfig()
    probes = cfg.probe_set(fam.n_max)
    if not probes:
        raise InputError("no probe indices within the family range")
    f = fam.limit
    modes = {}

    uc_seq = [(n, sup_distance(fam(n), f, cfg.grid)) for n in probes]
    modes["uc"] = ModeResult(*judge(uc_seq, cfg))
    if modes["uc"].status is Status.CONFIRMED:
        # every limit here is uniformly continuous, so uniform convergence
        # forces each fixed iterate to converge uniformly as well
        for m in ("woc", "pwoc", "pc"):
            modes[m] = ModeResult(Status.CONFIRMED, {"implied_by": "uc"}, ["implied by uc"])
    else:
        _weak_modes(fam, f, probes, cfg, modes)

    modes["oc"] = _oc_mode(fam, f, probes, cfg, modes["uc"])

    _reconcile(modes)
    return ConvergenceReport(fam.name, modes, cfg)


def _oc_mode(fam, f, probes, cfg, uc: ModeResult) -> ModeResult:
    horizon = cfg.rotation_horizon if isinstance(f, RotationMap) else cfg.horizon
    if uc.status is Status.REFUTED:
        # the first iterate already deviates, so its lower bounds bound the orbital deviation
        return ModeResult(Status.REFUTED, {"horizon": horizon, "implied_by": "uc", **uc.witness},
                          ["implied by uc refuted"])
    seq = [(n, orbital_deviation(fam(n), f, horizon, cfg.grid)) for n in probes]
    st, w = judge(seq, cfg)
    oc = ModeResult(st, {"horizon": horizon, **w})
    if isinstance(f, RotationMap):
        oc.notes.append(f"rotation family: horizon raised to {horizon}")
    return oc


def _weak_modes(fam, f, probes, cfg, modes):
    space = fam.space
    pc = {}
    for x in fam.sample_points():
        seq = []
        for n in probes:
            d = min(dist(space, fam(n).eval(x), f.eval(x)), ONE)
            seq.append((n, Bound(d, d, True)))
        pc[x] = judge(seq, cfg)
    modes["pc"] = ModeResult(*_combine(pc))

    woc = {}
    ks = [k for k in (1, 2, 4, 8, 16, 32) if k <= cfg.woc_horizon]
    for k in ks:
        seq = [(n, _kth_sup(fam(n), f, k, cfg.grid)) for n in probes]
        woc[k] = judge(seq, cfg)
    modes["woc"] = ModeResult(*_combine(woc))

    pw = {}
    for x in fam.sample_points():
        for k in ks:
            seq = []
            for n in probes:
                d = min(dist(space, fam(n).iterate_value(x, k), f.iterate_value(x, k)), ONE)
                seq.append((n, Bound(d, d, True)))
            st, w = judge(seq, cfg)
            # a per-(x, k) schedule alone never confirms pwoc
            if st is not Status.CONFIRMED:
                pw[(x, k)] = (st, w)
    if any(st is Status.REFUTED for st, _ in pw.values()):
        modes["pwoc"] = ModeResult(*_combine(pw))
    else:
        modes["pwoc"] = ModeResult(Status.INCONCLUSIVE, {"probed": len(fam.sample_points()) * len(ks)},
                                   ["not refuted"])


def _kth_sup(fn, f, k, grid) -> Bound:
    if isinstance(fn, RotationMap) and isinstance(f, RotationMap):
        d = dist(Space.CIRCLE, k * (fn.angle - f.angle), 0)
        err = k * (fn.alpha.error + f.alpha.error)
        return Bound(max(d - err, Fraction(0)), d + err, err == 0)
    if isinstance(fn, AffineLineMap) and isinstance(f, AffineLineMap):
        return sup_distance(fn.iterate(k), f.iterate(k), grid)
    if isinstance(fn, (PLMap, AffineLineMap)) and isinstance(f, (PLMap, AffineLineMap)):
        a, b = as_pl(fn), as_pl(f)
        ak, bk = a, b
        for _ in range(k - 1):
            ak, bk = compose_pl(a, ak), compose_pl(b, bk)
        return sup_distance(ak, bk, grid)
    best, where = Fraction(0), None
    for x in _grid(f.space, grid):
        d = min(dist(f.space, fn.iterate_value(x, k), f.iterate_value(x, k)), ONE)
        if d > best:
            best, where = d, x
    lip = fn.lipschitz() ** k + f.lipschitz() ** k
    return Bound(best, min(best + lip * grid / 2, ONE), False, where)


def _reconcile(modes: dict):
    """Enforce oc ⇒ uc ⇒ woc ⇒ pwoc ⇒ pc.

    A stronger mode confirmed against a refuted weaker one is downgraded to
    inconclusive; then confirmations propagate down and refutations up.
    """
    for i, strong in enumerate(MODES):
        for weak in MODES[i + 1:]:
            if modes[strong].status is Status.CONFIRMED and modes[weak].status is Status.REFUTED:
                modes[strong].status = Status.INCONCLUSIVE
                modes[strong].notes.append(f"downgraded: {weak} refuted")
    for i, strong in enumerate(MODES):
        if modes[strong].status is Status.CONFIRMED:
            for weak in MODES[i + 1:]:
                if modes[weak].status is Status.INCONCLUSIVE:
                    modes[weak].status = Status.CONFIRMED
                    modes[weak].notes.append(f"implied by {strong}")
    for i, weak in reversed(list(enumerate(MODES))):
        if modes[weak].status is Status.REFUTED:
            for strong in MODES[:i]:
                if modes[strong].status is Status.INCONCLUSIVE:
                    modes[strong].status = Status.REFUTED
                    modes[strong].notes.append(f"implied by {weak} refuted")


def mode_status(fam: MapFamily, mode: str, cfg: ConvergenceConfig | None = None) -> ModeResult:
    """Only the work needed to settle one mode (used for hypothesis checks)."""
    cfg = cfg or ConvergenceConfig()
    if mode not in MODES:
        raise InputError(f"unknown convergence mode {mode!r}")
    probes = cfg.probe_set(fam.n_max)
    f = fam.limit
    uc = ModeResult(*judge([(n, sup_distance(fam(n), f, cfg.grid)) for n in probes], cfg))
    if mode == "oc":
        return _oc_mode(fam, f, probes, cfg, uc)
    if mode == "uc":
        return uc
    if uc.status is Status.CONFIRMED:
        return ModeResult(Status.CONFIRMED, {"implied_by": "uc"}, ["implied by uc"])
    modes = {}
    _weak_modes(fam, f, probes, cfg, modes)
    return modes[mode]

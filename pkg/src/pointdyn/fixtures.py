"""Registry of the example systems with their published ground truths.

Every expectation carries a provenance tag: ``asserted`` when the ground truth
is stated with the example, ``derived`` when it comes from a closed-form
argument or an independent oracle instead.  Expectations quote the set
identity they encode in ``claim``.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .convergence import ConvergenceConfig, MapFamily, constant_family, mode_status
from .errors import CapabilityError, InputError, PreconditionError, ScaleError
from .maps import FORWARD, TWO_SIDED, DynMap, PLMap
from .metric import Space, format_rational
from .pointwise import (
    check_devaney_point,
    check_expansive_point,
    check_periodic_density_point,
    check_positively_expansive_point,
    check_sensitive_point,
    check_transitive_point,
)
from .shadowing import check_shadowable_point, check_specification_point
from .stability import check_persistent_point, check_topologically_stable_point, check_weak_stable_point
from .systems import (
    constant_line,
    contraction,
    dented_start,
    doubling_line,
    early_ceiling,
    flat_start,
    inv_sqrt2_rotation,
    half_square,
    identity,
    irrational_rotation,
    ladder_f,
    ladder_g,
    lifted_start,
    power_map,
    push_up,
    push_up_limit,
    rational_rotation,
    scaled_line,
    square_map,
    stretched_line,
)
from .theorems import DEFAULT_HARNESS, HarnessScale, check_measure_expansive_point, run_clause
from .verdict import DEFAULT_SCALE, ScaleConfig, Status, Verdict, jsonable

ASSERTED = "asserted"
DERIVED = "derived"

# -- property dispatch ------------------------------------------------------------

CHECKS: dict[str, Callable[[DynMap, Fraction, ScaleConfig], Verdict]] = {
    "expansive": check_expansive_point,
    "positively-expansive": check_positively_expansive_point,
    "sensitive": check_sensitive_point,
    "periodic-density": check_periodic_density_point,
    "transitive": lambda f, x, cfg: check_transitive_point(f, x, cfg, "transitive"),
    "mixing": lambda f, x, cfg: check_transitive_point(f, x, cfg, "mixing"),
    "devaney": check_devaney_point,
    "shadowable+": lambda f, x, cfg: check_shadowable_point(f, x, cfg, FORWARD),
    "shadowable": lambda f, x, cfg: check_shadowable_point(f, x, cfg, TWO_SIDED),
    "specification": check_specification_point,
    "alpha-persistent": check_persistent_point,
    "weak-stable": check_weak_stable_point,
    "topologically-stable": check_topologically_stable_point,
    "measure-expansive+": lambda f, x, cfg: check_measure_expansive_point(f, x, cfg, FORWARD),
    "measure-expansive": lambda f, x, cfg: check_measure_expansive_point(f, x, cfg, TWO_SIDED),
}
ALIASES = {"pos-expansive": "positively-expansive", "expansive+": "positively-expansive"}


def check_property(f: DynMap, x, prop: str, cfg: ScaleConfig = DEFAULT_SCALE) -> Verdict:
    name = ALIASES.get(prop, prop)
    if name not in CHECKS:
        raise InputError(f"unknown property {prop!r}; expected one of {', '.join(CHECKS)}")
    return CHECKS[name](f, x, cfg)


# -- maps and families -----------------------------------------------------------------

MAPS: dict[str, Callable[[], DynMap]] = {
    "identity": lambda: identity(Space.INTERVAL),
    "identity:line": lambda: identity(Space.LINE),
    "identity:circle": lambda: identity(Space.CIRCLE),
    "doubling:line": doubling_line,
    "zero:line": constant_line,
    "E3.1:f": ladder_f,
    "E3.1:g": ladder_g,
    "E3.1:h": square_map,
}

FAMILIES: dict[str, Callable[..., MapFamily]] = {
    "EN1": lambda n_max=16: MapFamily("EN1", irrational_rotation, identity(Space.CIRCLE), n_max),
    "E3.3": lambda n_max=16: MapFamily("E3.3", push_up, identity(), n_max),
    "EE3.3": lambda n_max=16: MapFamily("EE3.3", flat_start, push_up_limit(), n_max),
    "E3.4": lambda n_max=16: MapFamily("E3.4", dented_start, push_up_limit(), n_max),
    "E3.5:f": lambda n_max=16: MapFamily("E3.5:f", irrational_rotation, identity(Space.CIRCLE), n_max),
    "E3.5:g": lambda n_max=16: MapFamily("E3.5:g", rational_rotation, inv_sqrt2_rotation(), n_max),
    "E3.6": lambda n_max=16: MapFamily("E3.6", half_square, half_square(), n_max),
    "E3.9": lambda n_max=16: MapFamily("E3.9", early_ceiling, identity(), n_max),
    "E3.10": lambda n_max=16: MapFamily("E3.10", lifted_start, push_up_limit(), n_max),
    "E3.8:g": lambda n_max=16: MapFamily("E3.8:g", scaled_line, constant_line(), n_max),
    # the space is [0, 1); its samples stay away from the missing endpoint
    "E3.8:h": lambda n_max=16: MapFamily("E3.8:h", power_map, PLMap([(0, 0), (1, 0)]), n_max,
                                         samples=tuple(Fraction(k, 4) for k in range(4))),
    "E3.13": lambda n_max=16: MapFamily("E3.13", stretched_line, identity(Space.LINE), n_max),
    "contraction": lambda n_max=16: MapFamily("contraction", contraction, contraction(), n_max),
}


def resolve_family(desc) -> MapFamily:
    """Family from a registry name, ``const:<map ref>``, or a descriptor dict.

    Descriptors look like ``{"family": name, "params": {...}, "n_max": N}``.
    """
    if isinstance(desc, str):
        text = desc.strip()
        if text.startswith("{"):
            try:
                desc = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InputError(f"family descriptor is not valid JSON: {exc}") from None
        else:
            desc = {"family": text}
    if not isinstance(desc, dict) or "family" not in desc:
        raise InputError("family descriptor needs a 'family' key")
    name = str(desc["family"])
    n_max = desc.get("n_max", 16)
    if not isinstance(n_max, int) or n_max < 1:
        raise InputError("n_max must be a positive integer")
    params = desc.get("params") or {}
    if params:
        raise InputError(f"family {name!r} takes no parameters, got {sorted(params)}")
    if name.startswith("const:"):
        return constant_family(resolve_map(name[len("const:"):]), name, n_max)
    if name not in FAMILIES:
        raise InputError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)} or const:<map>")
    return FAMILIES[name](n_max)


def resolve_map(ref: str) -> DynMap:
    """Map from a registry reference.

    Besides the names in ``MAPS``, ``<family>:f<n>`` picks member ``n`` and
    ``<family>:limit`` the limit of a registered family.
    """
    ref = ref.strip()
    if ref in MAPS:
        return MAPS[ref]()
    fam_name, sep, member = ref.rpartition(":")
    if sep and fam_name in FAMILIES:
        fam = FAMILIES[fam_name]()
        if member == "limit":
            return fam.limit
        if member.startswith("f") and member[1:].isdigit() and int(member[1:]) >= 1:
            return fam(int(member[1:]))
    raise InputError(f"unknown map reference {ref!r}; expected one of {', '.join(MAPS)}, "
                     "<family>:f<n> or <family>:limit")


# -- expectations ----------------------------------------------------------------------

@dataclass(frozen=True)
class Expectation:
    """One ground truth.

    ``kind`` is ``point`` (a checker on a map), ``mode`` (a convergence mode of
    a family), ``clause`` (a harness record, expected to agree) or ``refusal``
    (the harness must refuse, citing the hypothesis in ``expected``).
    """

    kind: str
    target: str
    prop: str
    point: Fraction | None
    expected: str
    provenance: str
    claim: str

    def label(self) -> str:
        at = "" if self.point is None else f" at {format_rational(self.point)}"
        return f"{self.kind} {self.target} {self.prop}{at}"

    def to_json(self):
        return {"kind": self.kind, "target": self.target, "property": self.prop,
                "point": None if self.point is None else format_rational(self.point),
                "expected": self.expected, "provenance": self.provenance, "claim": self.claim}


@dataclass(frozen=True)
class FixtureEntry:
    name: str
    summary: str
    expectations: tuple

    def to_json(self):
        return {"name": self.name, "summary": self.summary,
                "expectations": [e.to_json() for e in self.expectations]}


C, R = Status.CONFIRMED.value, Status.REFUTED.value


def _pts(*qs):
    return [Fraction(q) for q in qs]


def _points(target, prop, points, expected, provenance, claim):
    return [Expectation("point", target, prop, x, expected, provenance, claim) for x in points]


def _e31():
    ex = []
    for k in range(1, 6):
        ex += _points("E3.1:f", "expansive", [Fraction(1, k)], C, ASSERTED, "E(f) = {1/n}")
        ex += _points("E3.1:f", "sensitive", [Fraction(1, k)], C, ASSERTED, "Se(f) = E(f)")
    ex += _points("E3.1:f", "expansive", [Fraction(0)], R, ASSERTED, "0 not in E(f)")
    ex += _points("E3.1:f", "sensitive", [Fraction(0)], R, ASSERTED, "0 not in Se(f)")
    ex += _points("E3.1:g", "positively-expansive", _pts(1, "1/3", "1/5"), C, ASSERTED, "E+(g) = {1/(2n-1)}")
    ex += _points("E3.1:g", "positively-expansive", _pts("1/2", "1/4"), R, ASSERTED, "E+(g) = {1/(2n-1)}")
    ex += _points("E3.1:f", "periodic-density", _pts(0), C, ASSERTED, "P(f) = {0}")
    ex += _points("E3.1:f", "periodic-density", _pts("1/2", "3/4"), R, ASSERTED, "P(f) = {0}")
    for prop, claim in (("transitive", "Tt(h) = {1}"), ("mixing", "Tm(h) = {1}")):
        ex += _points("E3.1:h", prop, _pts(1), C, ASSERTED, claim)
        ex += _points("E3.1:h", prop, _pts("1/2", "1/4"), R, ASSERTED, claim)
    return FixtureEntry("E3.1", "ladder maps f, g and the square map h on [0, 1]", tuple(ex))


def _en1():
    return FixtureEntry("EN1", "irrational rotations with angles increasing to 1", (
        Expectation("mode", "EN1", "uc", None, C, ASSERTED, "f_n ->uc identity"),
        Expectation("mode", "EN1", "oc", None, R, ASSERTED, "f_n is not orbitally convergent"),
    ))


def _e33():
    ex = [Expectation("mode", "E3.3", "uc", None, C, ASSERTED, "f_n ->uc identity"),
          Expectation("mode", "E3.3", "oc", None, C, DERIVED, "orbits of f_n increase to 1 within any tolerance")]
    ex += _points("E3.3:f1", "shadowable", _pts("1/4", "1/2", "7/8"), C, ASSERTED, "Sh(f_n) = X")
    ex += _points("E3.3:f1", "expansive", _pts(0, 1), C, ASSERTED, "E(f_n) = {0, 1}")
    ex += _points("E3.3:f1", "expansive", _pts("1/2"), R, ASSERTED, "E(f_n) = {0, 1}")
    ex += _points("E3.3:f1", "positively-expansive", _pts(0), C, ASSERTED, "E+(f_n) = {0}")
    ex += _points("E3.3:f1", "positively-expansive", _pts(1), R, ASSERTED, "E+(f_n) = {0}")
    return FixtureEntry("E3.3", "homeomorphisms pushing [0, 1] up with uniform limit the identity", tuple(ex))


def _ee33():
    ex = [Expectation("mode", "EE3.3", "uc", None, C, ASSERTED, "f_n ->uc f"),
          Expectation("mode", "EE3.3", "oc", None, R, DERIVED, "f_n fixes [0, 1/(n+1)] while f pushes it up")]
    ex += _points("EE3.3:limit", "expansive", _pts(0, 1), C, ASSERTED, "E(f) = {0, 1}")
    ex += _points("EE3.3:limit", "positively-expansive", _pts(0), C, ASSERTED, "E+(f) = {0}")
    ex += _points("EE3.3:limit", "positively-expansive", _pts(1), R, ASSERTED, "E+(f) = {0}")
    ex += _points("EE3.3:limit", "periodic-density", _pts(0), R, ASSERTED, "P(f) is empty")
    ex += _points("EE3.3:limit", "shadowable", _pts(0), C, ASSERTED, "0 in Sh(f)")
    ex += _points("EE3.3:f1", "expansive", _pts(0), R, ASSERTED, "E(f_n) = {1}")
    ex += _points("EE3.3:f1", "expansive", _pts(1), C, ASSERTED, "E(f_n) = {1}")
    ex += _points("EE3.3:f1", "periodic-density", _pts(0), C, ASSERTED, "P(f_n) = [0, 1/(n+1)]")
    ex += _points("EE3.3:f1", "shadowable", _pts(0), R, ASSERTED, "0 not in Sh(f_n)")
    ex.append(Expectation("clause", "EE3.3", "pos-expansive", Fraction(0), "agree", DERIVED,
                          "tail condition agrees with the limit"))
    return FixtureEntry("EE3.3", "maps flat near 0 converging uniformly to a map repelling 0", tuple(ex))


def _e34():
    ex = [Expectation("mode", "E3.4", "uc", None, C, ASSERTED, "f_n ->uc f")]
    ex += _points("E3.4:limit", "sensitive", _pts(0), C, ASSERTED, "Se(f) = {0}")
    ex += _points("E3.4:f1", "sensitive", _pts(0), R, ASSERTED, "Se(f_n) = {1/(n+1)}")
    ex.append(Expectation("clause", "E3.4", "sensitive", Fraction(0), "agree", DERIVED,
                          "tail condition agrees with the limit"))
    return FixtureEntry("E3.4", "maps with a dent near 0 converging uniformly to a map repelling 0", tuple(ex))


def _e35():
    ex = [Expectation("mode", "E3.5:f", "uc", None, C, ASSERTED, "f_n ->uc identity"),
          Expectation("mode", "E3.5:g", "uc", None, C, ASSERTED, "g_n ->uc g")]
    ex += _points("E3.5:f:f1", "transitive", _pts(0), C, ASSERTED, "Tt(f_n) = X")
    ex += _points("E3.5:f:limit", "transitive", _pts(0), R, ASSERTED, "Tt(f) is empty")
    ex += _points("E3.5:g:limit", "transitive", _pts(0), C, ASSERTED, "Tt(g) = X")
    ex += _points("E3.5:g:f1", "transitive", _pts(0), R, ASSERTED, "Tt(g_n) is empty")
    for fam in ("E3.5:f", "E3.5:g"):
        ex.append(Expectation("clause", fam, "transitive", Fraction(0), "agree", DERIVED,
                              "tail condition agrees with the limit"))
    return FixtureEntry("E3.5", "rotation families: irrational to the identity, rational to 1/sqrt(2)", tuple(ex))


def _e36():
    ex = [Expectation("mode", "E3.6", "uc", None, C, ASSERTED, "f_n ->uc f")]
    ex += _points("E3.6:limit", "transitive", _pts(1), C, ASSERTED, "Tt(f) = {1}")
    ex += _points("E3.6:limit", "mixing", _pts(1), C, ASSERTED, "Tm(f) = {1}")
    ex += _points("E3.6:limit", "transitive", _pts("1/2"), R, ASSERTED, "Tt(f) = {1}")
    ex += _points("E3.6:f1", "transitive", _pts(1, "1/2"), R, ASSERTED, "Tt(f_n) is empty")
    for prop in ("transitive", "mixing"):
        ex.append(Expectation("clause", "E3.6", prop, Fraction(1), "agree", DERIVED,
                              "tail condition agrees with the limit"))
    return FixtureEntry("E3.6", "maps with top value n/(n+1) converging to a map fixing 1", tuple(ex))


def _e39():
    ex = [Expectation("mode", "E3.9", "uc", None, C, ASSERTED, "f_n ->uc identity")]
    ex += _points("E3.9:f1", "shadowable+", _pts("1/2"), C, ASSERTED, "Sh+(f_n) = X")
    ex += _points("identity", "shadowable+", _pts("1/2"), R, ASSERTED, "Sh+(identity) is empty")
    ex += _points("identity", "specification", _pts("1/2"), R, DERIVED, "identity has no specification point")
    ex.append(Expectation("refusal", "E3.9", "shadowable+", Fraction(1, 2), "oc", DERIVED,
                          "the transfer statement needs orbital convergence"))
    return FixtureEntry("E3.9", "maps reaching 1 at n/(n+1) converging uniformly to the identity", tuple(ex))


def _e310():
    ex = [Expectation("mode", "E3.10", "uc", None, C, ASSERTED, "f_n ->uc f")]
    ex += _points("E3.10:f2", "shadowable+", _pts("1/2"), R, ASSERTED, "Sh+(f_n) is empty")
    ex += _points("E3.10:f2", "shadowable+", _pts(0), R, DERIVED, "points below the fixed point 1/3 are not shadowable")
    ex += _points("E3.10:limit", "shadowable+", _pts("1/2"), C, ASSERTED, "Sh+(f) = X")
    return FixtureEntry("E3.10", "maps lifted at 0 converging uniformly to a map fixing 0", tuple(ex))


def _e38():
    ex = [Expectation("mode", "E3.8:g", "pc", None, C, ASSERTED, "g_n ->pc g"),
          Expectation("mode", "E3.8:g", "uc", None, R, DERIVED, "sup |x/(2n)| is infinite on the line"),
          Expectation("mode", "E3.8:h", "pc", None, C, ASSERTED, "h_n ->pc h on [0, 1)")]
    ex += _points("zero:line", "specification", _pts(-3, 0, "1/2", 1, 10), C, ASSERTED, "Sp(g) = X")
    for n in (1, 2, 4):
        ex += _points(f"E3.8:g:f{n}", "specification", _pts(1), R, ASSERTED, "Sp(g_n) is empty")
    ex += _points("E3.8:h:f2", "specification", _pts("1/2"), R, ASSERTED, "Sp(h_n) is empty")
    return FixtureEntry("E3.8", "contractions x/(2n) on the line and powers y^n on [0, 1)", tuple(ex))


def _e313():
    ex = [Expectation("mode", "E3.13", "pc", None, C, ASSERTED, "f_n ->pc identity"),
          Expectation("mode", "E3.13", "uc", None, R, DERIVED, "sup |x/(n+1)| is infinite on the line")]
    ex += _points("E3.13:f1", "alpha-persistent", _pts(0, 1), C, ASSERTED, "P_alpha(f_n) = X")
    ex += _points("E3.13:f1", "weak-stable", _pts(1), C, ASSERTED, "Wts(f_n) = X")
    ex += _points("E3.13:f1", "shadowable", _pts(1), C, ASSERTED, "Sh(f_n) = X")
    ex += _points("doubling:line", "alpha-persistent", _pts(0, 1), C, DERIVED, "expanding linear maps are persistent")
    for target in ("identity:line", "identity"):
        ex += _points(target, "alpha-persistent", _pts("1/2"), R, ASSERTED, "P_alpha(identity) is empty")
        ex += _points(target, "weak-stable", _pts("1/2"), R, ASSERTED, "Wts(identity) is empty")
    ex += _points("identity:line", "shadowable", _pts(1), R, ASSERTED, "Sh(identity) is empty")
    ex.append(Expectation("refusal", "E3.13", "alpha-persistent", Fraction(1), "oc", DERIVED,
                          "the transfer statement needs orbital convergence"))
    return FixtureEntry("E3.13", "stretchings (n+2)x/(n+1) of the line converging pointwise to the identity",
                        tuple(ex))


def _constant():
    ex = [Expectation("mode", "const:EE3.3:limit", "oc", None, C, DERIVED, "a constant family has zero deviation"),
          Expectation("mode", "contraction", "oc", None, C, DERIVED, "contractions with converging slopes"),
          Expectation("clause", "const:EE3.3:limit", "shadowable+", Fraction(1, 2), "agree", DERIVED,
                      "tail condition agrees with the limit"),
          Expectation("clause", "contraction", "shadowable+", Fraction(1, 2), "agree", DERIVED,
                      "tail condition agrees with the limit")]
    return FixtureEntry("const", "constant families and a contracting family (orbitally convergent)", tuple(ex))


REGISTRY: dict[str, FixtureEntry] = {e.name: e for e in (
    _e31(), _en1(), _e33(), _ee33(), _e34(), _e35(), _e36(), _e39(), _e310(), _e38(), _e313(), _constant())}


def select(selector: str) -> list:
    if selector == "all":
        return list(REGISTRY.values())
    names = [s.strip() for s in selector.split(",") if s.strip()]
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise InputError(f"unknown fixture(s) {', '.join(unknown)}; expected one of {', '.join(REGISTRY)} or all")
    return [REGISTRY[n] for n in names]


# -- running ----------------------------------------------------------------------------

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


class Runner:
    """Evaluates expectations, sharing convergence results between them."""

    def __init__(self, cfg: ScaleConfig = DEFAULT_SCALE, hs: HarnessScale = DEFAULT_HARNESS,
                 ccfg: ConvergenceConfig | None = None):
        self.cfg = cfg
        self.hs = hs
        self.ccfg = ccfg or ConvergenceConfig(horizon=cfg.horizon)
        self._modes = {}

    def mode(self, family: str, mode: str):
        key = (family, mode)
        if key not in self._modes:
            self._modes[key] = mode_status(resolve_family(family), mode, self.ccfg)
        return self._modes[key]

    def run(self, exp: Expectation) -> dict:
        out = {"expectation": exp.to_json()}
        try:
            if exp.kind == "point":
                v = check_property(resolve_map(exp.target), exp.point, exp.prop, self.cfg)
                got, detail = v.status.value, v.to_json()
            elif exp.kind == "mode":
                r = self.mode(exp.target, exp.prop)
                got, detail = r.status.value, r.to_json()
            elif exp.kind in ("clause", "refusal"):
                try:
                    rec = run_clause(exp.prop, resolve_family(exp.target), exp.point, self.cfg, self.hs)
                except PreconditionError as exc:
                    got, detail = f"refused:{exc.hypothesis}", {"message": str(exc)}
                else:
                    got, detail = ("agree" if rec.agree else "disagree"), rec.to_json()
                if exp.kind == "refusal":
                    got = got.removeprefix("refused:") if got.startswith("refused:") else "not refused"
            else:
                raise InputError(f"unknown expectation kind {exp.kind!r}")
        except (CapabilityError, ScaleError) as exc:
            out.update(computed=Status.INCONCLUSIVE.value, outcome=INCONCLUSIVE,
                       detail={"unsupported": f"{type(exc).__name__}: {exc}"})
            return out
        if got == exp.expected:
            outcome = PASS
        elif got == Status.INCONCLUSIVE.value:
            outcome = INCONCLUSIVE
        else:
            outcome = FAIL
        out.update(computed=got, outcome=outcome, detail=detail)
        return out


def verify_fixtures(entries, cfg: ScaleConfig = DEFAULT_SCALE, hs: HarnessScale = DEFAULT_HARNESS,
                    progress: Callable[[dict], None] | None = None) -> list:
    runner = Runner(cfg, hs)
    results = []
    for entry in entries:
        for exp in entry.expectations:
            r = runner.run(exp)
            r["fixture"] = entry.name
            results.append(r)
            if progress:
                progress(r)
    return results


# -- reports ----------------------------------------------------------------------------

def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class RunReport:
    """Command echo, configuration, seed, results and wall time.

    ``results_sha256`` digests the canonical serialization of ``results``; a
    re-run with the same command, config and seed reproduces it exactly.
    Wall time is kept outside the digest.
    """

    command: list
    config: dict
    seed: int
    results: list
    wall_time: float = 0.0
    started: float = field(default_factory=time.perf_counter, repr=False)

    def finish(self):
        self.wall_time = round(time.perf_counter() - self.started, 3)
        return self

    @property
    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.results).encode()).hexdigest()

    def to_json(self):
        return {"command": list(self.command), "config": jsonable(self.config), "seed": self.seed,
                "results": jsonable(self.results), "results_sha256": self.digest,
                "wall_time_s": self.wall_time}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def mismatches(results) -> list:
    return [r for r in results if r.get("outcome") == FAIL]


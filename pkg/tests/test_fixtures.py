from fractions import Fraction

import pytest

from pointdyn.errors import InputError
from pointdyn.fixtures import (
    ALIASES,
    ASSERTED,
    CHECKS,
    DERIVED,
    FAMILIES,
    MAPS,
    REGISTRY,
    Expectation,
    RunReport,
    Runner,
    canonical_json,
    check_property,
    resolve_family,
    resolve_map,
    select,
)
from pointdyn.maps import PLMap
from pointdyn.theorems import HarnessScale
from pointdyn.verdict import DEFAULT_SCALE, Status

F = Fraction
CFG = DEFAULT_SCALE.with_(horizon=40)


def test_every_expectation_is_well_formed():
    kinds = {"point", "mode", "clause", "refusal"}
    for name, entry in REGISTRY.items():
        assert entry.name == name and entry.expectations
        for e in entry.expectations:
            assert e.kind in kinds and e.provenance in (ASSERTED, DERIVED) and e.claim
            if e.kind == "point":
                resolve_map(e.target)
                assert e.prop in CHECKS or e.prop in ALIASES
            else:
                resolve_family(e.target)


def test_registered_maps_and_families_resolve():
    for name in MAPS:
        resolve_map(name)
    for name in FAMILIES:
        fam = resolve_family(name)
        assert fam.n_max == 16
        assert isinstance(resolve_map(f"{name}:limit"), type(fam.limit))
        assert resolve_map(f"{name}:f3") == fam(3)


@pytest.mark.parametrize("bad", ["nope", "E3.3:g2", "E3.3:f0", "E3.3:fx", ""])
def test_unknown_maps_are_rejected(bad):
    with pytest.raises(InputError):
        resolve_map(bad)


def test_family_descriptors():
    assert resolve_family('{"family": "E3.3", "n_max": 4}').n_max == 4
    assert resolve_family("const:E3.1:f").constant
    for bad in ('{"family": "E3.3", "params": {"a": 1}}', '{"n_max": 3}', "{oops", "nope",
                '{"family": "E3.3", "n_max": 0}'):
        with pytest.raises(InputError):
            resolve_family(bad)


def test_select():
    assert [e.name for e in select("E3.3,EN1")] == ["E3.3", "EN1"]
    assert len(select("all")) == len(REGISTRY)
    with pytest.raises(InputError):
        select("E9.9")


def test_aliases_and_unknown_properties():
    f = PLMap([(0, 0), (1, 1)])
    assert check_property(f, F(0), "pos-expansive", CFG).property == check_property(f, F(0), "expansive+", CFG).property
    with pytest.raises(InputError):
        check_property(f, F(0), "chaotic", CFG)


def test_runner_outcomes():
    r = Runner(CFG, HarnessScale(horizon=40))
    ok = r.run(Expectation("point", "E3.1:f", "expansive", F(1, 2), Status.CONFIRMED.value, ASSERTED, "toy"))
    assert ok["outcome"] == "pass"
    bad = r.run(Expectation("point", "E3.1:f", "expansive", F(1, 2), Status.REFUTED.value, ASSERTED, "toy"))
    assert bad["outcome"] == "fail"
    refusal = r.run(Expectation("refusal", "E3.9", "shadowable+", F(1, 2), "oc", DERIVED, "toy"))
    assert refusal["outcome"] == "pass"
    # capability gaps are reported as inconclusive, never as a failure
    gap = r.run(Expectation("point", "E3.8:h:f2", "specification", F(1, 2), Status.CONFIRMED.value, ASSERTED,
                            "toy"))
    assert gap["outcome"] in ("pass", "inconclusive")


def test_report_digest_ignores_wall_time():
    a = RunReport(["x"], {}, 0, [{"v": F(1, 3)}]).finish()
    b = RunReport(["x"], {}, 0, [{"v": F(1, 3)}])
    b.wall_time = 99.0
    assert a.digest == b.digest
    assert canonical_json({"b": 1, "a": F(1, 2)}) == '{"a":"1/2","b":1}'
    assert RunReport(["x"], {}, 0, [{"v": 1}]).digest != a.digest

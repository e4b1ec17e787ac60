from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointdyn.errors import CapabilityError, InputError, PreconditionError
from pointdyn.fixtures import resolve_family
from pointdyn.maps import FORWARD, TWO_SIDED
from pointdyn.metric import Space
from pointdyn.systems import identity
from pointdyn.theorems import (
    CLAUSES,
    HarnessScale,
    check_measure_expansive_point,
    negligible,
    run_clause,
    truncated_tail_nonempty,
)
from pointdyn.verdict import DEFAULT_SCALE, Status

F = Fraction
C, R, I = Status.CONFIRMED, Status.REFUTED, Status.INCONCLUSIVE
CFG = DEFAULT_SCALE.with_(horizon=40)
HS = HarnessScale(horizon=40)


# oracle: the truncated tail intersection computed by brute force

@given(st.lists(st.frozensets(st.integers(0, 5), max_size=5), min_size=6, max_size=6), st.integers(1, 6))
def test_truncated_tail_matches_brute_force(sets, M):
    N = len(sets)
    get = lambda n: sets[n - 1]
    cond = truncated_tail_nonempty("toy", get, M, N)
    tails = {m: frozenset.intersection(*[get(n) for n in range(m, N + 1)]) for m in range(1, M + 1)}
    assert cond.nonempty == any(tails.values())
    if cond.nonempty:
        assert tails[cond.start] and (cond.start == 1 or not tails[cond.start - 1])
        assert cond.witness in tails[cond.start]


def test_truncation_bounds_are_checked():
    with pytest.raises(InputError):
        truncated_tail_nonempty("toy", lambda n: {1}, 5, 4)
    with pytest.raises(InputError):
        HarnessScale(M=0)


def test_negligible_is_relative_to_the_ball():
    delta = F(1, 8)
    ball = 2 * delta
    assert negligible(Space.INTERVAL, F(1, 2), delta, ball * CFG.measure_tol, CFG)
    assert not negligible(Space.INTERVAL, F(1, 2), delta, ball * CFG.measure_tol * 2, CFG)
    # at an endpoint the ball is half as large
    assert not negligible(Space.INTERVAL, F(0), delta, ball * CFG.measure_tol, CFG)


def test_identity_is_not_measure_expansive():
    v = check_measure_expansive_point(identity(), F(1, 2), CFG, TWO_SIDED)
    assert v.status is R and v.property == "measure-expansive"
    fwd = check_measure_expansive_point(identity(), F(1, 2), CFG, FORWARD)
    assert fwd.status is R and fwd.property == "measure-expansive+"
    with pytest.raises(CapabilityError):
        check_measure_expansive_point(identity(Space.LINE), F(0), CFG)


# refusals: transfer needs the convergence hypothesis

@pytest.mark.parametrize("family,clause,x,mode", [
    ("E3.9", "shadowable+", F(1, 2), "oc"),
    ("E3.13", "alpha-persistent", F(1), "oc"),
    ("E3.13", "expansive", F(0), "pwoc"),
])
def test_refusals_name_the_missing_hypothesis(family, clause, x, mode):
    with pytest.raises(PreconditionError) as info:
        run_clause(clause, resolve_family(family), x, CFG, HS)
    assert info.value.hypothesis == mode
    assert "refuted" in str(info.value)


def test_unknown_clause():
    with pytest.raises(InputError):
        run_clause("chaotic", resolve_family("E3.3"), F(0), CFG, HS)
    assert {"expansive", "measure", "shadowable+", "weak-stable"} <= set(CLAUSES)


# agreements

def test_constant_identity_family_is_refuted_on_both_sides():
    rec = run_clause("alpha-persistent", resolve_family("const:identity"), F(1, 2), CFG, HS)
    assert (rec.condition, rec.direct, rec.agree) == (R, R, True)


def test_constant_family_certificate_for_an_empty_tail():
    rec = run_clause("expansive", resolve_family("const:identity"), F(1, 2), CFG, HS)
    assert rec.direct is R and rec.condition is R
    assert "certificate" in rec.details["condition"]


@pytest.mark.parametrize("family,clause,x", [
    ("E3.5:f", "transitive", F(0)),
    ("EE3.3", "pos-expansive", F(0)),
])
def test_limit_transfer_agrees(family, clause, x):
    rec = run_clause(clause, resolve_family(family), x, CFG, HS)
    assert rec.agree
    assert {rec.condition, rec.direct} != {C, R}
    assert rec.to_json()["agree"] is True

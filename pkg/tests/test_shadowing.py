from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointdyn import intervals as ivs
from pointdyn.errors import InputError
from pointdyn.maps import TWO_SIDED
from pointdyn.pointwise import dist
from pointdyn.shadowing import (
    DRIFT,
    NOISE,
    SWITCH,
    GapPattern,
    PseudoOrbit,
    check_shadowable_point,
    check_specification_point,
    demand_constraints,
    make_pseudo_orbit,
    trace_constraints,
    trace_set,
    tracer_ok,
    verify_pseudo_orbit,
)
from pointdyn.systems import contraction, inv_sqrt2_rotation, identity, ladder_f, push_up_limit
from pointdyn.verdict import DEFAULT_SCALE, Status
from strategies import dyadics, homeos

F = Fraction
C, R = Status.CONFIRMED, Status.REFUTED
SMALL = DEFAULT_SCALE.with_(horizon=40)


def _closed_ok(f, y, targets, eps):
    p = y
    for n in range(max(targets) + 1):
        if n:
            p = f.eval(p)
        if n in targets and dist(f.space, p, targets[n]) > eps:
            return False
    return True


# oracles: brute force over a fine lattice and direct iteration

@given(homeos(3), dyadics(4), st.integers(0, 2**20), st.sampled_from([F(1, 8), F(1, 16)]))
def test_feasible_set_agrees_with_lattice_brute_force(f, x, seed, eps):
    p = make_pseudo_orbit(f, x, F(1, 16), 5, NOISE, seed=seed)
    res = trace_set(f, p, eps)
    targets = p.as_dict()
    for k in range(2**10 + 1):
        y = F(k, 2**10)
        assert ivs.contains(res.feasible, y) == _closed_ok(f, y, targets, eps)


@given(homeos(3), dyadics(4), st.integers(0, 2**20))
def test_reported_tracers_are_sound(f, x, seed):
    p = make_pseudo_orbit(f, x, F(1, 16), 8, NOISE, seed=seed)
    res = trace_set(f, p, F(1, 8))
    if res.traced:
        assert tracer_ok(f, res.tracer, p.as_dict(), F(1, 8))
        assert ivs.contains(res.feasible, res.tracer)


@given(homeos(3), dyadics(4), st.integers(0, 2**20), st.sampled_from([NOISE, DRIFT, SWITCH]))
def test_generated_pseudo_orbits_are_valid(f, x, seed, strategy):
    p = make_pseudo_orbit(f, x, F(1, 32), 20, strategy, seed=seed, target=F(1), at=3)
    assert p.through == x
    assert verify_pseudo_orbit(f, p)["valid"]


def test_zero_noise_gives_the_true_orbit():
    f = ladder_f()
    p = make_pseudo_orbit(f, F(1, 3), F(1, 8), 10, NOISE, scale=0)
    assert list(p.points) == [f.iterate_value(F(1, 3), n) for n in range(11)]
    assert trace_set(f, p, F(1, 1000)).traced


def test_two_sided_pseudo_orbit_runs_through_x():
    f = ladder_f()
    p = make_pseudo_orbit(f, F(1, 3), F(1, 16), 6, NOISE, seed=3, two_sided=True)
    assert p.start == -6 and p.through == F(1, 3) and p.two_sided
    assert verify_pseudo_orbit(f, p)["valid"]


def test_pseudo_orbit_json_round_trip_and_errors():
    p = make_pseudo_orbit(identity(), F(1, 2), F(1, 8), 4, DRIFT)
    assert PseudoOrbit.from_json(p.to_json()) == p
    with pytest.raises(InputError):
        PseudoOrbit.from_json({"points": ["1/2"]})
    with pytest.raises(InputError):
        make_pseudo_orbit(identity(), F(1, 2), 0, 4)


def test_identity_drift_cannot_be_traced():
    p = make_pseudo_orbit(identity(), F(1, 2), F(1, 64), 200, DRIFT)
    assert trace_set(identity(), p, F(1, 10)).empty


def test_gap_pattern_validation():
    GapPattern(((0, 2), (5, 6)), 3)
    with pytest.raises(InputError):
        GapPattern(((0, 2), (4, 6)), 3)
    with pytest.raises(InputError):
        GapPattern(((3, 2),), 1)


def test_demand_constraints_follow_the_orbits():
    f = ladder_f()
    t = demand_constraints(f, GapPattern(((0, 1), (4, 5)), 2), (F(1, 3), F(3, 4)))
    assert t == {0: F(1, 3), 1: f.eval(F(1, 3)), 4: f.iterate_value(F(3, 4), 4), 5: f.iterate_value(F(3, 4), 5)}
    res = trace_constraints(f, t, F(1, 8))
    if res.traced:
        assert tracer_ok(f, res.tracer, t, F(1, 8))


@pytest.mark.parametrize("f,x,status", [
    (identity(), F(1, 2), R),
    (contraction(), F(1, 2), C),
    (push_up_limit(), F(1, 2), C),
    (push_up_limit(), F(0), C),  # repelling fixed point
])
def test_shadowable_points(f, x, status):
    assert check_shadowable_point(f, x, SMALL).status is status


def test_two_sided_shadowing_on_the_identity_is_refuted():
    assert check_shadowable_point(identity(), F(1, 3), SMALL, direction=TWO_SIDED).status is R


def test_specification():
    assert check_specification_point(identity(), F(1, 2), SMALL, pattern_budget=4).status is R
    assert check_specification_point(inv_sqrt2_rotation(), F(0), SMALL, pattern_budget=4).status is R

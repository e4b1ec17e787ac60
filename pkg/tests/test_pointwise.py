from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointdyn import intervals as ivs
from pointdyn.errors import CapabilityError
from pointdyn.maps import TWO_SIDED, PLMap
from pointdyn.metric import Space
from pointdyn.pointwise import (
    check_devaney_point,
    check_expansive_point,
    check_periodic_density_point,
    check_positively_expansive_point,
    check_sensitive_point,
    check_transitive_point,
    containment_certificate,
    dist,
    nonseparating_set,
    separation_index_set,
)
from pointdyn.intervals import Interval
from pointdyn.systems import inv_sqrt2_rotation, identity, ladder_f, ladder_g, push_up, push_up_limit, square_map
from pointdyn.verdict import DEFAULT_SCALE, Status, meet
from strategies import dyadics, homeos

F = Fraction
C, R = Status.CONFIRMED, Status.REFUTED


def _orbit_close(f, x, y, delta, horizon):
    p, q = x, y
    for n in range(horizon + 1):
        if n:
            p, q = f.eval(p), f.eval(q)
        if abs(p - q) > delta:
            return False
    return True


# oracles: direct iteration of lattice points and closed forms

@given(homeos(3), dyadics(4), st.sampled_from([F(1, 4), F(1, 8)]), st.integers(1, 4))
def test_nonseparating_set_matches_direct_iteration(f, x, delta, horizon):
    ns = nonseparating_set(f, x, delta, horizon)
    for k in range(65):
        y = F(k, 64)
        assert ivs.contains(ns.intervals, y) == _orbit_close(f, x, y, delta, horizon)


@pytest.mark.parametrize("delta", [F(1, 10), F(1, 4), F(1, 64)])
def test_identity_nonseparating_measure_is_twice_delta(delta):
    assert nonseparating_set(identity(), F(1, 2), delta, 50).measure == 2 * delta


@given(homeos(3), dyadics(4), st.integers(1, 5))
def test_delta_and_horizon_monotonicity(f, x, horizon):
    small = nonseparating_set(f, x, F(1, 16), horizon).intervals
    large = nonseparating_set(f, x, F(1, 4), horizon).intervals
    longer = nonseparating_set(f, x, F(1, 16), horizon + 1).intervals
    assert ivs.subset(small, large)
    assert ivs.subset(longer, small)


@given(homeos(3), dyadics(5), dyadics(5))
def test_separation_index_set_is_exact(f, x, y):
    if x == y:
        return
    w = separation_index_set(f, x, y, F(1, 8), 6, TWO_SIDED)
    inv = f.inverse()
    for n in range(-6, 7):
        g = f if n >= 0 else inv
        gap = dist(Space.INTERVAL, g.iterate_value(x, abs(n)), g.iterate_value(y, abs(n)))
        assert (n in w.indices) == (gap > F(1, 8))


def test_expansive_witness_rechecks():
    f = ladder_f()
    v = check_expansive_point(f, F(1, 2))
    assert v.status is C
    delta = v.witness["delta"]
    inv = f.inverse()
    for y, n in v.witness["separations"]:
        g = f if n >= 0 else inv
        assert abs(g.iterate_value(y, abs(n)) - g.iterate_value(F(1, 2), abs(n))) > delta


def test_sensitive_witness_rechecks():
    f = ladder_f()
    x = F(1, 3)
    v = check_sensitive_point(f, x)
    assert v.status is C
    delta = v.witness["delta"]
    for eps, (y, n) in v.witness["pairs"].items():
        assert abs(y - x) < eps
        assert abs(f.iterate_value(y, n) - f.iterate_value(x, n)) > delta


def test_containment_certificate_rechecks():
    f = ladder_f()
    region = Interval(0, F(1, 8))
    cert = containment_certificate(f, region, F(1, 4), 200, False)
    assert cert is not None
    j = cert["forward_invariant"]
    assert ivs.subset(f.image(j), (j,)) and j.length <= F(1, 4)
    for k in range(9):
        y = region.lo + k * region.length / 8
        assert j.contains(f.iterate_value(y, cert["forward_steps"]))


@pytest.mark.parametrize("x,status", [(F(1), C), (F(1, 2), C), (F(1, 5), C), (F(0), R)])
def test_ladder_expansive_points(x, status):
    assert check_expansive_point(ladder_f(), x).status is status


@pytest.mark.parametrize("x,status", [(F(1, 3), C), (F(1, 2), R), (F(1, 4), R)])
def test_ladder_positively_expansive_points(x, status):
    assert check_positively_expansive_point(ladder_g(), x).status is status


@pytest.mark.parametrize("x,status", [(F(0), C), (F(1, 2), R)])
def test_ladder_periodic_density(x, status):
    assert check_periodic_density_point(ladder_f(), x).status is status


@pytest.mark.parametrize("x,status", [(F(1), C), (F(1, 2), R), (F(1, 4), R)])
def test_square_map_transitive_and_mixing(x, status):
    h = square_map()
    assert check_transitive_point(h, x).status is status
    assert check_transitive_point(h, x, mode="mixing").status is status


def test_rotations():
    assert check_transitive_point(inv_sqrt2_rotation(), F(0)).status is C
    assert check_transitive_point(identity(Space.CIRCLE), F(1, 3)).status is R


def test_two_sided_expansivity_needs_invertibility():
    tent = PLMap([(0, 0), (F(1, 2), 1), (1, 0)])
    with pytest.raises(CapabilityError):
        check_expansive_point(tent, F(1, 3))


@pytest.mark.parametrize("f,x", [(ladder_f(), F(0)), (ladder_f(), F(1, 2)), (push_up_limit(), F(0)),
                                 (push_up(1), F(1, 2)), (square_map(), F(1))])
def test_devaney_is_the_meet_of_its_parts(f, x):
    v = check_devaney_point(f, x)
    parts = [check_transitive_point(f, x).status, check_periodic_density_point(f, x).status,
             check_sensitive_point(f, x).status]
    assert v.status is meet(parts)
    # a transitive point with dense periodic points is never certified insensitive
    assert not (parts[0] is C and parts[1] is C and parts[2] is R)


def test_tiny_horizon_is_never_a_false_claim():
    cfg = DEFAULT_SCALE.with_(horizon=2)
    assert check_expansive_point(ladder_f(), F(0), cfg).status in (R, Status.INCONCLUSIVE)
    assert check_positively_expansive_point(ladder_g(), F(1, 2), cfg).status in (R, Status.INCONCLUSIVE)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointdyn.errors import CapabilityError, ConstructionError
from pointdyn.metric import Space
from pointdyn.stability import (
    CONSTANT_SHIFT,
    check_persistent_point,
    check_topologically_stable_point,
    check_weak_stable_point,
    constant_shift,
    displacement,
    make_interpolating_perturbation,
    perturbations,
    shift_map,
)
from pointdyn.systems import doubling_line, identity, stretched_line
from pointdyn.maps import PLMap
from pointdyn.verdict import DEFAULT_SCALE, Status

F = Fraction
C, R = Status.CONFIRMED, Status.REFUTED
SMALL = DEFAULT_SCALE.with_(horizon=40)


# oracles: interpolation conditions and displacement checked pointwise on a lattice

@given(st.lists(st.integers(1, 63), min_size=1, max_size=5, unique=True), st.integers(0, 2**16))
def test_interpolating_perturbation_hits_its_pairs(ps, seed):
    import random
    rng = random.Random(seed)
    delta = F(1, 16)
    pairs = [(F(p, 64), F(p, 64) + F(rng.randint(-3, 3), 256)) for p in sorted(ps)]
    try:
        phi = make_interpolating_perturbation(pairs, delta)
    except ConstructionError:
        qs = [q for _, q in pairs]
        assert qs != sorted(set(qs)) or any(not 0 <= q <= 1 for q in qs)
        return
    for p, q in pairs:
        assert phi.eval(p) == q
    lattice = [F(k, 512) for k in range(513)]
    assert max(abs(phi.eval(t) - t) for t in lattice) <= displacement(phi) < delta
    assert all(phi.eval(a) < phi.eval(b) for a, b in zip(lattice, lattice[1:]))


def test_interpolation_rejections():
    with pytest.raises(ConstructionError):
        make_interpolating_perturbation([(F(1, 4), F(1, 2))], F(1, 8))
    with pytest.raises(ConstructionError):
        make_interpolating_perturbation([(F(1, 4), F(3, 10)), (F(3, 10), F(1, 4))], F(1, 8))
    with pytest.raises(ConstructionError):
        make_interpolating_perturbation([(F(0), F(1, 100))], F(1, 8))


@pytest.mark.parametrize("c", [F(1, 10), F(-1, 10), F(1, 64)])
def test_interval_shift_moves_the_middle_by_c(c):
    phi = shift_map(Space.INTERVAL, c)
    assert phi.eval(F(1, 2)) == F(1, 2) + c
    assert displacement(phi) == abs(c)
    assert (phi.eval(0), phi.eval(1)) == (0, 1)


def test_line_shift_is_a_translation():
    fam = constant_shift(identity(Space.LINE), F(1, 8))
    assert fam.g.eval(F(3)) == F(3) + F(1, 8) and fam.bound == F(1, 8)
    assert fam.kind == CONSTANT_SHIFT


def test_perturbations_stay_within_delta():
    for fam in perturbations(PLMap([(0, 0), (F(1, 2), F(1, 4)), (1, 1)]), F(1, 3), F(1, 16), SMALL, 8):
        assert fam.bound < F(1, 16)
        for k in range(65):
            t = F(k, 64)
            assert abs(fam.g.eval(t) - fam.base.eval(t)) <= fam.bound


# verdicts

@pytest.mark.parametrize("f", [identity(), identity(Space.LINE)])
def test_identity_is_nowhere_persistent(f):
    v = check_persistent_point(f, F(1, 2), SMALL)
    assert v.status is R
    assert check_weak_stable_point(f, F(1, 2), SMALL).status is R


@pytest.mark.parametrize("f,x", [(doubling_line(), F(0)), (doubling_line(), F(1)), (stretched_line(1), F(0)),
                                 (stretched_line(1), F(1))])
def test_expanding_line_maps_are_persistent(f, x):
    assert check_persistent_point(f, x, SMALL).status is C


@pytest.mark.parametrize("f,x", [(doubling_line(), F(1, 2)), (stretched_line(1), F(1))])
def test_persistence_and_weak_stability_never_disagree_on_expansive_maps(f, x):
    a = check_persistent_point(f, x, SMALL).status
    b = check_weak_stable_point(f, x, SMALL).status
    assert {a, b} != {C, R}
    t = check_topologically_stable_point(f, x, SMALL)
    assert t.status is a


def test_stability_needs_invertibility():
    tent = PLMap([(0, 0), (F(1, 2), 1), (1, 0)])
    with pytest.raises(CapabilityError):
        check_persistent_point(tent, F(1, 3))

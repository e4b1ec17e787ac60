import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointdyn.convergence import (
    MODES,
    Bound,
    ConvergenceConfig,
    MapFamily,
    classify_convergence,
    constant_family,
    judge,
    mode_status,
    orbital_deviation,
    sup_distance,
)
from pointdyn.errors import InputError
from pointdyn.maps import PLMap
from pointdyn.metric import Space
from pointdyn.systems import (
    identity,
    irrational_rotation,
    push_up,
    push_up_limit,
    stretched_line,
)
from pointdyn.verdict import Status
from strategies import homeos, pl_maps, random_family

F = Fraction
C, R, I = Status.CONFIRMED, Status.REFUTED, Status.INCONCLUSIVE
FAST = ConvergenceConfig(horizon=20, woc_horizon=4)


def _lattice_sup(f, g, k=1, m=256):
    return max(min(abs(f.iterate_value(F(i, m), k) - g.iterate_value(F(i, m), k)), 1) for i in range(m + 1))


# oracles: lattice maxima of exact differences

@given(pl_maps(), pl_maps())
def test_pl_sup_distance_is_exact(f, g):
    b = sup_distance(f, g)
    assert b.exact and b.lower == b.upper
    # breakpoints are dyadic with few bits, so the lattice attains the maximum
    assert b.upper == _lattice_sup(f, g, m=2**8)


@given(homeos(3), homeos(3), st.integers(1, 4))
def test_orbital_deviation_dominates_every_iterate(f, g, k):
    b = orbital_deviation(f, g, 4)
    assert b.lower >= _lattice_sup(f, g, k, m=64)


@given(homeos(3), homeos(3))
def test_orbital_deviation_grows_with_the_horizon(f, g):
    values = [orbital_deviation(f, g, k).lower for k in (1, 2, 4, 8)]
    assert values == sorted(values)
    assert values[0] == sup_distance(f, g).lower


def test_grid_refinement_never_shrinks_the_upper_bound_below_truth():
    a = irrational_rotation(3)
    b = irrational_rotation(5)
    coarse, fine = sup_distance(a, b, F(1, 16)), sup_distance(a, b, F(1, 256))
    assert coarse.lower <= fine.upper and fine.lower <= coarse.upper


def test_line_maps_use_the_bounded_metric():
    assert sup_distance(stretched_line(1), identity(Space.LINE)).lower == 1
    assert orbital_deviation(identity(Space.LINE), identity(Space.LINE), 5).upper == 0


def test_judge_rules():
    cfg = ConvergenceConfig()
    vanishing = [(n, Bound(F(1, n), F(1, n), True)) for n in (1, 2, 4, 8)]
    assert judge(vanishing, cfg)[0] is C
    stuck = [(n, Bound(F(1, 2), F(1, 2), True)) for n in (1, 2, 4, 8)]
    st_, w = judge(stuck, cfg)
    assert st_ is R and w["persistent_above"] == F(1, 2)
    wobble = [(n, Bound(F(0), F(1, 2) if n % 4 else F(1, 3), False)) for n in (1, 2, 4, 8)]
    assert judge(wobble, cfg)[0] is I


def test_family_index_and_space_checks():
    fam = MapFamily("bad", lambda n: identity(Space.CIRCLE), identity())
    with pytest.raises(InputError):
        fam(1)
    with pytest.raises(InputError):
        fam(0)


# registry families

def test_uniform_convergence_without_orbital_convergence():
    r = classify_convergence(MapFamily("EN1", irrational_rotation, identity(Space.CIRCLE)))
    assert r.status("uc") is C and r.status("oc") is R
    assert all(v >= F(1, 5) for v in r.modes["oc"].witness["lower_bounds"].values())


def test_stretched_lines_converge_only_pointwise():
    r = classify_convergence(MapFamily("E3.13", stretched_line, identity(Space.LINE)))
    assert [r.status(m) for m in MODES] == [R, R, R, R, C]
    assert set(r.modes["uc"].witness["lower_bounds"].values()) == {1}


def test_push_up_family_converges_orbitally():
    r = classify_convergence(MapFamily("E3.3", push_up, identity()), FAST)
    assert r.status("oc") is C and r.hierarchy_ok()


def test_constant_families_have_zero_deviation():
    for f in (push_up_limit(), identity(), PLMap([(0, 0), (F(1, 2), 1), (1, 0)])):
        r = classify_convergence(constant_family(f), FAST)
        assert all(r.status(m) is C for m in MODES)
        assert orbital_deviation(f, f, 50).upper == 0


def test_mode_status_matches_the_full_report():
    fam = MapFamily("E3.13", stretched_line, identity(Space.LINE))
    full = classify_convergence(fam, FAST)
    for m in MODES:
        assert mode_status(fam, m, FAST).status in (full.status(m), I)


@pytest.mark.parametrize("seed", range(20))
def test_random_families_respect_the_hierarchy(seed):
    r = classify_convergence(random_family(random.Random(seed)), FAST)
    assert r.hierarchy_ok()

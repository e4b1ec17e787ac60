import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointdyn.errors import CapabilityError, InputError
from pointdyn.intervals import Interval
from pointdyn.maps import (
    TWO_SIDED,
    AffineLineMap,
    PLMap,
    PowerMap,
    RotationMap,
    compose_pl,
    fixed_points,
    interval_image,
    interval_preimage,
    iterate_pl,
    map_from_json,
    orbit,
)
from pointdyn.metric import HighPrecisionReal, Space
from pointdyn.systems import ladder_f, push_up
from strategies import dyadics, homeos, intervals01, pl_maps

F = Fraction
LATTICE = [F(k, 64) for k in range(65)]


def _interp(pts, x):
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise AssertionError("outside breakpoints")


# oracles: direct interpolation, repeated evaluation and lattice scans

@given(pl_maps(), dyadics(8))
def test_eval_is_linear_interpolation(f, x):
    assert f.eval(x) == _interp(f.breakpoints, x)


@given(pl_maps(3), st.integers(1, 4), dyadics(7))
def test_iterate_consistency(f, k, x):
    assert iterate_pl(f, k).eval(x) == f.iterate_value(x, k)


@given(pl_maps(3), pl_maps(3), dyadics(7))
def test_composition_agrees_with_nested_eval(f, g, x):
    assert compose_pl(f, g).eval(x) == f.eval(g.eval(x))


@given(homeos(), dyadics(8))
def test_inverse_round_trip(f, x):
    inv = f.inverse()
    assert inv.eval(f.eval(x)) == x
    assert f.eval(inv.eval(x)) == x


@given(pl_maps(), intervals01())
def test_preimage_duality_on_lattice(f, iv):
    pre = interval_preimage(f, iv)
    for x in LATTICE:
        assert any(p.contains(x) for p in pre) == iv.contains(f.eval(x))


@given(pl_maps(), intervals01())
def test_image_is_exact(f, iv):
    img = interval_image(f, iv)
    xs = [x for x in LATTICE if iv.contains(x)] + [iv.lo, iv.hi] + [b for b in f.xs if iv.contains(b)]
    values = {f.eval(x) for x in xs}
    # every image point is covered, and every image endpoint is attained
    assert all(any(p.contains(v) for p in img) for v in values)
    for p in img:
        assert p.lo in values and p.hi in values


@given(pl_maps(3), st.integers(1, 3))
def test_fixed_point_completeness(f, k):
    g = iterate_pl(f, k)
    fp = fixed_points(f, k)
    for p in fp.points:
        assert g.eval(p) == p
    for iv in fp.intervals:
        assert g.eval(iv.lo) == iv.lo and g.eval(iv.hi) == iv.hi and g.eval(iv.midpoint) == iv.midpoint

    def reported(x):
        return x in fp.points or any(iv.contains(x) for iv in fp.intervals)

    xs = sorted(set(LATTICE) | set(g.xs))
    for a, b in zip(xs, xs[1:]):
        for x in (a, b):
            if g.eval(x) == x:
                assert reported(x)
        da, db = g.eval(a) - a, g.eval(b) - b
        if da * db < 0:
            assert any(a < p < b for p in fp.points) or any(iv.lo < b and iv.hi > a for iv in fp.intervals)


def test_ladder_fixes_reciprocals():
    f = ladder_f()
    for k in range(1, 20):
        assert f.eval(F(1, k)) == F(1, k)
    # P_1 = 3/4 goes to Q_1 = 5/8
    assert f.eval(F(3, 4)) == F(5, 8)


def test_push_up_breakpoint():
    f = push_up(1)
    assert f.eval(F(3, 4)) == F(7, 8) and f.eval(0) == 0 and f.eval(1) == 1


def test_rotation_wraps_and_inverts():
    r = RotationMap(HighPrecisionReal(F(3, 4)))
    assert r.eval(F(1, 2)) == F(1, 4)
    assert r.inverse().eval(r.eval(F(1, 3))) == F(1, 3)
    assert r.iterate_value(0, 4) == 0
    assert fixed_points(r, 4).intervals == (Interval(0, 1),)


def test_affine_line_map():
    g = AffineLineMap(F(3, 2), 1)
    assert g.iterate_value(2, 2) == F(3, 2) * (F(3, 2) * 2 + 1) + 1
    assert g.inverse().eval(g.eval(F(-7, 3))) == F(-7, 3)
    assert fixed_points(g).points == (F(-2),)


def test_power_map_exact_and_monotone_images():
    h = PowerMap(2)
    assert h.eval(F(1, 3)) == F(1, 9)
    assert h.image(Interval(F(1, 2), F(3, 4))) == (Interval(F(1, 4), F(9, 16)),)
    with pytest.raises(CapabilityError):
        h.preimage(Interval(0, F(1, 2)))


def test_power_map_rounds_huge_iterates():
    h = PowerMap(16)
    x = h.iterate_value(F(1, 3), 12)
    # rounded onto the 2^-4096 grid instead of growing without bound
    assert x.denominator.bit_length() <= 4097


@pytest.mark.parametrize("f", [ladder_f(), RotationMap(HighPrecisionReal(F(1, 8))), AffineLineMap(2, F(1, 3)),
                               PowerMap(3), PLMap([(-1, 2), (0, 0), (1, 1)], Space.LINE)])
def test_json_round_trip(f):
    again = map_from_json(json.loads(json.dumps(f.to_json())))
    assert again == f


@pytest.mark.parametrize("pts", [[(0, 0), (F(1, 2), F(3, 2)), (1, 1)], [(0, 0), (0, 1), (1, 1)], [(F(1, 2), 0), (1, 1)]])
def test_bad_pl_maps_rejected(pts):
    with pytest.raises(InputError):
        PLMap(pts)


def test_two_sided_orbit_needs_inverse():
    seg = orbit(push_up(1), F(1, 2), 3, TWO_SIDED)
    assert seg.indices == tuple(range(-3, 4))
    assert push_up(1).eval(seg.at(-1)) == F(1, 2)
    with pytest.raises(CapabilityError):
        orbit(PLMap([(0, 0), (F(1, 2), 1), (1, 0)]), F(1, 3), 2, TWO_SIDED)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pointdyn.errors import InputError
from pointdyn.intervals import Interval, intersect_sets, measure, normalize
from pointdyn.metric import (
    HighPrecisionReal,
    Space,
    bounded_distance,
    check_point,
    distance,
    format_rational,
    hp_sqrt,
    parse_rational,
    wrap,
)
from strategies import dyadics, intervals01

F = Fraction


# oracle: brute-force membership on a fine dyadic lattice

@given(st.lists(intervals01(), max_size=4), st.lists(intervals01(), max_size=4))
def test_intersection_matches_pointwise_membership(a, b):
    got = intersect_sets(normalize(a), normalize(b))
    for k in range(0, 129):
        x = F(k, 128)
        inside = any(i.contains(x) for i in a) and any(i.contains(x) for i in b)
        assert inside == any(i.contains(x) for i in got)


@given(st.lists(intervals01(), max_size=5))
def test_normalized_measure_is_union_length(ivs):
    pieces = normalize(ivs)
    for p, q in zip(pieces, pieces[1:]):
        assert p.hi < q.lo
    # union length by counting 1/64 cells (endpoints are 1/64-dyadic)
    cells = sum(1 for k in range(64) if any(i.lo <= F(k, 64) and F(k + 1, 64) <= i.hi for i in ivs))
    assert measure(pieces) == F(cells, 64)


def test_circle_distance_wraps():
    assert distance(Space.CIRCLE, F(1, 10), F(9, 10)) == F(1, 5)
    assert distance(Space.INTERVAL, F(1, 10), F(9, 10)) == F(4, 5)
    assert bounded_distance(Space.LINE, -5, 5) == 1


@given(dyadics(8, -4, 4))
def test_wrap_lands_in_fundamental_domain(x):
    w = wrap(x)
    assert 0 <= w < 1 and (x - w).denominator == 1


@pytest.mark.parametrize("text,value", [("1/2", F(1, 2)), ("-3", F(-3)), (" 6/4 ", F(3, 2)), ("0/1", F(0))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["abc", "1/0", "0.5", "", "1/-2"])
def test_parse_rational_rejects(text):
    with pytest.raises(InputError):
        parse_rational(text)


@given(st.fractions())
def test_format_round_trip(q):
    s = format_rational(q)
    assert "/" in s and parse_rational(s) == q


def test_points_must_lie_in_the_space():
    with pytest.raises(InputError):
        check_point(Space.INTERVAL, F(3, 2))
    with pytest.raises(InputError):
        check_point(Space.CIRCLE, 1)
    assert check_point(Space.LINE, -7) == -7


def test_hp_sqrt_brackets_the_root():
    r = hp_sqrt(F(1, 2))
    assert r.irrational
    assert r.value ** 2 <= F(1, 2) <= (r.value + r.error) ** 2
    assert hp_sqrt(F(9, 4)).value == F(3, 2) and hp_sqrt(F(9, 4)).error == 0


def test_hex_round_trip():
    r = hp_sqrt(F(1, 2))
    assert HighPrecisionReal.from_hex(r.to_hex()).value == r.value
    with pytest.raises(InputError):
        HighPrecisionReal(F(1, 3)).to_hex()


def test_empty_interval_rejected():
    with pytest.raises(InputError):
        Interval(1, 0)

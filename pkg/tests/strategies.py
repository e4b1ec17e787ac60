"""Random exact inputs shared by the test modules."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from pointdyn.intervals import Interval
from pointdyn.maps import PLMap


def dyadics(bits=6, lo=0, hi=1):
    m = 1 << bits
    return st.integers(lo * m, hi * m).map(lambda k: Fraction(k, m))


def _strict_increasing(rng, k, bits):
    m = 1 << bits
    inner = sorted(rng.sample(range(1, m), k))
    return [Fraction(0)] + [Fraction(v, m) for v in inner] + [Fraction(1)]


def random_homeo(rng: random.Random, pieces=3, bits=5, decreasing=False) -> PLMap:
    xs = _strict_increasing(rng, pieces - 1, bits)
    ys = _strict_increasing(rng, pieces - 1, bits)
    if decreasing:
        ys = [1 - y for y in ys]
    return PLMap(list(zip(xs, ys)))


def random_pl(rng: random.Random, pieces=3, bits=5) -> PLMap:
    """Any continuous PL self-map of [0, 1] (flat pieces and folds allowed)."""
    xs = _strict_increasing(rng, pieces - 1, bits)
    m = 1 << bits
    return PLMap([(x, Fraction(rng.randint(0, m), m)) for x in xs])


@st.composite
def homeos(draw, max_pieces=4):
    seed = draw(st.integers(0, 2**32 - 1))
    pieces = draw(st.integers(1, max_pieces))
    return random_homeo(random.Random(seed), pieces, decreasing=draw(st.booleans()))


@st.composite
def pl_maps(draw, max_pieces=4):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_pl(random.Random(seed), draw(st.integers(1, max_pieces)))


@st.composite
def intervals01(draw, bits=6):
    a = draw(dyadics(bits))
    b = draw(dyadics(bits))
    return Interval(min(a, b), max(a, b))


def random_family(rng: random.Random, n_max=8):
    """Seeded PL family with a known limit: vanishing bumps, moving bumps or constant offsets."""
    from pointdyn.convergence import MapFamily

    limit = random_homeo(rng, rng.randint(2, 4), 4)
    kind = rng.choice(["vanishing", "moving", "offset", "constant"])
    h = Fraction(rng.randint(1, 4), 8)

    def member(n):
        if kind == "constant":
            return limit
        if kind == "moving":
            a, b, c = Fraction(1, 2 * n + 2), Fraction(1, 2 * n + 1), Fraction(1, 2 * n)
            xs = sorted({Fraction(0), a, b, c, *(x for x, _ in limit.breakpoints), Fraction(1)})
            ys = [limit.eval(x) for x in xs]
            bump = {b: h}
            return PLMap([(x, min(Fraction(1), y + bump.get(x, 0))) for x, y in zip(xs, ys)])
        amp = h / n if kind == "vanishing" else h
        return PLMap([(x, min(Fraction(1), y + amp)) for x, y in limit.breakpoints])

    return MapFamily(f"random-{kind}", member, limit, n_max, {"kind": kind}, constant=kind == "constant")

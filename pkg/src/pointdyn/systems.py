"""Constructors for the example systems used throughout the package."""

from __future__ import annotations

from fractions import Fraction

from .maps import AffineLineMap, PLMap, PowerMap, RotationMap, identity_pl
from .metric import HighPrecisionReal, Space, hp_sqrt

# the accumulating families are cut off after this many intervals [1/(k+1), 1/k];
# below 1/(DEPTH+1) the maps are the identity
DEPTH = 512


def _ladder(choose) -> PLMap:
    pts = [(Fraction(0), Fraction(0))]
    if DEPTH:
        pts.append((Fraction(1, DEPTH + 1), Fraction(1, DEPTH + 1)))
    for k in range(DEPTH, 0, -1):
        a, b = Fraction(1, k + 1), Fraction(1, k)
        p = (a + b) / 2
        pts.append((p, choose(k, a, p, b)))
        pts.append((b, b))
    return PLMap(pts)


def ladder_f() -> PLMap:
    """Fixes every 1/k and sends each midpoint P_k to Q_k (left of P_k)."""
    return _ladder(lambda k, a, p, b: (a + p) / 2)


def ladder_g() -> PLMap:
    """As :func:`ladder_f` on odd k; on even k the midpoint goes to R_k (right of P_k)."""
    return _ladder(lambda k, a, p, b: (p + b) / 2 if k % 2 == 0 else (a + p) / 2)


def square_map() -> PowerMap:
    return PowerMap(2)


def power_map(n: int) -> PowerMap:
    return PowerMap(n)


def identity(space=Space.INTERVAL):
    if Space(space) is Space.CIRCLE:
        return RotationMap(HighPrecisionReal(Fraction(0)))
    if Space(space) is Space.LINE:
        return AffineLineMap(1, 0)
    return identity_pl(Space.INTERVAL)


def push_up(n: int) -> PLMap:
    """f_n(0)=0, f_n(y_n)=y_{n+1}, f_n(1)=1 with y_1=3/4 and y_{k+1}=(y_k+1)/2."""
    y = 1 - Fraction(1, 2 ** (n + 1))
    return PLMap([(0, 0), (y, (y + 1) / 2), (1, 1)])


def push_up_limit() -> PLMap:
    return PLMap([(0, 0), (Fraction(3, 4), Fraction(7, 8)), (1, 1)])


def flat_start(n: int) -> PLMap:
    """Identity near 0 up to 1/(n+1), then the push-up shape."""
    c = Fraction(1, n + 1)
    return PLMap([(0, 0), (c, c), (Fraction(3, 4), Fraction(7, 8)), (1, 1)])


def dented_start(n: int) -> PLMap:
    """Contracting dent on [0, 1/(n+1)] followed by the push-up shape."""
    c = Fraction(1, n + 1)
    p = c / 2
    return PLMap([(0, 0), (p, p / 2), (c, c), (Fraction(3, 4), Fraction(7, 8)), (1, 1)])


def half_square(n: int | None = None) -> PLMap:
    """f(0)=0, f(1/2)=1/4, f(1)=n/(n+1) (or 1 for the limit)."""
    top = Fraction(1) if n is None else Fraction(n, n + 1)
    return PLMap([(0, 0), (Fraction(1, 2), Fraction(1, 4)), (1, top)])


def early_ceiling(n: int) -> PLMap:
    """Rises linearly to 1 at n/(n+1) and stays there."""
    return PLMap([(0, 0), (Fraction(n, n + 1), 1), (1, 1)])


def lifted_start(n: int) -> PLMap:
    c = Fraction(1, n + 1)
    return PLMap([(0, c / 2), (c, c), (Fraction(3, 4), Fraction(7, 8)), (1, 1)])


def irrational_angle(n: int) -> HighPrecisionReal:
    """α_n = 1 − 1/(√2 (n+1)): strictly increasing irrationals tending to 1."""
    # 1/(√2 (n+1)) = √(1/(2 (n+1)²))
    r = hp_sqrt(Fraction(1, 2 * (n + 1) ** 2))
    return HighPrecisionReal(1 - r.value, r.error, True)


def irrational_rotation(n: int) -> RotationMap:
    return RotationMap(irrational_angle(n))


def inv_sqrt2() -> HighPrecisionReal:
    return hp_sqrt(Fraction(1, 2))


def convergent(n: int) -> Fraction:
    """Even-index continued-fraction convergents of 1/√2 (strictly increasing)."""
    # 1/√2 = [0; 1, 2, 2, 2, ...]
    terms = [0, 1] + [2] * (2 * n + 1)
    h0, h1 = 1, terms[0]
    k0, k1 = 0, 1
    convs = []
    for a in terms[1:]:
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        convs.append(Fraction(h1, k1))
    below = [c for c in convs if c * c < Fraction(1, 2)]
    return below[n - 1]


def rational_rotation(n: int) -> RotationMap:
    return RotationMap(HighPrecisionReal(convergent(n)))


def inv_sqrt2_rotation() -> RotationMap:
    return RotationMap(inv_sqrt2())


def scaled_line(n: int) -> AffineLineMap:
    return AffineLineMap(Fraction(1, 2 * n), 0)


def constant_line() -> AffineLineMap:
    return AffineLineMap(0, 0)


def stretched_line(n: int) -> AffineLineMap:
    return AffineLineMap(Fraction(n + 2, n + 1), 0)


def doubling_line() -> AffineLineMap:
    return AffineLineMap(2, 0)


def contraction(n: int | None = None) -> PLMap:
    """x ↦ c_n x on [0, 1] with c_n = 1/2 + 1/(n+10), limit 1/2."""
    c = Fraction(1, 2) if n is None else Fraction(1, 2) + Fraction(1, n + 10)
    return PLMap([(0, 0), (1, c)])

"""Spaces, exact rationals and the metrics used throughout the package.

Coordinates are :class:`fractions.Fraction` values.  Irrational rotation
angles are carried as :class:`HighPrecisionReal`, a dyadic rational with an
explicit absolute error bound.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError

HP_BITS = 128
HP_MAX_ERROR = Fraction(1, 2**100)


class Space(enum.Enum):
    INTERVAL = "interval"
    CIRCLE = "circle"
    LINE = "line"

    @classmethod
    def parse(cls, text: str) -> "Space":
        try:
            return cls(text)
        except ValueError:
            raise InputError(f"unknown space {text!r}") from None


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: every coordinate must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InputError(f"expected an exact rational, got {value!r}")


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise InputError(f"cannot parse rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q) -> str:
    """Canonical ``"p/q"`` form (lowest terms, q > 0, always with a slash)."""
    if isinstance(q, float):
        if math.isinf(q):
            return "inf" if q > 0 else "-inf"
        raise InputError("floating values have no canonical rational form")
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class HighPrecisionReal:
    """A real number known to within ``error`` of the dyadic ``value``."""

    value: Fraction
    error: Fraction = Fraction(0)
    irrational: bool = False

    def __post_init__(self):
        if self.error < 0:
            raise InputError("negative error bound")

    def to_hex(self) -> str:
        num = self.value.numerator
        den = self.value.denominator
        exp = den.bit_length() - 1
        if den != 1 << exp:
            raise InputError("only dyadic values have a hexadecimal form")
        sign = "-" if num < 0 else ""
        return f"{sign}0x{abs(num):x}p-{exp}"

    @classmethod
    def from_hex(cls, text: str, error=Fraction(0), irrational=False):
        m = re.match(r"^\s*(-?)0x([0-9a-fA-F]+)p-(\d+)\s*$", text)
        if not m:
            raise InputError(f"cannot parse high-precision real {text!r}")
        num = int(m.group(2), 16)
        if m.group(1):
            num = -num
        return cls(Fraction(num, 1 << int(m.group(3))), Fraction(error), irrational)

    def __float__(self):
        return float(self.value)


def hp_sqrt(q, bits: int = HP_BITS) -> HighPrecisionReal:
    """Square root of a non-negative rational, rounded down to ``bits`` fractional bits."""
    q = to_fraction(q)
    if q < 0:
        raise InputError("square root of a negative number")
    scaled = (q.numerator << (2 * bits)) // q.denominator
    root = math.isqrt(scaled)
    value = Fraction(root, 1 << bits)
    exact = value * value == q
    # floor of the scaled value plus floor of isqrt: total error < 2^-bits
    err = Fraction(0) if exact else Fraction(1, 1 << bits)
    return HighPrecisionReal(value, err, irrational=not exact and _is_nonsquare(q))


def _is_nonsquare(q: Fraction) -> bool:
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 != n or math.isqrt(d) ** 2 != d


def check_point(space: Space, x) -> Fraction:
    x = to_fraction(x)
    if space is Space.INTERVAL and not (0 <= x <= 1):
        raise InputError(f"{format_rational(x)} lies outside [0, 1]")
    if space is Space.CIRCLE and not (0 <= x < 1):
        raise InputError(f"{format_rational(x)} lies outside [0, 1)")
    return x


def distance(space: Space, x, y):
    x = check_point(space, x)
    y = check_point(space, y)
    d = abs(x - y)
    if space is Space.CIRCLE:
        return min(d, 1 - d)
    return d


def bounded_distance(space: Space, x, y):
    return min(distance(space, x, y), Fraction(1))


def wrap(x) -> Fraction:
    """Reduce a rational to the circle's fundamental domain [0, 1)."""
    return x - math.floor(x)


def circle_gap(d) -> Fraction:
    """Arc-length distance of a displacement ``d`` from 0 on the circle."""
    d = wrap(d)
    return min(d, 1 - d)

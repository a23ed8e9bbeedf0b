"""Small helpers for exact rational vectors."""

from __future__ import annotations

import math
from fractions import Fraction


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def proj0(v) -> tuple[Fraction, ...]:
    """Projection of a rational vector onto the sum-zero hyperplane."""
    v = [frac(x) for x in v]
    mean = sum(v, Fraction(0)) / len(v)
    return tuple(x - mean for x in v)


def ceil_frac(x: Fraction) -> int:
    return -((-frac(x)).__floor__())


def floor_frac(x: Fraction) -> int:
    return math.floor(frac(x))


def common_denominator(v) -> int:
    out = 1
    for x in v:
        out = out * frac(x).denominator // math.gcd(out, frac(x).denominator)
    return out


def format_fraction(x: Fraction) -> str:
    return str(frac(x))


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)

"""Monic cubic root solving and discriminant classification.

Backs the real-axis interval analysis of the degree-3 multibrot set: the
boundary point of the real cross-section is the attracting real root of
x^3 - x + c, extracted here in closed trigonometric form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Real-axis bound of the degree-3 multibrot set, 2 / (3*sqrt(3)).
MANDELBRIC_REAL_BOUND = 2.0 / (3.0 * math.sqrt(3.0))

ONE_REAL_TWO_COMPLEX = "one-real-two-complex"
THREE_REAL_ONE_DOUBLE = "three-real-one-double"
THREE_DISTINCT_REAL = "three-distinct-real"

# Relative band below which a discriminant counts as zero.
_ZERO_BAND = 1e-9

_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)  # primitive cube root of unity


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of P(x) = x^3 + b*x^2 + c*x + d."""

    b: float
    c: float
    d: float

    def __call__(self, x) -> complex:
        return ((x + self.b) * x + self.c) * x + self.d


@dataclass(frozen=True)
class RootSet:
    """Roots with multiplicities; multiplicities sum to 3."""

    kind: str
    roots: tuple[tuple[complex, int], ...]

    def real_roots(self) -> list[float]:
        return [r.real for r, mult in self.roots if r.imag == 0.0 for _ in range(mult)]


def depressed_reduce(cc: CubicCoeffs) -> tuple[float, float]:
    """Shift x = y - b/3: returns (p, q) with y^3 + p*y + q sharing the roots."""
    b, c, d = cc.b, cc.c, cc.d
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - c * b / 3.0 + d
    return p, q


def cubic_discriminant(cc: CubicCoeffs) -> float:
    """D = 4c^3 + 27d^2 + 4db^3 - b^2c^2 - 18bcd; sign classifies the roots."""
    b, c, d = cc.b, cc.c, cc.d
    return (
        4.0 * c ** 3
        + 27.0 * d * d
        + 4.0 * d * b ** 3
        - b * b * c * c
        - 18.0 * b * c * d
    )


def _cbrt(x: float) -> float:
    """Sign-preserving real cube root."""
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def cubic_roots(cc: CubicCoeffs) -> RootSet:
    """Solve P(x) = 0, classifying by the sign of the discriminant.

    D > 0: one real root plus a conjugate complex pair (real cube roots of the
    two real roots of the resolvent quadratic).  D = 0: all real, one double.
    D < 0: three distinct real roots in trigonometric form.  |D| within a
    relative band of zero is treated as D = 0.
    """
    p, q = depressed_reduce(cc)
    d_val = cubic_discriminant(cc)
    shift = -cc.b / 3.0
    band = _ZERO_BAND * max(1.0, abs(p) ** 3, q * q)

    if abs(d_val) <= band:
        t = -q / 2.0
        y = _cbrt(t)
        roots = ((complex(2.0 * y + shift), 1), (complex(-y + shift), 2))
        return RootSet(THREE_REAL_ONE_DOUBLE, roots)

    if d_val > 0.0:
        delta = d_val / 27.0
        s = math.sqrt(delta)
        # Resolvent t^2 + q*t - p^3/27: take the root free of cancellation,
        # recover the other from the product -p^3/27.
        if q >= 0.0:
            t2 = (-q - s) / 2.0
            t1 = (-(p ** 3) / 27.0) / t2
        else:
            t1 = (-q + s) / 2.0
            t2 = (-(p ** 3) / 27.0) / t1
        y1, y2 = _cbrt(t1), _cbrt(t2)
        z1 = y1 + y2
        z2 = _OMEGA * y1 + _OMEGA.conjugate() * y2
        roots = (
            (complex(z1 + shift), 1),
            (z2 + shift, 1),
            (z2.conjugate() + shift, 1),
        )
        return RootSet(ONE_REAL_TWO_COMPLEX, roots)

    # D < 0: resolvent roots are conjugate complex t, tbar with |t| = (-p/3)^(3/2).
    r13 = math.sqrt(-p / 3.0)
    theta = math.atan2(math.sqrt(-d_val / 27.0) / 2.0, -q / 2.0)
    zs = sorted(
        2.0 * r13 * math.cos((theta + 2.0 * math.pi * k) / 3.0) for k in range(3)
    )
    return RootSet(THREE_DISTINCT_REAL, tuple((complex(z + shift), 1) for z in zs))


def mandelbric_attracting_root(c: float) -> float:
    """Attracting real root a of x^3 - x + c for 0 < c <= 2/(3*sqrt(3)).

    a = (2/sqrt(3)) * cos(theta/3) with theta = arctan(sqrt(-D)/(-3c*sqrt(3))) + pi,
    which lies in (pi/2, pi], so a runs over [1/sqrt(3), 1).
    """
    if not 0.0 < c <= MANDELBRIC_REAL_BOUND:
        raise ValueError(f"c must lie in (0, {MANDELBRIC_REAL_BOUND}], got {c}")
    d_val = -4.0 + 27.0 * c * c
    s = math.sqrt(max(0.0, -d_val))
    theta = math.atan(s / (-3.0 * c * math.sqrt(3.0))) + math.pi
    return (2.0 / math.sqrt(3.0)) * math.cos(theta / 3.0)

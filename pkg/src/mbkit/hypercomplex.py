"""Arithmetic for the four number systems underlying the multibrot engines.

Tricomplex numbers form an 8-dimensional commutative ring over the reals
with basis (1, i1, i2, i3, i4, j1, j2, j3), where the i-units square to -1,
the j-units square to +1 and all products follow the unit table below.
Bicomplex numbers are the 4-dimensional subring spanned by (1, i1, i2, j1),
and hyperbolic (split-complex) numbers are the plane a + b*j with j*j = 1.

The idempotent pair decomposition splits a tricomplex number into two
bicomplex components on which addition, multiplication and powers act
componentwise; it is the workhorse behind the fast iteration engines.

All types are immutable values and every operation is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np


class UnitIndex(IntEnum):
    """Canonical basis order; fixes the coefficient layout everywhere."""

    ONE = 0
    I1 = 1
    I2 = 2
    I3 = 3
    I4 = 4
    J1 = 5
    J2 = 6
    J3 = 7

    @property
    def label(self) -> str:
        return _UNIT_LABELS[self]


_UNIT_LABELS = ("1", "i1", "i2", "i3", "i4", "j1", "j2", "j3")
_LABEL_TO_UNIT = {lbl: UnitIndex(k) for k, lbl in enumerate(_UNIT_LABELS)}


def parse_unit(text: str) -> UnitIndex:
    """Parse a unit label such as "1", "i3" or "j2"."""
    try:
        return _LABEL_TO_UNIT[text.strip()]
    except KeyError:
        raise ValueError(f"unknown unit label {text!r}") from None


# Product of two basis units as (sign, resulting unit index), row by row in
# canonical order.  This table is the normative definition of the ring; the
# recursive pair product below is kept only as an independent cross-check.
PRODUCT_TABLE: tuple[tuple[tuple[int, int], ...], ...] = (
    # 1
    ((1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7)),
    # i1
    ((1, 1), (-1, 0), (1, 5), (1, 6), (-1, 7), (-1, 2), (-1, 3), (1, 4)),
    # i2
    ((1, 2), (1, 5), (-1, 0), (1, 7), (-1, 6), (-1, 1), (1, 4), (-1, 3)),
    # i3
    ((1, 3), (1, 6), (1, 7), (-1, 0), (-1, 5), (1, 4), (-1, 1), (-1, 2)),
    # i4
    ((1, 4), (-1, 7), (-1, 6), (-1, 5), (-1, 0), (1, 3), (1, 2), (1, 1)),
    # j1
    ((1, 5), (-1, 2), (-1, 1), (1, 4), (1, 3), (1, 0), (-1, 7), (-1, 6)),
    # j2
    ((1, 6), (-1, 3), (1, 4), (-1, 1), (1, 2), (-1, 7), (1, 0), (-1, 5)),
    # j3
    ((1, 7), (1, 4), (-1, 3), (-1, 2), (1, 1), (-1, 6), (-1, 5), (1, 0)),
)

# Flat (i, j, sign, k) view of the table, the inner loop of multiplication.
_MUL_TERMS: tuple[tuple[int, int, int, int], ...] = tuple(
    (i, j, s, k)
    for i in range(8)
    for j, (s, k) in enumerate(PRODUCT_TABLE[i])
)


def unit_product(a: UnitIndex, b: UnitIndex) -> tuple[int, UnitIndex]:
    """Product of two basis units as (sign, unit)."""
    s, k = PRODUCT_TABLE[a][b]
    return s, UnitIndex(k)


@dataclass(frozen=True)
class Tricomplex:
    """Tricomplex number as 8 real coefficients in canonical basis order."""

    x: tuple[float, float, float, float, float, float, float, float]

    def __post_init__(self):
        if len(self.x) != 8:
            raise ValueError(f"need 8 coefficients, got {len(self.x)}")
        if any(type(v) is not float for v in self.x):
            object.__setattr__(self, "x", tuple(float(v) for v in self.x))

    @staticmethod
    def from_coeffs(coeffs: Iterable[float]) -> "Tricomplex":
        return Tricomplex(tuple(coeffs))

    @staticmethod
    def zero() -> "Tricomplex":
        return _ZERO

    @staticmethod
    def one() -> "Tricomplex":
        return _ONE

    @staticmethod
    def unit(u: UnitIndex) -> "Tricomplex":
        c = [0.0] * 8
        c[u] = 1.0
        return Tricomplex(tuple(c))

    @staticmethod
    def real(v: float) -> "Tricomplex":
        return Tricomplex((float(v), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))

    def __add__(self, other: "Tricomplex") -> "Tricomplex":
        a, b = self.x, other.x
        return Tricomplex(tuple(a[k] + b[k] for k in range(8)))

    def __sub__(self, other: "Tricomplex") -> "Tricomplex":
        a, b = self.x, other.x
        return Tricomplex(tuple(a[k] - b[k] for k in range(8)))

    def __neg__(self) -> "Tricomplex":
        return Tricomplex(tuple(-v for v in self.x))

    def __mul__(self, other):
        if isinstance(other, Tricomplex):
            return tc_mul(self, other)
        if isinstance(other, (int, float)):
            return Tricomplex(tuple(v * other for v in self.x))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "Tricomplex":
        return tc_pow(self, m)

    def norm(self) -> float:
        return norm3(self)

    def to_text(self) -> str:
        """8 whitespace-separated decimals in canonical order."""
        return " ".join(repr(v) for v in self.x)

    @staticmethod
    def from_text(text: str) -> "Tricomplex":
        return Tricomplex.from_coeffs(float(tok) for tok in text.split())

    def __str__(self) -> str:
        terms = [f"{v:g}*{_UNIT_LABELS[k]}" for k, v in enumerate(self.x) if v != 0.0]
        return " + ".join(terms) if terms else "0"


_ZERO = Tricomplex((0.0,) * 8)
_ONE = Tricomplex((1.0,) + (0.0,) * 7)


def tc_add(a: Tricomplex, b: Tricomplex) -> Tricomplex:
    """Componentwise sum in the 8-coefficient basis."""
    return a + b


def tc_mul(a: Tricomplex, b: Tricomplex) -> Tricomplex:
    """Product via the 8x8 unit table; commutative, distributes over +."""
    xa, xb = a.x, b.x
    out = [0.0] * 8
    for i, j, s, k in _MUL_TERMS:
        out[k] += s * xa[i] * xb[j]
    return Tricomplex(tuple(out))


def tc_pow(a: Tricomplex, m: int) -> Tricomplex:
    """m-fold product, m >= 0, evaluated as a left-to-right chain."""
    if m < 0:
        raise ValueError("exponent must be nonnegative")
    if m == 0:
        return _ONE
    r = a
    for _ in range(m - 1):
        r = tc_mul(r, a)
    return r


def _mul_recursive(a: Tricomplex, b: Tricomplex) -> Tricomplex:
    """Pair-form product (zeta1*zeta3 - zeta2*zeta4) + (zeta1*zeta4 + zeta2*zeta3)*i3.

    Independent oracle for tc_mul: multiplies through the bicomplex pair
    representation instead of the flat table.
    """
    a1, a2 = split_pair(a)
    b1, b2 = split_pair(b)
    return join_pair(a1 * b1 - a2 * b2, a1 * b2 + a2 * b1)


@dataclass(frozen=True)
class Bicomplex:
    """Bicomplex number as 4 real coefficients on (1, i1, i2, j1)."""

    z: tuple[float, float, float, float]

    def __post_init__(self):
        if len(self.z) != 4:
            raise ValueError(f"need 4 coefficients, got {len(self.z)}")
        if any(type(v) is not float for v in self.z):
            object.__setattr__(self, "z", tuple(float(v) for v in self.z))

    @staticmethod
    def from_coeffs(coeffs: Iterable[float]) -> "Bicomplex":
        return Bicomplex(tuple(coeffs))

    @staticmethod
    def zero() -> "Bicomplex":
        return Bicomplex((0.0, 0.0, 0.0, 0.0))

    @staticmethod
    def real(v: float) -> "Bicomplex":
        return Bicomplex((float(v), 0.0, 0.0, 0.0))

    @staticmethod
    def from_complex_pair(z1: complex, z2: complex) -> "Bicomplex":
        return Bicomplex((z1.real, z1.imag, z2.real, z2.imag))

    def complex_pair(self) -> tuple[complex, complex]:
        a, b, c, d = self.z
        return complex(a, b), complex(c, d)

    def __add__(self, other: "Bicomplex") -> "Bicomplex":
        a, b = self.z, other.z
        return Bicomplex((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    def __sub__(self, other: "Bicomplex") -> "Bicomplex":
        a, b = self.z, other.z
        return Bicomplex((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __neg__(self) -> "Bicomplex":
        return Bicomplex(tuple(-v for v in self.z))

    def __mul__(self, other):
        if isinstance(other, Bicomplex):
            z1, z2 = self.complex_pair()
            z3, z4 = other.complex_pair()
            return Bicomplex.from_complex_pair(z1 * z3 - z2 * z4, z1 * z4 + z2 * z3)
        if isinstance(other, (int, float)):
            return Bicomplex(tuple(v * other for v in self.z))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "Bicomplex":
        if m < 0:
            raise ValueError("exponent must be nonnegative")
        if m == 0:
            return Bicomplex((1.0, 0.0, 0.0, 0.0))
        r = self
        for _ in range(m - 1):
            r = r * self
        return r

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def norm_sq(self) -> float:
        a, b, c, d = self.z
        return a * a + b * b + c * c + d * d

    def to_tricomplex(self) -> Tricomplex:
        a, b, c, d = self.z
        return Tricomplex((a, b, c, 0.0, 0.0, d, 0.0, 0.0))


def split_pair(t: Tricomplex) -> tuple[Bicomplex, Bicomplex]:
    """Write eta = zeta1 + zeta2*i3 and return (zeta1, zeta2)."""
    x = t.x
    return Bicomplex((x[0], x[1], x[2], x[5])), Bicomplex((x[3], x[6], x[7], x[4]))


def join_pair(z1: Bicomplex, z2: Bicomplex) -> Tricomplex:
    """Inverse of split_pair."""
    a = z1.z
    b = z2.z
    return Tricomplex((a[0], a[1], a[2], b[0], b[3], a[3], b[1], b[2]))


@dataclass(frozen=True)
class IdempotentPair:
    """Bicomplex components of a tricomplex number w.r.t. (1 +- j3)/2."""

    u1: Bicomplex
    u2: Bicomplex


def to_idempotent(t: Tricomplex) -> IdempotentPair:
    """Components (zeta1 - zeta2*i2, zeta1 + zeta2*i2) for eta = zeta1 + zeta2*i3."""
    x = t.x
    u1 = Bicomplex((x[0] + x[7], x[1] + x[4], x[2] - x[3], x[5] - x[6]))
    u2 = Bicomplex((x[0] - x[7], x[1] - x[4], x[2] + x[3], x[5] + x[6]))
    return IdempotentPair(u1, u2)


def from_idempotent(p: IdempotentPair) -> Tricomplex:
    """Exact inverse of to_idempotent."""
    a = p.u1.z
    b = p.u2.z
    return Tricomplex(
        (
            (a[0] + b[0]) / 2,
            (a[1] + b[1]) / 2,
            (a[2] + b[2]) / 2,
            (b[2] - a[2]) / 2,
            (a[1] - b[1]) / 2,
            (a[3] + b[3]) / 2,
            (b[3] - a[3]) / 2,
            (a[0] - b[0]) / 2,
        )
    )


def norm3(t: Tricomplex) -> float:
    """Euclidean norm of the 8 coefficients."""
    return math.sqrt(sum(v * v for v in t.x))


@dataclass(frozen=True)
class Discus:
    """Bidisc-like region: bounds r1, r2 on the two idempotent component norms."""

    center: Tricomplex
    r1: float
    r2: float

    def __post_init__(self):
        if not (self.r2 >= self.r1 > 0.0):
            raise ValueError("discus radii must satisfy r2 >= r1 > 0")


def in_discus(eta: Tricomplex, d: Discus, closed: bool = True) -> bool:
    """Membership via idempotent component norms against (r1, r2)."""
    pe = to_idempotent(eta)
    pc = to_idempotent(d.center)
    n1 = (pe.u1 - pc.u1).norm()
    n2 = (pe.u2 - pc.u2).norm()
    if closed:
        return n1 <= d.r1 and n2 <= d.r2
    return n1 < d.r1 and n2 < d.r2


@dataclass(frozen=True)
class Hyperbolic:
    """Hyperbolic (duplex) number u + v*j with j*j = 1, stored as (u, v)."""

    u: float
    v: float

    def vector(self) -> tuple[float, float]:
        return (self.u, self.v)

    def __add__(self, other: "Hyperbolic") -> "Hyperbolic":
        return Hyperbolic(self.u + other.u, self.v + other.v)

    def __neg__(self) -> "Hyperbolic":
        return Hyperbolic(-self.u, -self.v)

    def __mul__(self, other):
        if isinstance(other, Hyperbolic):
            return hyp_diamond(self, other)
        return NotImplemented

    def to_tricomplex(self, j_unit: UnitIndex = UnitIndex.J1) -> Tricomplex:
        if j_unit not in (UnitIndex.J1, UnitIndex.J2, UnitIndex.J3):
            raise ValueError("j_unit must be one of j1, j2, j3")
        c = [0.0] * 8
        c[UnitIndex.ONE] = self.u
        c[j_unit] = self.v
        return Tricomplex(tuple(c))


def hyp_diamond(a: Hyperbolic, b: Hyperbolic) -> Hyperbolic:
    """Hyperbolic product: (u,v) diamond (x,y) = (ux + vy, vx + uy)."""
    return Hyperbolic(a.u * b.u + a.v * b.v, a.v * b.u + a.u * b.v)


def hyp_star(a: Hyperbolic, b: Hyperbolic) -> Hyperbolic:
    """Componentwise product: (u,v) star (x,y) = (ux, vy)."""
    return Hyperbolic(a.u * b.u, a.v * b.v)


def hyp_T(a: Hyperbolic) -> tuple[float, float]:
    """The ring isomorphism (+, diamond) -> (+, star): (u, v) -> (u - v, u + v)."""
    return (a.u - a.v, a.u + a.v)


def hyp_pow(a: Hyperbolic, m: int) -> Hyperbolic:
    if m < 0:
        raise ValueError("exponent must be nonnegative")
    if m == 0:
        return Hyperbolic(1.0, 0.0)
    r = a
    for _ in range(m - 1):
        r = hyp_diamond(r, a)
    return r


# --- span structure of unit triples -----------------------------------------

CLOSED_SUBALGEBRA = "closed-subalgebra"
ODD_POWER_CLOSED = "odd-power-closed"


def span_closure_kind(units: Sequence[UnitIndex]) -> str:
    """How products behave on the span of three distinct units.

    CLOSED_SUBALGEBRA: the span of {1} and the units, together with the missing
    pairwise product, is closed under multiplication (one unit is 1 or some
    pairwise product is +-the third unit).  ODD_POWER_CLOSED: only odd powers
    stay inside the 4-dimensional span with the triple product appended.
    """
    us = _distinct_units(units)
    if UnitIndex.ONE in us:
        return CLOSED_SUBALGEBRA
    for a in range(3):
        for b in range(a + 1, 3):
            _, k = unit_product(us[a], us[b])
            if k == us[3 - a - b]:
                return CLOSED_SUBALGEBRA
    return ODD_POWER_CLOSED


def iteration_span_units(units: Sequence[UnitIndex]) -> tuple[UnitIndex, ...]:
    """The 4 basis units spanning every odd power of the 3-unit span.

    The fourth unit is the (sign-stripped) product of the three; when one of
    the units is 1 this is the product of the other two and the span is a
    closed subalgebra.
    """
    us = _distinct_units(units)
    s, k = unit_product(us[0], us[1])
    s2, k2 = unit_product(k, us[2])
    fourth = k2
    if fourth in us:
        raise ValueError(f"degenerate unit triple {us}")
    return tuple(sorted((*us, fourth)))


def _distinct_units(units: Sequence[UnitIndex]) -> tuple[UnitIndex, UnitIndex, UnitIndex]:
    us = tuple(UnitIndex(u) for u in units)
    if len(us) != 3 or len(set(us)) != 3:
        raise ValueError(f"need three distinct units, got {units!r}")
    return us


# --- vectorized batch helpers -------------------------------------------------
#
# Batches are (8, n) float arrays of coefficients in canonical order.  These
# back the grid engines and the bulk verification sweeps.


def as_batch(values: Iterable[Tricomplex]) -> np.ndarray:
    vs = list(values)
    out = np.empty((8, len(vs)), dtype=np.float64)
    for i, t in enumerate(vs):
        out[:, i] = t.x
    return out


def batch_to_tricomplex(batch: np.ndarray, i: int) -> Tricomplex:
    return Tricomplex(tuple(float(v) for v in batch[:, i]))


def mul_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise tricomplex product of two (8, n) coefficient batches."""
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.float64)
    for i, j, s, k in _MUL_TERMS:
        if s > 0:
            out[k] += a[i] * b[j]
        else:
            out[k] -= a[i] * b[j]
    return out


def pow_batch(a: np.ndarray, m: int) -> np.ndarray:
    if m < 0:
        raise ValueError("exponent must be nonnegative")
    if m == 0:
        out = np.zeros_like(a)
        out[0] = 1.0
        return out
    r = a
    for _ in range(m - 1):
        r = mul_batch(r, a)
    return r


def norm_sq_batch(a: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->j", a, a)


def to_complex4(batch: np.ndarray) -> np.ndarray:
    """(8, n) coefficients -> (4, n) complex idempotent-of-idempotent components.

    The tricomplex ring splits into two bicomplex components, each of which
    splits into two complex ones; multiplication is componentwise on the
    result and the squared ring norm is the mean of the 4 squared moduli.
    """
    x = batch
    re1 = (x[0] + x[7]) + (x[5] - x[6])
    im1 = (x[1] + x[4]) - (x[2] - x[3])
    re2 = (x[0] + x[7]) - (x[5] - x[6])
    im2 = (x[1] + x[4]) + (x[2] - x[3])
    re3 = (x[0] - x[7]) + (x[5] + x[6])
    im3 = (x[1] - x[4]) - (x[2] + x[3])
    re4 = (x[0] - x[7]) - (x[5] + x[6])
    im4 = (x[1] - x[4]) + (x[2] + x[3])
    out = np.empty((4,) + x.shape[1:], dtype=np.complex128)
    out[0] = re1 + 1j * im1
    out[1] = re2 + 1j * im2
    out[2] = re3 + 1j * im3
    out[3] = re4 + 1j * im4
    return out

"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Elements are stored as integer numerators over the power basis
``1, zeta, ..., zeta^(phi(M)-1)`` (reduced modulo the M-th cyclotomic
polynomial) together with one positive common denominator.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, isqrt
from typing import TYPE_CHECKING, Union

import numpy as np

from ._linalg import lcm

if TYPE_CHECKING:
    from .lattice import Lattice

__all__ = [
    "CycloNum", "cyclo_root", "e_frac", "cyclotomic_poly", "sqrt_positive_integer",
    "gauss_sum_chi", "milgram_check", "chi_float", "rational_reconstruct",
    "FloatReconstructionError",
]

Rational = Union[int, Fraction]


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_div_exact(a: list[int], b: list[int]) -> list[int]:
    """Exact division by a monic polynomial (coefficients low to high)."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    assert not any(a), "inexact polynomial division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Coefficients (low to high) of Phi_M via prod (x^d - 1)^mu(M/d)."""
    num, den = [1], [1]
    for d in range(1, M + 1):
        if M % d:
            continue
        mu = _mobius(M // d)
        if mu == 0:
            continue
        f = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _poly_mul(num, f)
        else:
            den = _poly_mul(den, f)
    return tuple(_poly_div_exact(num, den))


class _Field:
    """Reduction tables for Q(zeta_M); built once per modulus."""

    def __init__(self, M: int):
        self.M = M
        poly = cyclotomic_poly(M)
        phi = len(poly) - 1
        self.phi = phi
        # rows: x^a reduced, for a in [0, max(M, 2 phi - 1))
        top = max(M, 2 * phi - 1)
        rows = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(top):
            rows.append(tuple(cur))
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                cur = [c - lead * p for c, p in zip(cur, poly[:-1])]
        self.powers = rows
        self.powers_arr = np.array(rows, dtype=object).reshape(top, phi)
        self.high = self.powers_arr[phi:2 * phi - 1]
        self.conj_arr = np.array([rows[(-j) % M] for j in range(phi)], dtype=object).reshape(phi, phi)

    def reduce(self, conv: np.ndarray) -> np.ndarray:
        phi = self.phi
        if len(conv) <= phi:
            out = np.zeros(phi, dtype=object)
            out[:len(conv)] = conv
            return out
        return conv[:phi] + conv[phi:].dot(self.high[:len(conv) - phi])


@lru_cache(maxsize=None)
def _field(M: int) -> _Field:
    return _Field(M)


@lru_cache(maxsize=None)
def _embedding(m: int, M: int) -> np.ndarray:
    """Matrix sending power-basis coordinates of Q(zeta_m) into Q(zeta_M)."""
    f = _field(M)
    step = M // m
    phi_m = _field(m).phi
    return np.array([f.powers[(j * step) % M] for j in range(phi_m)], dtype=object).reshape(phi_m, f.phi)


class CycloNum:
    """An element of Q(zeta_M)."""

    __slots__ = ("M", "num", "den")

    def __init__(self, M: int, num, den: int = 1):
        num = [int(x) for x in num]
        g = reduce(gcd, num, den)
        if den < 0:
            g = -g
        if g not in (0, 1):
            num = [x // g for x in num]
            den //= g
        if not any(num):
            den = 1
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("CycloNum is immutable")

    # construction helpers
    @classmethod
    def rational(cls, x: Rational, M: int = 1) -> "CycloNum":
        x = Fraction(x)
        phi = _field(M).phi
        return cls(M, [x.numerator] + [0] * (phi - 1), x.denominator)

    @classmethod
    def from_coeffs(cls, M: int, coeffs) -> "CycloNum":
        fr = [Fraction(c) for c in coeffs]
        d = lcm(*(c.denominator for c in fr)) if fr else 1
        return cls(M, [c.numerator * (d // c.denominator) for c in fr], d)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    def coerce(self, M: int) -> "CycloNum":
        if M == self.M:
            return self
        if M % self.M:
            raise ValueError(f"Q(zeta_{self.M}) is not contained in Q(zeta_{M})")
        vec = np.array(self.num, dtype=object).dot(_embedding(self.M, M))
        return CycloNum(M, vec, self.den)

    def _common(self, other) -> tuple["CycloNum", "CycloNum"]:
        if not isinstance(other, CycloNum):
            other = CycloNum.rational(other, self.M)
        M = lcm(self.M, other.M)
        return self.coerce(M), other.coerce(M)

    # arithmetic
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            num = [x * other.denominator for x in self.num]
            num[0] += other.numerator * self.den
            return CycloNum(self.M, num, self.den * other.denominator)
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self._common(other)
        return CycloNum(a.M, [x * b.den + y * a.den for x, y in zip(a.num, b.num)], a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.M, [-x for x in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycloNum(self.M, [x * other.numerator for x in self.num], self.den * other.denominator)
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self._common(other)
        f = _field(a.M)
        conv = np.convolve(np.array(a.num, dtype=object), np.array(b.num, dtype=object))
        return CycloNum(a.M, f.reduce(conv), a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / other)
        if isinstance(other, CycloNum):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNum.rational(1, self.M)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "CycloNum":
        """Multiplicative inverse by solving the multiplication-by-self system."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycloNum.rational(1 / self.to_rational(), self.M)
        f = _field(self.M)
        phi = f.phi
        # column j = self * zeta^j
        cols = []
        for j in range(phi):
            basis = [0] * phi
            basis[j] = 1
            cols.append((self * CycloNum(self.M, basis)).coeffs)
        m = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        for c in range(phi):
            piv = next(r for r in range(c, phi) if m[r][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [x * inv for x in m[c]]
            for r in range(phi):
                if r != c and m[r][c]:
                    fac = m[r][c]
                    m[r] = [x - fac * y for x, y in zip(m[r], m[c])]
        return CycloNum.from_coeffs(self.M, [m[i][phi] for i in range(phi)])

    def conj(self) -> "CycloNum":
        f = _field(self.M)
        return CycloNum(self.M, np.array(self.num, dtype=object).dot(f.conj_arr), self.den)

    def real_part(self) -> "CycloNum":
        return (self + self.conj()) * Fraction(1, 2)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.num[0], self.den)

    def to_complex(self) -> complex:
        M = self.M
        return sum(x * cmath.exp(2j * cmath.pi * k / M) for k, x in enumerate(self.num) if x) / self.den

    def content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        g = reduce(gcd, self.num, 0)
        return Fraction(g, self.den) if g else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_rational() == other
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = self._common(other)
        return a.num == b.num and a.den == b.den

    __hash__ = None  # equal numbers may live in different fields

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycloNum({self.to_rational()})"
        terms = [f"{Fraction(x, self.den)}*z^{k}" for k, x in enumerate(self.num) if x]
        return f"CycloNum[M={self.M}]({' + '.join(terms)})"

    def to_json(self) -> dict:
        return {"M": self.M, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloNum":
        return cls.from_coeffs(int(obj["M"]), [Fraction(c) for c in obj["coeffs"]])


def cyclo_root(M: int, a: int) -> CycloNum:
    """``e_M(a) = exp(2 pi i a / M)`` in the smallest field Q(zeta_{M/g})."""
    if M < 1:
        raise ValueError("M must be positive")
    a %= M
    g = gcd(a, M) if a else M
    M, a = M // g, a // g
    f = _field(M)
    return CycloNum(M, f.powers[a])


def e_frac(x: Rational) -> CycloNum:
    """``e(x) = exp(2 pi i x)`` for rational x."""
    x = Fraction(x)
    return cyclo_root(x.denominator, x.numerator)


def _squarefree_split(d: int) -> tuple[int, int]:
    c, d0 = 1, d
    p = 2
    while p * p <= d0:
        while d0 % (p * p) == 0:
            d0 //= p * p
            c *= p
        p += 1
    return c, d0


@lru_cache(maxsize=None)
def sqrt_positive_integer(d: int) -> CycloNum:
    """Positive square root of ``d`` via a quadratic Gauss sum.

    With ``d = c^2 d0`` and ``d0`` squarefree,
    ``sum_{a mod 4 d0} e(a^2 / 4 d0) = (1 + i) sqrt(4 d0)``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    c, d0 = _squarefree_split(d)
    if d0 == 1:
        return CycloNum.rational(c)
    m = 4 * d0
    f = _field(m)
    acc = np.zeros(f.phi, dtype=object)
    for a in range(m):
        acc = acc + f.powers_arr[(a * a) % m]
    g = CycloNum(m, acc)
    one_minus_i = 1 - cyclo_root(4, 1)
    s = g * one_minus_i * Fraction(c, 4)
    assert s * s == d and s.to_complex().real > 0
    return s


def gauss_sum_chi(L: "Lattice", t: int) -> CycloNum:
    """``chi_L(t) = det^{-1/2} sum_{x in sh L / L} e(t beta(x))``."""
    det = L.det
    total = CycloNum.rational(0)
    for c in L.shadow:
        total = total + e_frac(t * c.beta_mod1)
    return total * sqrt_positive_integer(det) * Fraction(1, det)


def milgram_check(L: "Lattice") -> bool:
    return gauss_sum_chi(L, 1) == cyclo_root(8, L.rank)


# --- floating point backend ------------------------------------------------

class FloatReconstructionError(ArithmeticError):
    pass


def chi_float(L: "Lattice", t: int) -> complex:
    total = sum(cmath.exp(2j * cmath.pi * float(t * c.beta_mod1)) for c in L.shadow)
    return total / L.det ** 0.5


def rational_reconstruct(x: float, bound: int, tol: float = 1e-9) -> Fraction:
    """Nearest rational with denominator at most ``bound``; must lie within ``tol``."""
    q = Fraction(x).limit_denominator(bound)
    if abs(float(q) - x) > tol:
        raise FloatReconstructionError(f"{x!r} is not within {tol} of a rational with denominator <= {bound}")
    return q


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n

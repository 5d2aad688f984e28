"""Truncated q-expansions: one-variable series and Jacobi forms of lattice index.

A ``QSeries`` stores ``{exponent: coefficient}`` with rational exponents and an
exactness bound ``prec``: every term with exponent ``<= prec`` is known.
A ``JacobiQExp`` stores ``{(n, r*d): c(n, r)}`` where ``d`` is the shadow
denominator of the index, so keys are hashable integer tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _linalg as la
from ._kernels import count_norms, enumerate_points
from .lattice import (Lattice, LatticeError, direct_sum, make_lattice, named_lattice,
                      rescale)

__all__ = [
    "QSeries", "QSeries24", "JacobiQExp", "ModuleMismatch", "NotIsometric", "NotLInvariant",
    "series_eta_pow", "series_E", "theta_series", "jacobi_mul", "jacobi_tensor",
    "jacobi_scalar_mul", "pullback", "theta_decompose", "reconstruct", "delta_operator",
    "verify_holomorphic", "nullwert", "check_L_invariance", "theta_nullwert",
    "named_form", "named_forms", "catalog_names", "catalog_forms_for", "CATALOG",
    "explicit_eis4_A2_8", "E8_MODEL_BASIS", "e8_model_lattice",
]

Rational = int | Fraction


class ModuleMismatch(ValueError):
    pass


class NotIsometric(ValueError):
    pass


class NotLInvariant(ValueError):
    pass


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _add_w(a, b):
    return None if a is None or b is None else a + b


# --- one-variable series ------------------------------------------------------

class QSeries:
    """Exact truncated series ``sum c_e q^e`` with rational exponents."""

    __slots__ = ("coeffs", "prec", "weight", "char")

    def __init__(self, coeffs: Mapping, prec, weight=None, char: int | None = None):
        p = _q(prec)
        self.coeffs: dict[Fraction, Rational] = {
            _q(e): _norm(c) for e, c in coeffs.items() if c != 0 and _q(e) <= p}
        self.prec = p
        self.weight = None if weight is None else _q(weight)
        self.char = None if char is None else char % 24

    @classmethod
    def from_list(cls, coeffs: Sequence, shift=0, step=1, prec=None, **kw) -> "QSeries":
        shift, step = _q(shift), _q(step)
        if prec is None:
            prec = shift + step * (len(coeffs) - 1)
        return cls({shift + i * step: c for i, c in enumerate(coeffs)}, prec, **kw)

    @classmethod
    def one(cls, prec) -> "QSeries":
        return cls({Fraction(0): 1}, prec, 0, 0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def valuation(self) -> Fraction:
        """Smallest exponent with a nonzero coefficient; ``prec`` if none is known."""
        return min(self.coeffs) if self.coeffs else self.prec

    def coefficient(self, e) -> Rational:
        e = _q(e)
        if e > self.prec:
            raise ValueError(f"exponent {e} beyond precision {self.prec}")
        return self.coeffs.get(e, 0)

    __getitem__ = coefficient

    @property
    def offset(self) -> int | None:
        """``g`` with all exponents in ``g/24 + Z``, when that holds."""
        gs = {(24 * e) % 24 for e in self.coeffs}
        if len(gs) == 1:
            g = gs.pop()
            return int(g) if g.denominator == 1 else None
        if not gs and self.char is not None:
            return self.char
        return None

    def truncate(self, N) -> "QSeries":
        return QSeries(self.coeffs, min(self.prec, _q(N)), self.weight, self.char)

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        return QSeries({Fraction(0): _q(other)}, self.prec, 0, 0)

    def __add__(self, other) -> "QSeries":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        w = self.weight if self.weight == other.weight else None
        ch = self.char if self.char == other.char else None
        return QSeries(out, min(self.prec, other.prec), w, ch)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self.coeffs.items()}, self.prec, self.weight, self.char)

    def __sub__(self, other) -> "QSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            c = _q(other)
            return QSeries({e: v * c for e, v in self.coeffs.items()}, self.prec,
                           self.weight, self.char)
        prec = min(self.prec + other.valuation(), other.prec + self.valuation())
        a = sorted(self.coeffs.items())
        b = sorted(other.coeffs.items())
        out: dict[Fraction, Rational] = {}
        for e1, c1 in a:
            for e2, c2 in b:
                e = e1 + e2
                if e > prec:
                    break
                out[e] = out.get(e, 0) + c1 * c2
        return QSeries(out, prec, _add_w(self.weight, other.weight),
                       _add_w(self.char, other.char))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return self * other.inverse()
        return self * (Fraction(1) / _q(other))

    def _grid(self) -> tuple[Fraction, Fraction]:
        v = self.valuation()
        den = 1
        for e in self.coeffs:
            den = la.lcm(den, (e - v).denominator)
        return v, Fraction(1, den)

    def inverse(self) -> "QSeries":
        if not self.coeffs:
            raise ZeroDivisionError("series is zero to its precision")
        v, step = self._grid()
        K = int((self.prec - v) / step)
        a = [self.coeffs.get(v + i * step, 0) for i in range(K + 1)]
        a0 = Fraction(1) / _q(a[0])
        b: list[Rational] = [a0]
        for i in range(1, K + 1):
            s = sum(a[j] * b[i - j] for j in range(1, i + 1) if a[j])
            b.append(-a0 * s)
        w = None if self.weight is None else -self.weight
        ch = None if self.char is None else -self.char
        return QSeries({-v + i * step: c for i, c in enumerate(b)}, -v + K * step, w, ch)

    def __pow__(self, m: int) -> "QSeries":
        m = int(m)
        if m < 0:
            return self.inverse() ** (-m)
        out = QSeries({Fraction(0): 1}, self.prec - self.valuation(), 0, 0)
        base = self
        while m:
            if m & 1:
                out = out * base
            m >>= 1
            if m:
                base = base * base
        return out

    def q_deriv(self) -> "QSeries":
        w = None if self.weight is None else self.weight + 2
        return QSeries({e: e * c for e, c in self.coeffs.items()}, self.prec, w, self.char)

    def equals(self, other, prec=None) -> bool:
        """Coefficientwise equality up to the common (or a given) precision."""
        other = self._coerce(other)
        p = min(self.prec, other.prec)
        if prec is not None:
            p = min(p, _q(prec))
        keys = {e for e in self.coeffs if e <= p} | {e for e in other.coeffs if e <= p}
        return all(self.coeffs.get(e, 0) == other.coeffs.get(e, 0) for e in keys)

    def __eq__(self, other) -> bool:
        if isinstance(other, (QSeries, int, Fraction)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def items(self) -> list[tuple[Fraction, Rational]]:
        return sorted(self.coeffs.items())

    def __repr__(self) -> str:
        terms = []
        for e, c in self.items()[:8]:
            terms.append(f"{c}*q^({e})" if e else f"{c}")
        more = " + ..." if len(self.coeffs) > 8 else ""
        return f"QSeries({' + '.join(terms) or '0'}{more}; prec={self.prec})"

    def to_json(self) -> dict:
        return {"prec": str(self.prec),
                "coeffs": [[str(e), str(c)] for e, c in self.items()]}


QSeries24 = QSeries


def _pentagonal(M: int) -> list[int]:
    """Coefficients of prod (1 - q^n) up to q^M."""
    out = [0] * (M + 1)
    k = 0
    while True:
        hit = False
        for j in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2) if k else (0,):
            if j <= M:
                out[j] = -1 if k % 2 else 1
                hit = True
        if not hit and k:
            break
        k += 1
    return out


def _ipow_list(a: list[int], m: int, M: int) -> list[int]:
    out = np.zeros(M + 1, dtype=object)
    out[0] = 1
    base = np.array(a[:M + 1], dtype=object)
    while m:
        if m & 1:
            out = np.convolve(out, base)[:M + 1]
        m >>= 1
        if m:
            base = np.convolve(base, base)[:M + 1]
    return [int(x) for x in out]


def _partitions(M: int) -> list[int]:
    p = [1] + [0] * M
    for n in range(1, M + 1):
        s, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            s += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                s += sign * p[n - g2]
            k += 1
        p[n] = s
    return p


@lru_cache(maxsize=256)
def _eta_pow_cached(l: int, N: Fraction) -> QSeries:
    shift = Fraction(l, 24)
    M = int((N - shift) // 1) if N >= shift else -1
    if M < 0:
        return QSeries({}, N, Fraction(l, 2), l)
    base = _pentagonal(M) if l >= 0 else _partitions(M)
    coeffs = _ipow_list(base, abs(l), M)
    return QSeries.from_list(coeffs, shift=shift, prec=N, weight=Fraction(l, 2), char=l)


def series_eta_pow(l: int, N) -> QSeries:
    """``eta^l`` with every exponent ``<= N`` exact."""
    return _eta_pow_cached(int(l), _q(N))


def _sigma(m: int, p: int) -> int:
    return sum(d ** p for d in range(1, m + 1) if m % d == 0)


_E_CONST = {2: -24, 4: 240, 6: -504}


@lru_cache(maxsize=64)
def _series_E_cached(k: int, N: Fraction) -> QSeries:
    c = _E_CONST[k]
    M = int(N // 1)
    coeffs = [1] + [c * _sigma(m, k - 1) for m in range(1, M + 1)]
    return QSeries.from_list(coeffs, prec=N, weight=k, char=0)


def series_E(k: int, N) -> QSeries:
    """Eisenstein series ``E_2``, ``E_4``, ``E_6`` (constant term 1)."""
    if k not in _E_CONST:
        raise ValueError("k must be 2, 4 or 6")
    return _series_E_cached(k, _q(N))


# --- Jacobi forms ---------------------------------------------------------------

Key = tuple[Fraction, tuple[int, ...]]


class JacobiQExp:
    """Fourier expansion ``sum c(n, r) q^n e(beta(r, z))`` of lattice index."""

    __slots__ = ("index", "k", "h", "coeffs", "prec", "weak", "d_min", "denom")

    def __init__(self, index: Lattice, coeffs: Mapping[Key, Rational], prec, k=None,
                 h: int | None = None, weak: bool = False, d_min=None):
        self.index = index
        self.denom = index.shadow_denominator
        self.prec = _q(prec)
        self.coeffs: dict[Key, Rational] = {
            key: _norm(c) for key, c in coeffs.items() if c != 0 and key[0] <= self.prec}
        self.k = None if k is None else _q(k)
        self.h = None if h is None else h % 24
        self.weak = weak
        if weak and d_min is None and self.coeffs:
            d_min = min(self.D(key) for key in self.coeffs)
        self.d_min = None if d_min is None else _q(d_min)

    def r_vector(self, rint: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.denom) for x in rint)

    def beta_int(self, rint: Sequence[int]) -> Fraction:
        G = self.index.gram
        n = len(rint)
        s = 0
        for i in range(n):
            if rint[i]:
                row = G[i]
                s += rint[i] * sum(row[j] * rint[j] for j in range(n))
        return Fraction(s, 2 * self.denom * self.denom)

    def D(self, key: Key) -> Fraction:
        return key[0] - self.beta_int(key[1])

    def coefficient(self, n, r: Sequence) -> Rational:
        n = _q(n)
        if n > self.prec:
            raise ValueError(f"n = {n} beyond precision {self.prec}")
        rint = []
        for x in r:
            y = _q(x) * self.denom
            if y.denominator != 1:
                return 0
            rint.append(int(y))
        return self.coeffs.get((n, tuple(rint)), 0)

    def coefficient_dual(self, n, v: Sequence) -> Rational:
        """Coefficient at ``q^n zeta^v`` where ``v = r G`` is the exponent vector of ``e(z)``."""
        r = la.vecmat([_q(x) for x in v], la.inverse(self.index.gram))
        return self.coefficient(n, r)

    def keys(self) -> list[Key]:
        return sorted(self.coeffs)

    def min_n(self) -> Fraction:
        return min(k[0] for k in self.coeffs) if self.coeffs else self.prec

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_same(self, other: "JacobiQExp") -> None:
        if self.index != other.index:
            raise ModuleMismatch("index lattices differ")

    def __add__(self, other: "JacobiQExp") -> "JacobiQExp":
        self._check_same(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        k = self.k if self.k == other.k else None
        h = self.h if self.h == other.h else None
        return JacobiQExp(self.index, out, min(self.prec, other.prec), k, h,
                          self.weak or other.weak)

    def __neg__(self) -> "JacobiQExp":
        return self.scale(-1)

    def __sub__(self, other: "JacobiQExp") -> "JacobiQExp":
        return self + (-other)

    def scale(self, c) -> "JacobiQExp":
        c = _q(c)
        return JacobiQExp(self.index, {key: v * c for key, v in self.coeffs.items()},
                          self.prec, self.k, self.h, self.weak, self.d_min)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return jacobi_scalar_mul(other, self)
        if isinstance(other, JacobiQExp):
            return jacobi_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def truncate(self, N) -> "JacobiQExp":
        return JacobiQExp(self.index, self.coeffs, min(self.prec, _q(N)), self.k, self.h,
                          self.weak, self.d_min)

    def equals(self, other: "JacobiQExp", prec=None) -> bool:
        if self.index != other.index:
            return False
        p = min(self.prec, other.prec)
        if prec is not None:
            p = min(p, _q(prec))
        keys = {k for k in self.coeffs if k[0] <= p} | {k for k in other.coeffs if k[0] <= p}
        return all(self.coeffs.get(k, 0) == other.coeffs.get(k, 0) for k in keys)

    def __eq__(self, other) -> bool:
        if isinstance(other, JacobiQExp):
            return self.equals(other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (f"JacobiQExp(index={self.index!r}, k={self.k}, h={self.h}, "
                f"terms={len(self.coeffs)}, prec={self.prec})")

    def to_json(self) -> dict:
        entries = []
        for n, rint in self.keys():
            c = _q(self.coeffs[(n, rint)])
            m = 24 * n
            entries.append([m.numerator if m.denominator == 1 else str(m), list(rint),
                            c.numerator, c.denominator])
        return {
            "gram": [list(r) for r in self.index.gram],
            "k": None if self.k is None else str(self.k),
            "h": self.h,
            "d": self.denom,
            "entries": entries,
            "N": self.prec.numerator if self.prec.denominator == 1 else str(self.prec),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict | str) -> "JacobiQExp":
        if isinstance(obj, str):
            obj = json.loads(obj)
        L = make_lattice(obj["gram"])
        if L.shadow_denominator != obj["d"]:
            raise ValueError("denominator does not match the index lattice")
        coeffs = {}
        for m, rint, num, den in obj["entries"]:
            coeffs[(Fraction(m) / 24, tuple(rint))] = Fraction(num, den)
        k = obj.get("k")
        return cls(L, coeffs, Fraction(obj["N"]), None if k is None else Fraction(k), obj.get("h"))

    def validate(self) -> list[str]:
        """Problems with the stored keys (exponent class, shadow membership, D bound)."""
        problems = []
        L, d = self.index, self.denom
        n_ = L.rank
        for n, rint in self.coeffs:
            if self.h is not None and (n - Fraction(self.h, 24)).denominator != 1:
                problems.append(f"exponent {n} not in {self.h}/24 + Z")
            # r in sh L  <=>  2 (r G)_i = G_ii mod 2
            rG = [sum(rint[i] * L.gram[i][j] for i in range(n_)) for j in range(n_)]
            if any((2 * rG[j] - d * L.gram[j][j]) % (2 * d) for j in range(n_)):
                problems.append(f"r = {rint}/{d} not in the shadow")
            D = self.D((n, rint))
            floor = self.d_min if self.weak and self.d_min is not None else 0
            if D < floor:
                problems.append(f"D = {D} below {floor}")
        return problems


# --- theta series -------------------------------------------------------------------

def _coset_table(L: Lattice) -> dict[tuple[int, ...], int]:
    d = L.shadow_denominator
    return {tuple(int(x * d) % d for x in c.rep): i for i, c in enumerate(L.shadow)}


def _rep_int(L: Lattice, i: int) -> np.ndarray:
    d = L.shadow_denominator
    return np.array([int(x * d) for x in L.shadow[i].rep], dtype=np.int64)


def _coset_points(L: Lattice, i: int, bound, backend: str | None = None):
    """Points ``r = rep + x`` of coset ``i`` with ``beta(r) <= bound``.

    Returns ``(X, R, num)``: lattice offsets, ``d*r`` and ``2 d^2 beta(r)``.
    """
    d = L.shadow_denominator
    X = enumerate_points(L.gram, L.shadow[i].rep, bound, backend)
    R = d * X + _rep_int(L, i)
    G = np.array(L.gram, dtype=np.int64)
    num = np.einsum("ij,jk,ik->i", R, G, R) if len(R) else np.zeros(0, np.int64)
    return X, R, num


def _signs(L: Lattice, X: np.ndarray) -> np.ndarray:
    diag = np.array([L.gram[i][i] for i in range(L.rank)], dtype=np.int64)
    return 1 - 2 * ((X @ diag) % 2) if len(X) else np.zeros(0, np.int64)


def _lam_vector(L: Lattice, lam) -> list[Fraction]:
    m = len(L.shadow)
    if isinstance(lam, Mapping):
        out = [Fraction(0)] * m
        for i, v in lam.items():
            out[int(i)] = _q(v)
        return out
    lam = list(lam)
    if len(lam) != m:
        raise ValueError(f"lambda needs {m} entries, one per shadow coset")
    return [_q(v) for v in lam]


def _theta_char(L: Lattice, lam: Sequence[Fraction]) -> int | None:
    bs = {L.shadow[i].beta_mod1 for i, v in enumerate(lam) if v}
    if len(bs) != 1:
        return None if bs else 0
    b = 24 * bs.pop()
    return int(b) % 24 if b.denominator == 1 else None


def _weighted_theta(L: Lattice, lam: Sequence[Fraction], N,
                    weight: Callable[[np.ndarray], Rational] | None = None,
                    backend: str | None = None) -> dict[Key, Rational]:
    d = L.shadow_denominator
    two_d2 = 2 * d * d
    coeffs: dict[Key, Rational] = {}
    cache: dict[int, Fraction] = {}
    for i, v in enumerate(lam):
        if not v:
            continue
        X, R, num = _coset_points(L, i, N, backend)
        sg = _signs(L, X)
        for row, m, s in zip(R.tolist(), num.tolist(), sg.tolist()):
            n = cache.get(m)
            if n is None:
                n = cache[m] = Fraction(m, two_d2)
            c = v * s
            if weight is not None:
                c = c * weight(row)
            coeffs[(n, tuple(row))] = c
    return coeffs


def theta_series(L: Lattice, lam, N, backend: str | None = None) -> JacobiQExp:
    """``sum_{r in sh L} lam(r) q^beta(r) e(beta(r, z))`` up to ``q^N``.

    ``lam`` lists the values at the canonical coset representatives; it is
    extended to all of ``sh L`` by ``lam(r + x) = e(beta(x)) lam(r)``.
    """
    if L.definiteness != "positive-definite":
        from .lattice import NotPositiveDefinite
        raise NotPositiveDefinite("theta series need a positive definite lattice")
    lam = _lam_vector(L, lam)
    coeffs = _weighted_theta(L, lam, N, None, backend)
    return JacobiQExp(L, coeffs, N, Fraction(L.rank, 2), _theta_char(L, lam))


def theta_nullwert(L: Lattice, lam, N, backend: str | None = None) -> QSeries:
    """``sum lam(r) q^beta(r)`` via norm counting, without storing vectors."""
    lam = _lam_vector(L, lam)
    out: dict[Fraction, Rational] = {}
    for i, v in enumerate(lam):
        if not v:
            continue
        hist = count_norms(L.gram, L.shadow[i].rep, N, backend, signed=not L.is_even)
        for e, c in hist.items():
            out[e] = out.get(e, 0) + v * c
    return QSeries(out, N, Fraction(L.rank, 2), _theta_char(L, lam))


# --- products -----------------------------------------------------------------------

def _product_prec(p1, v1, p2, v2) -> Fraction:
    return min(p1 + v2, p2 + v1)


def jacobi_scalar_mul(f: QSeries, phi: JacobiQExp) -> JacobiQExp:
    """Product of a one-variable series with a Jacobi expansion."""
    prec = _product_prec(f.prec, f.valuation(), phi.prec, phi.min_n())
    fs = sorted(f.coeffs.items())
    out: dict[Key, Rational] = {}
    for (n, r), c in phi.coeffs.items():
        for e, a in fs:
            m = n + e
            if m > prec:
                break
            key = (m, r)
            out[key] = out.get(key, 0) + a * c
    k = _add_w(phi.k, f.weight)
    h = _add_w(phi.h, f.char)
    weak = phi.weak or f.valuation() < 0
    return JacobiQExp(phi.index, out, prec, k, h, weak)


def jacobi_mul(phi: JacobiQExp, psi: JacobiQExp) -> JacobiQExp:
    """Pointwise product on a common module; the index Gram matrices add."""
    L1, L2 = phi.index, psi.index
    if L1.rank != L2.rank:
        raise ModuleMismatch(f"ranks {L1.rank} and {L2.rank} differ")
    G1, G2 = L1.gram, L2.gram
    gram = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(G1, G2)]
    L = make_lattice(gram)
    d1, d2, d = phi.denom, psi.denom, L.shadow_denominator
    ginv = la.inverse(gram)
    # s = (r1 G1 + r2 G2) (G1 + G2)^-1, computed on integer keys
    M1 = [[x * d / d1 for x in row] for row in la.matmul(G1, ginv)]
    M2 = [[x * d / d2 for x in row] for row in la.matmul(G2, ginv)]
    den = la.lcm(*(x.denominator for row in M1 + M2 for x in row))
    A1 = np.array([[int(x * den) for x in row] for row in M1], dtype=object)
    A2 = np.array([[int(x * den) for x in row] for row in M2], dtype=object)
    prec = _product_prec(phi.prec, phi.min_n(), psi.prec, psi.min_n())
    a = sorted(phi.coeffs.items())
    b = sorted(psi.coeffs.items())
    bv = [(n2, np.array(r2, dtype=object) @ A2, c2) for (n2, r2), c2 in b]
    out: dict[Key, Rational] = {}
    for (n1, r1), c1 in a:
        u = np.array(r1, dtype=object) @ A1
        for n2, w, c2 in bv:
            n = n1 + n2
            if n > prec:
                break
            s = u + w
            key = (n, tuple(int(x) // den for x in s))
            out[key] = out.get(key, 0) + c1 * c2
    k = _add_w(phi.k, psi.k)
    h = _add_w(phi.h, psi.h)
    return JacobiQExp(L, out, prec, k, h, phi.weak or psi.weak)


def jacobi_tensor(phi: JacobiQExp, psi: JacobiQExp) -> JacobiQExp:
    """``(phi (x) psi)(tau, z1 + z2) = phi(tau, z1) psi(tau, z2)`` on the direct sum."""
    L = direct_sum(phi.index, psi.index)
    d = L.shadow_denominator
    f1, f2 = d // phi.denom, d // psi.denom
    prec = _product_prec(phi.prec, phi.min_n(), psi.prec, psi.min_n())
    a = sorted(phi.coeffs.items())
    b = sorted(psi.coeffs.items())
    out: dict[Key, Rational] = {}
    for (n1, r1), c1 in a:
        u = tuple(f1 * x for x in r1)
        for (n2, r2), c2 in b:
            n = n1 + n2
            if n > prec:
                break
            key = (n, u + tuple(f2 * x for x in r2))
            out[key] = out.get(key, 0) + c1 * c2
    return JacobiQExp(L, out, prec, _add_w(phi.k, psi.k), _add_w(phi.h, psi.h),
                      phi.weak or psi.weak)


def pullback(phi: JacobiQExp, A: Sequence[Sequence], target: Lattice | None = None) -> JacobiQExp:
    """Pullback along the map whose matrix rows are images of the basis of ``L'``.

    ``A`` is ``n' x n`` with entries in M-coordinates; the isometry condition
    reads ``A G_M A^T = G_L'``.
    """
    GM = phi.index.gram
    A = [[_q(x) for x in row] for row in A]
    if any(len(row) != len(GM) for row in A):
        raise NotIsometric("matrix columns do not match the rank of the index")
    img = la.matmul(la.matmul(A, GM), la.transpose(A))
    if any(x.denominator != 1 for row in img for x in row):
        raise NotIsometric("A G A^T is not integral")
    img_int = [[int(x) for x in row] for row in img]
    if target is None:
        try:
            target = make_lattice(img_int)
        except LatticeError as exc:
            raise NotIsometric(f"image form is not a lattice: {exc}") from exc
    elif [list(r) for r in target.gram] != img_int:
        raise NotIsometric("A G_M A^T differs from the target Gram matrix")
    d, d2 = phi.denom, target.shadow_denominator
    K = la.matmul(la.matmul(GM, la.transpose(A)), la.inverse(target.gram))
    K = [[x * d2 / d for x in row] for row in K]
    den = la.lcm(*(x.denominator for row in K for x in row))
    Kint = np.array([[int(x * den) for x in row] for row in K], dtype=object)
    out: dict[Key, Rational] = {}
    for (n, r), c in phi.coeffs.items():
        s = np.array(r, dtype=object) @ Kint
        key = (n, tuple(int(x) // den for x in s))
        out[key] = out.get(key, 0) + c
    return JacobiQExp(target, out, phi.prec, phi.k, phi.h, phi.weak)


# --- theta decomposition -------------------------------------------------------------

def _coset_min_beta(L: Lattice, i: int) -> Fraction:
    rep = L.shadow[i].rep
    b = L.beta(rep)
    hist = count_norms(L.gram, rep, b)
    return min(hist)


def _grouped(phi: JacobiQExp):
    """Map ``(coset, D) -> sign-normalized value`` plus a consistency flag and counts."""
    L, d = phi.index, phi.denom
    table = _coset_table(L)
    diag = [L.gram[i][i] for i in range(L.rank)]
    reps = [[int(b * d) for b in c.rep] for c in L.shadow]
    groups: dict[tuple[int, Fraction], Rational] = {}
    counts: dict[tuple[int, Fraction], int] = {}
    ok = True
    for (n, rint), c in phi.coeffs.items():
        red = tuple(x % d for x in rint)
        i = table.get(red)
        if i is None:
            return None, None, False
        x = [(a - b) // d for a, b in zip(rint, reps[i])]
        sign = -1 if sum(g * t for g, t in zip(diag, x)) % 2 else 1
        D = n - phi.beta_int(rint)
        key = (i, D)
        v = sign * c
        if key in groups and groups[key] != v:
            ok = False
        groups[key] = v
        counts[key] = counts.get(key, 0) + 1
    return groups, counts, ok


def check_L_invariance(phi: JacobiQExp) -> bool:
    """Exhaustive translate check within precision."""
    groups, counts, ok = _grouped(phi)
    if not ok:
        return False
    L = phi.index
    by_coset: dict[int, list[Fraction]] = {}
    for i, D in groups:
        by_coset.setdefault(i, []).append(D)
    for i, Ds in by_coset.items():
        hist = count_norms(L.gram, L.shadow[i].rep, phi.prec - min(Ds))
        norms = sorted(hist.items())
        for D in Ds:
            need = sum(c for b, c in norms if b + D <= phi.prec)
            if counts[(i, D)] != need:
                return False
    return True


def theta_decompose(phi: JacobiQExp) -> dict[int, QSeries]:
    """``{coset index: h}`` with ``phi = sum h_i theta_{L, e_i}``.

    The series ``h_i(tau) = sum_D C(D, r_i) q^D`` is exact up to
    ``prec - min beta`` over the coset.
    """
    if not check_L_invariance(phi):
        raise NotLInvariant("coefficients are not invariant under lattice translations")
    groups, _, _ = _grouped(phi)
    L = phi.index
    w = None if phi.k is None else phi.k - Fraction(L.rank, 2)
    out: dict[int, QSeries] = {}
    for i, cos in enumerate(L.shadow):
        series = {D: v for (j, D), v in groups.items() if j == i}
        ch = None
        if phi.h is not None:
            c = 24 * (Fraction(phi.h, 24) - cos.beta_mod1)
            ch = int(c) % 24 if c.denominator == 1 else None
        out[i] = QSeries(series, phi.prec - _coset_min_beta(L, i), w, ch)
    return out


def reconstruct(decomp: Mapping[int, QSeries], L: Lattice, N=None, k=None,
                h: int | None = None) -> JacobiQExp:
    """``sum h_i theta_{L, e_i}``; the inverse of ``theta_decompose``."""
    d = L.shadow_denominator
    two_d2 = 2 * d * d
    prec = None
    out: dict[Key, Rational] = {}
    for i, f in decomp.items():
        mb = _coset_min_beta(L, i)
        p = f.prec + mb
        prec = p if prec is None else min(prec, p)
    if N is not None:
        prec = _q(N) if prec is None else min(prec, _q(N))
    if prec is None:
        raise ValueError("empty decomposition needs an explicit precision")
    for i, f in decomp.items():
        if not f.coeffs:
            continue
        v = f.valuation()
        X, R, num = _coset_points(L, i, prec - v)
        sg = _signs(L, X)
        fs = sorted(f.coeffs.items())
        for row, m, s in zip(R.tolist(), num.tolist(), sg.tolist()):
            b = Fraction(m, two_d2)
            r = tuple(row)
            for D, c in fs:
                n = D + b
                if n > prec:
                    break
                out[(n, r)] = out.get((n, r), 0) + s * c
    return JacobiQExp(L, out, prec, k, h)


def delta_operator(phi: JacobiQExp) -> JacobiQExp:
    """``sum (q d/dq h_i) theta_i - (k - n/2)/12 E_2 phi``; raises weight by 2."""
    if phi.k is None:
        raise ValueError("delta needs a known weight")
    if not check_L_invariance(phi):
        raise NotLInvariant("coefficients are not invariant under lattice translations")
    L = phi.index
    # (q d/dq h)(tau) theta(tau, z) has coefficient D C(D, r) at (D + beta(r), r)
    first = {key: phi.D(key) * c for key, c in phi.coeffs.items()}
    t = (phi.k - Fraction(L.rank, 2)) / 12
    out = JacobiQExp(L, first, phi.prec, phi.k + 2, phi.h, phi.weak)
    if t:
        E2 = series_E(2, max(phi.prec - phi.min_n(), Fraction(0)))
        out = out - jacobi_scalar_mul(E2, phi).scale(t)
        out.k = phi.k + 2
    return out


def verify_holomorphic(phi: JacobiQExp) -> bool:
    return all(phi.D(key) >= 0 for key in phi.coeffs)


def nullwert(phi: JacobiQExp) -> QSeries:
    """``phi(tau, 0)``."""
    out: dict[Fraction, Rational] = {}
    for (n, _), c in phi.coeffs.items():
        out[n] = out.get(n, 0) + c
    return QSeries(out, phi.prec, phi.k, phi.h)


# --- catalog ------------------------------------------------------------------------

E8_MODEL_BASIS: tuple[tuple[Fraction, ...], ...] = tuple(
    tuple(Fraction(x) for x in row) for row in (
        [2, 0, 0, 0, 0, 0, 0, 0],
        [-1, 1, 0, 0, 0, 0, 0, 0],
        [0, -1, 1, 0, 0, 0, 0, 0],
        [0, 0, -1, 1, 0, 0, 0, 0],
        [0, 0, 0, -1, 1, 0, 0, 0],
        [0, 0, 0, 0, -1, 1, 0, 0],
        [0, 0, 0, 0, 0, -1, 1, 0],
        [Fraction(1, 2)] * 8,
    ))

# D3 inside Z^3 (even coordinate sum); rows match the named D3 basis
D3_IN_Z3 = ((1, -1, 0), (0, 1, -1), (0, 1, 1))
# identification of D3 = ev(Z^3) with the A3 model in Z^4
IOTA2 = tuple(tuple(Fraction(x, 2) for x in row) for row in
              ((1, 1, -1, -1), (1, -1, 1, -1), (-1, 1, 1, -1)))
# A2 inside Z^3: z -> (z1, z2, z1 + z2)
A2_IN_Z3 = ((1, 0, 1), (0, 1, 1))


@lru_cache(maxsize=None)
def e8_model_lattice() -> Lattice:
    g = la.matmul(E8_MODEL_BASIS, la.transpose(E8_MODEL_BASIS))
    return make_lattice([[int(x) for x in row] for row in g], name="E8 (coordinate model)")


def _model_to_e8(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return la.matmul([[_q(x) for x in r] for r in rows], la.inverse(E8_MODEL_BASIS))


def _zpow(n: int) -> Lattice:
    return named_lattice("Z", n)


def _a2() -> Lattice:
    return named_lattice("A", 2)


def _d3() -> Lattice:
    return named_lattice("D", 3)


def _a2_lambda() -> list[int]:
    # odd coset function: the class of (1/3, 1/3) gets +1
    return [0, 1, -1]


def _a2a2_lambda(L: Lattice) -> list[int]:
    A2 = _a2()
    idx = {c.rep: i for i, c in enumerate(A2.shadow)}
    lam = []
    for c in L.shadow:
        s, r = idx[c.rep[:2]], idx[c.rep[2:]]
        a_s, a_r = int(s == 0), int(r == 0)
        lam.append(a_s * (1 - a_r) - (1 - a_s) * a_r)
    return lam


def _build_theta(N):
    return theta_series(_zpow(1), [1], N)


def _build_theta_tilde(N):
    L = rescale(_zpow(1), 3)
    # cosets 1/6, 1/2, 5/6 carry the character (12/.) of 1, 3, 5
    return theta_series(L, [1, 0, -1], N)


def _build_distjac_zn(n: int):
    def build(N):
        out = named_form("theta", N)
        for _ in range(n - 1):
            out = jacobi_tensor(out, named_form("theta", N))
        out.index = _zpow(n)
        return out
    return build


def _build_distjac_e8(N):
    return theta_series(e8_model_lattice(), [1], N)


def _build_distjac_a2(N):
    return theta_series(_a2(), _a2_lambda(), N)


def _build_distjac_a2a2(N):
    L = direct_sum(_a2(), _a2())
    return theta_series(L, _a2a2_lambda(L), N)


def _build_eis2_a2(N):
    # second-factor embedding s -> (0, s), matching the explicit double sum
    return pullback(named_form("distjac_A2A2_8", N), [[0, 0, 1, 0], [0, 0, 0, 1]], _a2())


def _build_eis4_a2(N):
    return delta_operator(named_form("eis2_A2_8", N)).scale(12)


def _eis_a2_0(N, e_first: int):
    N = _q(N)
    M = N + 1
    e2, e4 = named_form("eis2_A2_8", M), named_form("eis4_A2_8", M)
    if e_first == 6:
        num = jacobi_scalar_mul(series_E(6, M), e2) + jacobi_scalar_mul(series_E(4, M), e4)
    else:
        E4 = series_E(4, M)
        num = jacobi_scalar_mul(E4 * E4, e2) + jacobi_scalar_mul(series_E(6, M), e4)
    out = jacobi_scalar_mul(series_eta_pow(-8, M), num).truncate(N)
    out.weak = False
    return out


def _build_eis4_a2_0(N):
    return _eis_a2_0(N, 6)


def _build_eis6_a2_0(N):
    return _eis_a2_0(N, 4)


def _build_iota1(N):
    return pullback(named_form("distjac_Z3", N), D3_IN_Z3, _d3())


def _build_iota2(N):
    A = la.matmul(D3_IN_Z3, IOTA2)
    return pullback(named_form("distjac_Z4", N), A, _d3())


def _build_eta15_iota1(N):
    return jacobi_scalar_mul(series_eta_pow(15, N), named_form("iota1_D3", N))


def _build_eta12_iota2(N):
    return jacobi_scalar_mul(series_eta_pow(12, N), named_form("iota2_D3", N))


def _d3_to_e8() -> list[list[Fraction]]:
    rows = [[0, 0, 0, 0, *r, 0] for r in D3_IN_Z3]
    return _model_to_e8(rows)


def _build_eis4_d3(N):
    return pullback(named_form("distjac_E8", N), _d3_to_e8(), _d3())


def _build_eis6_d3(N):
    return delta_operator(named_form("eis4_D3_0", N))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    lattice: Callable[[], Lattice]
    k: Fraction
    h: int
    builder: Callable
    singular: bool
    description: str


def _entry(name, lattice, k, h, builder, singular, description) -> CatalogEntry:
    return CatalogEntry(name, lattice, Fraction(k), h % 24, builder, singular, description)


CATALOG: dict[str, CatalogEntry] = {e.name: e for e in [
    _entry("theta", lambda: _zpow(1), Fraction(1, 2), 3, _build_theta, True,
           "odd theta function on Z, coefficients (-4/r)"),
    _entry("theta_tilde", lambda: rescale(_zpow(1), 3), Fraction(1, 2), 1, _build_theta_tilde,
           True, "theta series of Z(3) with coefficients (12/r)"),
    *[_entry(f"distjac_Z{n}", (lambda n=n: _zpow(n)), Fraction(n, 2), 3 * n,
             _build_distjac_zn(n), True, f"tensor power theta(w1)...theta(w{n})")
      for n in range(1, 9)],
    _entry("distjac_E8", e8_model_lattice, 4, 0, _build_distjac_e8, True,
           "theta series of E8 in the half-integer coordinate model"),
    _entry("distjac_A2", _a2, 1, 8, _build_distjac_a2, True,
           "odd singular form on A2, coefficients (r/3)"),
    _entry("distjac_A2A2_8", lambda: direct_sum(_a2(), _a2()), 2, 8, _build_distjac_a2a2, True,
           "singular form on A2+A2 from A2(s)A2c(r) - A2c(s)A2(r)"),
    _entry("eis2_A2_8", _a2, 2, 8, _build_eis2_a2, False,
           "pullback of distjac_A2A2_8 along s -> (0, s)"),
    _entry("eis4_A2_8", _a2, 4, 8, _build_eis4_a2, False, "12 delta(eis2_A2_8)"),
    _entry("eis4_A2_0", _a2, 4, 0, _build_eis4_a2_0, False,
           "(E6 eis2 + E4 eis4)/eta^8"),
    _entry("eis6_A2_0", _a2, 6, 0, _build_eis6_a2_0, False,
           "(E4^2 eis2 + E6 eis4)/eta^8"),
    _entry("iota1_D3", _d3, Fraction(3, 2), 9, _build_iota1, True,
           "pullback of distjac_Z3 along D3 in Z^3"),
    _entry("iota2_D3", _d3, 2, 12, _build_iota2, False,
           "pullback of distjac_Z4 along D3 = A3 in Z^4"),
    _entry("eta15_iota1_D3", _d3, 9, 0, _build_eta15_iota1, False, "eta^15 iota1_D3"),
    _entry("eta12_iota2_D3", _d3, 8, 0, _build_eta12_iota2, False, "eta^12 iota2_D3 (cusp form)"),
    _entry("eis4_D3_0", _d3, 4, 0, _build_eis4_d3, False,
           "pullback of distjac_E8 along (x,y,z) -> (0,0,0,0,x,y,z,0)"),
    _entry("eis6_D3_0", _d3, 6, 0, _build_eis6_d3, False, "delta(eis4_D3_0)"),
]}


def catalog_names() -> list[str]:
    return list(CATALOG)


@lru_cache(maxsize=128)
def _named_form_cached(name: str, N: Fraction) -> JacobiQExp:
    e = CATALOG[name]
    phi = e.builder(N).truncate(N)
    phi.k, phi.h = e.k, e.h
    return phi


def named_form(name: str, N) -> JacobiQExp:
    """Catalog form ``name`` to precision ``N``."""
    if name not in CATALOG:
        raise KeyError(f"unknown form {name!r}; known: {', '.join(CATALOG)}")
    return _named_form_cached(name, _q(N))


def named_forms(N, names: Iterable[str] | None = None) -> dict[str, JacobiQExp]:
    return {n: named_form(n, N) for n in (names or CATALOG)}


def catalog_forms_for(L: Lattice) -> list[tuple[Fraction, int]]:
    """Weights and characters of nonzero holomorphic catalog forms of index ``L``."""
    out = []
    for e in CATALOG.values():
        if e.lattice().gram == L.gram:
            out.append((e.k, e.h))
    return out


def explicit_eis4_A2_8(N) -> JacobiQExp:
    """``-E2 Eis2 + 12 sum lam(s, r) beta(s) q^(beta(s)+beta(r)) e(beta(r, z))``."""
    N = _q(N)
    A2 = _a2()
    L = direct_sum(A2, A2)
    d = L.shadow_denominator
    G = [row[:2] for row in A2.gram]

    def beta_s(row):
        s = [Fraction(x, d) for x in row[:2]]
        return Fraction(sum(s[i] * G[i][j] * s[j] for i in range(2) for j in range(2)), 2)

    raw = _weighted_theta(L, _a2a2_lambda(L), N, beta_s)
    second = pullback(JacobiQExp(L, raw, N, 2, 8), [[0, 0, 1, 0], [0, 0, 0, 1]], A2)
    eis2 = named_form("eis2_A2_8", N)
    out = second.scale(12) - jacobi_scalar_mul(series_E(2, N), eis2)
    out.k, out.h = Fraction(4), 8
    return out

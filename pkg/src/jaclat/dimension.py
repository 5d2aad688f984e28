"""Dimensions of spaces of Jacobi forms ``J_{k,L}(eps^h)``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd
from typing import Iterable, Mapping, Sequence

from ._linalg import lcm
from .cyclotomic import (CycloNum, chi_float, cyclo_root, gauss_sum_chi,
                         rational_reconstruct, sqrt_positive_integer)
from .lattice import Lattice, direct_sum, named_lattice, rescale
from .theta_rep import singular_dimension

__all__ = [
    "IrrationalResult", "DimResult", "HPResult", "as_weight", "dim_formula",
    "dim_formula_float", "dim_jacobi", "eisenstein_count", "module_ranks",
    "hp_polynomial", "stable_equiv_dim_check", "critical_components",
    "construction_lower_bounds", "EXACT", "FORMULA_MINUS_SKEW", "UNKNOWN",
]

EXACT = "Exact"
FORMULA_MINUS_SKEW = "FormulaMinusSkewCusp"
UNKNOWN = "Unknown"


class IrrationalResult(ArithmeticError):
    pass


def as_weight(k) -> Fraction:
    """Parse a weight given as int, Fraction, float or string like ``"7/2"``."""
    if isinstance(k, str):
        k = k.strip()
        w = Fraction(k) if "/" in k else Fraction(float(k)).limit_denominator(2)
    else:
        w = Fraction(k).limit_denominator(2) if isinstance(k, float) else Fraction(k)
    if (2 * w).denominator != 1:
        raise ValueError(f"weight {k!r} is not in (1/2)Z")
    return w


def _pry(k: Fraction, h: int) -> Fraction:
    return k - Fraction(h, 2)


def _sawtooth(x: Fraction) -> Fraction:
    return x - floor(x) - Fraction(1, 2)


def _kron12(m: int) -> int:
    r = m % 12
    return 1 if r in (1, 11) else (-1 if r in (5, 7) else 0)


def _rational_terms(L: Lattice, k: Fraction, h: int, pry: int) -> Fraction:
    n, det, n2 = L.rank, L.det, L.info.n2
    sign = (-1) ** ((pry + n2) % 2)
    out = Fraction(1, 24) * (k - Fraction(n, 2) - 1) * (det + sign * 2 ** (n - n2))
    out += Fraction(_kron12(2 * pry + 2 * n + 1), 6)
    target = Fraction(h, 24)
    out -= sum(_sawtooth(target - c.beta_mod1) for c in L.shadow) / 2
    out -= sign * sum(_sawtooth(target - c.beta_mod1) for c in L.shadow if c.order2) / 2
    return out


def dim_formula(L: Lattice, k, h: int) -> Fraction:
    """Exact right-hand side of the dimension formula.

    Equals ``dim J_{k,L}(eps^h) - dim J^{skew,cusp}_{n+2-k,L}(eps^h)``;
    zero when ``k - h/2`` is not an integer.
    """
    k = as_weight(k)
    pry_f = _pry(k, h)
    if pry_f.denominator != 1:
        return Fraction(0)
    pry = int(pry_f)
    n = L.rank
    chi2 = gauss_sum_chi(L, 2)
    chi3 = gauss_sum_chi(L, -3)
    cyc = (cyclo_root(4, pry) * chi2).real_part() * Fraction(1, 4)
    inv_3sqrt3 = sqrt_positive_integer(3) * Fraction(1, 9)
    t4 = (cyclo_root(6, pry) * cyclo_root(24, n + 2) * chi3).real_part() * inv_3sqrt3
    cyc = cyc + t4 * (-1) ** (pry % 2)
    if not cyc.is_rational():
        raise IrrationalResult(f"dimension formula not rational for {L}, k={k}, h={h}")
    return cyc.to_rational() + _rational_terms(L, k, h, pry)


def dim_formula_float(L: Lattice, k, h: int) -> Fraction:
    """Same quantity through complex doubles and rational reconstruction."""
    import cmath

    k = as_weight(k)
    pry_f = _pry(k, h)
    if pry_f.denominator != 1:
        return Fraction(0)
    pry = int(pry_f)
    n = L.rank
    e = lambda x: cmath.exp(2j * cmath.pi * x)  # noqa: E731
    val = 0.25 * (e(pry / 4) * chi_float(L, 2)).real
    val += (-1) ** pry / (3 * 3 ** 0.5) * (e(pry / 6) * e((n + 2) / 24) * chi_float(L, -3)).real
    val += float(_rational_terms(L, k, h, pry))
    return rational_reconstruct(val, 24 * L.det)


def eisenstein_count(L: Lattice, k, h: int) -> Fraction:
    """``dim J^Eis_k + dim J^{skew,Eis}_{n+2-k}`` for ``eps^h``."""
    k = as_weight(k)
    pry_f = _pry(k, h)
    if pry_f.denominator != 1:
        return Fraction(0)
    sign = (-1) ** ((int(pry_f) + L.info.n2) % 2)
    target = Fraction(h % 24, 24)
    hits = [c for c in L.shadow if c.beta_mod1 == target]
    return Fraction(len(hits) + sign * sum(1 for c in hits if c.order2), 2)


def module_ranks(L: Lattice) -> tuple[int, int]:
    """Ranks of the even and odd parts as free modules over C[E4, E6]."""
    n, det, n2 = L.rank, L.det, L.info.n2
    t = (-1) ** n2 * 2 ** (n - n2)
    return (det + t) // 2, (det - t) // 2


# --- dim_jacobi --------------------------------------------------------------

@dataclass(frozen=True)
class DimResult:
    value: Fraction
    exactness: str
    method: str
    lower: int | None = None
    upper: int | None = None

    def to_json(self) -> dict:
        out = {"value": str(self.value), "exactness": self.exactness, "method": self.method}
        if self.exactness != EXACT:
            out["lower"] = self.lower
            out["upper"] = self.upper
        return out


def _ceil_nonneg(x: Fraction) -> int:
    return max(0, ceil(x))


@lru_cache(maxsize=64)
def construction_lower_bounds(L: Lattice) -> dict[tuple[Fraction, int], int]:
    """Lower bounds ``{(k, h): d}`` from explicit nonzero forms in the catalog.

    A form of weight k and character h also yields ``eta^l`` times it, which
    the lower-bound recursion picks up on its own.
    """
    from .qseries import catalog_forms_for

    out: dict[tuple[Fraction, int], int] = {}
    for k, h in catalog_forms_for(L):
        key = (Fraction(k), h % 24)
        out[key] = max(out.get(key, 0), 1)
    return out


def _window(L: Lattice, k: Fraction) -> bool:
    half = Fraction(L.rank, 2)
    return half < k < half + 2


def _outside_window(L: Lattice, k: Fraction, h: int) -> tuple[int, str] | None:
    half = Fraction(L.rank, 2)
    if _pry(k, h).denominator != 1 or k < half:
        return 0, "formula"
    if k == half:
        return singular_dimension(L, h % 24), "singular"
    if k >= half + 2:
        v = dim_formula(L, k, h)
        if v.denominator != 1 or v < 0:
            raise IrrationalResult(f"formula gave {v} for {L}, k={k}, h={h}")
        return int(v), "formula"
    return None


def _lower(L: Lattice, k: Fraction, h: int, extra: Mapping, memo: dict) -> int:
    key = (k, h % 24)
    if key not in memo:
        fixed = _outside_window(L, k, h)
        if fixed is not None:
            memo[key] = fixed[0]
        else:
            lo = max(_ceil_nonneg(dim_formula(L, k, h)), extra.get(key, 0))
            # multiplication by eta embeds J_{k-1/2}(eps^{h-1}) here
            memo[key] = max(lo, _lower(L, k - Fraction(1, 2), h - 1, extra, memo))
    return memo[key]


# eta^4, eta^2, eta and E4 multiply injectively into higher weight
_UP_RULES = ((Fraction(2), 4), (Fraction(1), 2), (Fraction(1, 2), 1), (Fraction(4), 0))


def _upper(L: Lattice, k: Fraction, h: int, memo: dict) -> int:
    key = (k, h % 24)
    if key not in memo:
        fixed = _outside_window(L, k, h)
        if fixed is not None:
            memo[key] = fixed[0]
        else:
            memo[key] = min(_upper(L, k + dk, h + dh, memo) for dk, dh in _UP_RULES)
    return memo[key]


def dim_jacobi(L: Lattice, k, h: int, *, lower_bounds: Mapping | None = None,
               overrides: Mapping | None = None, use_constructions: bool = True,
               resolve: bool = True) -> DimResult:
    """Dimension of ``J_{k,L}(eps^h)`` with an explicit exactness label."""
    k = as_weight(k)
    h %= 24
    if overrides:
        for (ok, oh), v in overrides.items():
            if as_weight(ok) == k and oh % 24 == h:
                return DimResult(Fraction(v), EXACT, "user-override", v, v)
    fixed = _outside_window(L, k, h)
    if fixed is not None:
        v, method = fixed
        return DimResult(Fraction(v), EXACT, method, v, v)
    formula = dim_formula(L, k, h)
    if not resolve:
        return DimResult(formula, FORMULA_MINUS_SKEW, "formula")
    extra: dict = {}
    if use_constructions:
        extra.update(construction_lower_bounds(L))
    for (bk, bh), v in (lower_bounds or {}).items():
        key = (as_weight(bk), bh % 24)
        extra[key] = max(extra.get(key, 0), v)
    lo, hi = _lower(L, k, h, extra, {}), _upper(L, k, h, {})
    if lo == hi:
        return DimResult(Fraction(lo), EXACT, "zero-propagation", lo, hi)
    return DimResult(formula, UNKNOWN, "formula", lo, hi)


# --- Hilbert-Poincare polynomials --------------------------------------------

@dataclass(frozen=True)
class HPResult:
    lattice: Lattice
    h: int
    parity: str
    start: Fraction
    coeffs: dict = field(default_factory=dict)  # weight -> int
    unknown: tuple = ()
    dims: dict = field(default_factory=dict)  # weight -> DimResult

    @property
    def complete(self) -> bool:
        return not self.unknown

    def value_at_one(self) -> int | None:
        return sum(self.coeffs.values()) if self.complete else None

    def numerator_str(self) -> str:
        terms = []
        for w in sorted(set(self.coeffs) | set(self.unknown)):
            if w in self.unknown:
                terms.append(f"?*{_tpow(w)}")
            elif self.coeffs[w]:
                c = self.coeffs[w]
                terms.append(_tpow(w) if c == 1 else f"{c}*{_tpow(w)}")
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return f"({self.numerator_str()}) / ((1 - t^4)(1 - t^6))"

    def to_json(self) -> dict:
        return {
            "lattice": [list(r) for r in self.lattice.gram],
            "h": self.h,
            "parity": self.parity,
            "start": str(self.start),
            "numerator": {str(w): c for w, c in sorted(self.coeffs.items()) if c},
            "unknown": [str(w) for w in self.unknown],
            "text": self.numerator_str(),
        }


def _tpow(w: Fraction) -> str:
    return f"t^{w}" if w.denominator == 1 else f"t^({w})"


def hp_start(L: Lattice, h: int, parity: str) -> Fraction:
    """The unique ``k = h/2 + parity (mod 2)`` in ``[n/2, n/2 + 2)``."""
    p = 0 if parity == "even" else 1
    base = Fraction(h, 2) + p
    half = Fraction(L.rank, 2)
    k = base
    while k < half:
        k += 2
    while k >= half + 2:
        k -= 2
    return k


def hp_polynomial(L: Lattice, h: int, parity: str, *, overrides: Mapping | None = None,
                  lower_bounds: Mapping | None = None) -> HPResult:
    """Numerator Q of the Hilbert-Poincare series over ``(1-t^4)(1-t^6)``."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    h %= 24
    s = hp_start(L, h, parity)
    top = Fraction(L.rank, 2) + 12
    dims: dict[Fraction, DimResult] = {}

    def a(j: Fraction) -> DimResult | None:
        if j < s:
            return None
        if j not in dims:
            dims[j] = dim_jacobi(L, j, h, overrides=overrides, lower_bounds=lower_bounds)
        return dims[j]

    coeffs: dict[Fraction, int] = {}
    unknown = []
    k = s
    while k < top:
        parts = [(a(k), 1), (a(k - 4), -1), (a(k - 6), -1), (a(k - 10), 1)]
        if any(d is not None and d.exactness != EXACT for d, _ in parts):
            unknown.append(k)
        else:
            coeffs[k] = sum(int(d.value) * sgn for d, sgn in parts if d is not None)
        k += 2
    return HPResult(L, h, parity, s, coeffs, tuple(unknown), dims)


def hp_b(L: Lattice, k, h: int) -> Fraction:
    """``b(k) = a(k) - a(k-4) - a(k-6) + a(k-10)`` with a = dim_formula."""
    k = as_weight(k)
    return (dim_formula(L, k, h) - dim_formula(L, k - 4, h)
            - dim_formula(L, k - 6, h) + dim_formula(L, k - 10, h))


# --- stable equivalence and critical weight ---------------------------------

def stable_equiv_dim_check(L1: Lattice, L2: Lattice, h: int, k_list: Iterable) -> bool:
    """Compare ``J_{k+n1/2,L1}(eps^{h+3n1})`` with ``J_{k+n2/2,L2}(eps^{h+3n2})``.

    Only weights where both dimensions are Exact are meaningful; a non-Exact
    value makes the check fail rather than pass silently.
    """
    n1, n2 = L1.rank, L2.rank
    for k in k_list:
        k = as_weight(k)
        d1 = dim_jacobi(L1, k + Fraction(n1, 2), h + 3 * n1)
        d2 = dim_jacobi(L2, k + Fraction(n2, 2), h + 3 * n2)
        if d1.exactness != EXACT or d2.exactness != EXACT or d1.value != d2.value:
            return False
    return True


def _squarefree(m: int) -> bool:
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return True


def critical_components(L: Lattice, h: int) -> list[tuple[int, int]]:
    """``[(N', singular_dimension(Z(2N') + L, h))]`` over N' | N, N/N' squarefree."""
    h %= 24
    N = lcm(L.info.level, 24 // gcd(24, h))
    out = []
    for Np in range(1, N + 1):
        if N % Np == 0 and _squarefree(N // Np):
            big = direct_sum(rescale(named_lattice("Z", 1), 2 * Np), L)
            out.append((Np, singular_dimension(big, h)))
    return out


def dim_result_json(res: DimResult) -> str:
    return json.dumps(res.to_json())

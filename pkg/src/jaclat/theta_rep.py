"""The finite G-module W(L) spanned by the basic theta functions.

Basis vectors ``lambda_r`` are indexed by ``L.shadow`` (canonical order) and
normalized by ``lambda_r(r) = 1`` at the stored representative ``r``.
Generators act as ``rho(g) theta = theta | g^{-1}``:

* ``T``: ``lambda -> e(-beta(x)) lambda(x)``
* ``S``: ``lambda -> e_8(n) det^{-1/2} sum_y e(beta(x, y)) lambda(y)``
* ``Z = (-1, i)``: ``lambda_r -> i^n e(beta(r + r')) lambda_{r'}``, ``r' = -r mod L``
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from ._linalg import lcm
from .cyclotomic import CycloNum, cyclo_root, e_frac, gauss_sum_chi, sqrt_positive_integer
from .lattice import Lattice, ShadowCoset, beta_pair, beta_value

__all__ = [
    "WSpace", "RepMatrices", "CharacterConstants", "CHARACTER",
    "rep_matrices", "verify_relations", "traces", "singular_dimension",
    "singular_basis", "field_modulus", "is_singular_vector",
    "cyclo_rank", "cyclo_kernel",
]

CMatrix = list[list[CycloNum]]


@dataclass(frozen=True)
class WSpace:
    lattice: Lattice

    @property
    def basis(self) -> tuple[ShadowCoset, ...]:
        return self.lattice.shadow

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class CharacterConstants:
    """Values of the character epsilon of eta on T and S."""

    eps_T: CycloNum
    eps_S: CycloNum


CHARACTER = CharacterConstants(cyclo_root(24, 1), cyclo_root(8, -1))


@dataclass(frozen=True)
class RepMatrices:
    M: int
    T: tuple[tuple[CycloNum, ...], ...]
    S: tuple[tuple[CycloNum, ...], ...]
    Z: tuple[tuple[CycloNum, ...], ...]

    def to_json(self) -> dict:
        def enc(m):
            return [[x.to_json()["coeffs"] for x in row] for row in m]
        return {"M": self.M, "T": enc(self.T), "S": enc(self.S), "Z": enc(self.Z)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> "RepMatrices":
        M = obj["M"]

        def dec(m):
            return tuple(tuple(CycloNum.from_coeffs(M, [Fraction(c) for c in x]) for x in row) for row in m)
        return cls(M, dec(obj["T"]), dec(obj["S"]), dec(obj["Z"]))


def field_modulus(L: Lattice) -> int:
    """``lcm(24, level, 4 det)``: a field holding every matrix entry."""
    return lcm(24, L.info.level, 4 * L.det)


def _neg_index(L: Lattice) -> list[tuple[int, Fraction]]:
    """For each coset r: index of r' = -r mod L and beta(r + r')."""
    reps = [c.rep for c in L.shadow]
    where = {r: i for i, r in enumerate(reps)}
    out = []
    for r in reps:
        neg = tuple((-x) % 1 for x in r)
        j = where[neg]
        out.append((j, beta_value(L, [a + b for a, b in zip(r, reps[j])])))
    return out


@lru_cache(maxsize=256)
def rep_matrices(L: Lattice) -> RepMatrices:
    """Matrices of T, S and Z on W(L), all entries in Q(zeta_M)."""
    M = field_modulus(L)
    n = L.rank
    reps = [c.rep for c in L.shadow]
    d = len(reps)
    zero = CycloNum.rational(0, M)
    scale = (cyclo_root(8, n) * sqrt_positive_integer(L.det) * Fraction(1, L.det)).coerce(M)
    T = [[zero] * d for _ in range(d)]
    S = [[zero] * d for _ in range(d)]
    Z = [[zero] * d for _ in range(d)]
    for i, c in enumerate(L.shadow):
        T[i][i] = e_frac(-c.beta_mod1).coerce(M)
    for i in range(d):
        for j in range(d):
            S[i][j] = (scale * e_frac(beta_pair(L, reps[i], reps[j]))).coerce(M)
    i_n = cyclo_root(4, n)
    for r, (j, b) in enumerate(_neg_index(L)):
        # column r: image of lambda_r lands on lambda_{r'}
        Z[j][r] = (i_n * e_frac(b)).coerce(M)
    freeze = lambda m: tuple(tuple(row) for row in m)  # noqa: E731
    return RepMatrices(M, freeze(T), freeze(S), freeze(Z))


def _mm(a: Sequence[Sequence[CycloNum]], b: Sequence[Sequence[CycloNum]]) -> CMatrix:
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for k in range(m):
                if a[i][k].is_zero() or b[k][j].is_zero():
                    continue
                t = a[i][k] * b[k][j]
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else CycloNum.rational(0, a[0][0].M))
        out.append(row)
    return out


def _scalar_id(d: int, c: CycloNum | int) -> CMatrix:
    z = CycloNum.rational(0)
    return [[(c if isinstance(c, CycloNum) else CycloNum.rational(c)) if i == j else z
             for j in range(d)] for i in range(d)]


def _meq(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def verify_relations(L: Lattice) -> dict[str, bool]:
    """Exact check of the metaplectic relations on W(L)."""
    rm = rep_matrices(L)
    d = len(rm.T)
    s2 = _mm(rm.S, rm.S)
    st = _mm(rm.S, rm.T)
    st3 = _mm(_mm(st, st), st)
    z2 = _mm(rm.Z, rm.Z)
    z4 = _mm(z2, z2)
    return {
        "S^2 = Z": _meq(s2, rm.Z),
        "(ST)^3 = Z": _meq(st3, rm.Z),
        "Z^2 = (-1)^n": _meq(z2, _scalar_id(d, (-1) ** L.rank)),
        "Z^4 = 1": _meq(z4, _scalar_id(d, 1)),
    }


def _trace(m) -> CycloNum:
    acc = CycloNum.rational(0)
    for i in range(len(m)):
        acc = acc + m[i][i]
    return acc


def traces(L: Lattice) -> dict[str, dict]:
    """Traces of T, S, R = ST, ZR and Z with their closed forms.

    Each entry is ``{"value": CycloNum, "expected": CycloNum, "ok": bool}``.
    """
    rm = rep_matrices(L)
    n = L.rank
    n2 = L.info.n2
    R = _mm(rm.S, rm.T)
    ZR = _mm(rm.Z, R)
    tT = CycloNum.rational(0)
    for c in L.shadow:
        tT = tT + e_frac(-c.beta_mod1)
    expected = {
        "trT": tT,
        "trS": cyclo_root(8, n) * gauss_sum_chi(L, 2),
        "trR": cyclo_root(4, n),
        "trZR": cyclo_root(8, 3 * n) * gauss_sum_chi(L, -3),
        "trZ": cyclo_root(4, n) * ((-1) ** n2 * 2 ** (n - n2)),
    }
    values = {"trT": _trace(rm.T), "trS": _trace(rm.S), "trR": _trace(R),
              "trZR": _trace(ZR), "trZ": _trace(rm.Z)}
    return {k: {"value": values[k], "expected": expected[k], "ok": values[k] == expected[k]}
            for k in values}


# --- exact linear algebra over Q(zeta_M) -----------------------------------

def _normalize_row(row: list[CycloNum]) -> list[CycloNum]:
    g_num, g_den = 0, 1
    for x in row:
        if not x.is_zero():
            c = x.content()
            g_num = gcd(g_num, c.numerator)
            g_den = g_den * c.denominator // gcd(g_den, c.denominator)
    if g_num == 0:
        return row
    f = Fraction(g_den, g_num)
    return [x * f for x in row] if f != 1 else row


def _echelon(rows: list[list[CycloNum]], ncols: int) -> tuple[list[list[CycloNum]], list[int]]:
    """Fraction-free row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, len(rows)):
            a = rows[i][c]
            if a.is_zero():
                continue
            rows[i] = _normalize_row([pv * x - a * y for x, y in zip(rows[i], rows[r])])
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def cyclo_rank(rows: list[list[CycloNum]], ncols: int) -> int:
    return len(_echelon(rows, ncols)[1])


def cyclo_kernel(rows: list[list[CycloNum]], ncols: int) -> list[list[CycloNum]]:
    """Basis of the right kernel, found without field division."""
    ech, pivots = _echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    M = rows[0][0].M if rows and rows[0] else 1
    basis = []
    for f in free:
        x = [CycloNum.rational(0, M) for _ in range(ncols)]
        x[f] = CycloNum.rational(1, M)
        for i in range(len(pivots) - 1, -1, -1):
            p = pivots[i]
            row = ech[i]
            acc = CycloNum.rational(0, M)
            for j in range(p + 1, ncols):
                if not x[j].is_zero() and not row[j].is_zero():
                    acc = acc + row[j] * x[j]
            if acc.is_zero():
                continue
            pv = row[p]
            x = [v * pv if not v.is_zero() else v for v in x]
            x[p] = -acc
        basis.append(_normalize_row(x))
    return basis


# --- singular weight -------------------------------------------------------

def _support(L: Lattice, h: int) -> list[int]:
    target = Fraction(h % 24, 24)
    return [i for i, c in enumerate(L.shadow) if c.beta_mod1 == target]


def _singular_system(L: Lattice, h: int) -> tuple[list[list[CycloNum]], list[int]]:
    cols = _support(L, h)
    if not cols:
        return [], cols
    reps = [c.rep for c in L.shadow]
    pairs = [[beta_pair(L, reps[i], reps[j]) for j in cols] for i in range(len(reps))]
    sq = sqrt_positive_integer(L.det)
    M = lcm(8, sq.M, *(p.denominator for row in pairs for p in row))
    # S lambda = e_8(h) lambda, multiplied through by sqrt(det) e_8(-n)
    diag = (cyclo_root(8, h - L.rank) * sq).coerce(M)
    rows = []
    for i in range(len(reps)):
        row = [e_frac(p).coerce(M) for p in pairs[i]]
        if i in cols:
            k = cols.index(i)
            row[k] = row[k] - diag
        rows.append(row)
    return rows, cols


@lru_cache(maxsize=4096)
def singular_dimension(L: Lattice, h: int) -> int:
    """``dim J_{n/2, L}(eps^h)`` as the joint eigenspace dimension on W(L)."""
    rows, cols = _singular_system(L, h % 24)
    if not cols:
        return 0
    return len(cols) - cyclo_rank(rows, len(cols))


def singular_basis(L: Lattice, h: int) -> list[list[CycloNum]]:
    """Basis of the joint eigenspace as full W(L) coordinate vectors."""
    rows, cols = _singular_system(L, h % 24)
    if not cols:
        return []
    out = []
    for v in cyclo_kernel(rows, len(cols)):
        full = [CycloNum.rational(0) for _ in L.shadow]
        for k, i in enumerate(cols):
            full[i] = v[k]
        out.append(full)
    return out


def is_singular_vector(L: Lattice, h: int, lam: Sequence) -> bool:
    """Whether ``lam`` satisfies both eigen-equations for ``eps^h``."""
    rm = rep_matrices(L)
    vec = [x if isinstance(x, CycloNum) else CycloNum.rational(x) for x in lam]
    t_ev = e_frac(Fraction(-(h % 24), 24))
    s_ev = cyclo_root(8, h)
    for i, row in enumerate(rm.T):
        if row[i] * vec[i] != t_ev * vec[i]:
            return False
    for i, row in enumerate(rm.S):
        acc = CycloNum.rational(0)
        for a, b in zip(row, vec):
            if not b.is_zero():
                acc = acc + a * b
        if acc != s_ev * vec[i]:
            return False
    return True

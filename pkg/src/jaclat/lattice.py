"""Integral lattices given by Gram matrices.

Vectors are row vectors in the coordinates of the lattice basis, so
``beta_pair(L, x, y) = x G y^T`` and ``beta_value(L, x) = x G x^T / 2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from math import gcd
from typing import Iterable, Sequence

from . import _linalg as la

__all__ = [
    "LatticeError", "NonSymmetric", "NotPositiveDefinite", "Degenerate",
    "DimensionMismatch", "NotSemiDefinite",
    "Lattice", "LatticeInfo", "ShadowCoset",
    "make_lattice", "invariants_of", "shadow_reps", "even_sublattice",
    "direct_sum", "rescale", "radical_quotient", "beta_value", "beta_pair",
    "named_lattice", "lattice_from_json", "lattice_to_json", "n2_from_snf",
]


class LatticeError(ValueError):
    pass


class NonSymmetric(LatticeError):
    pass


class NotPositiveDefinite(LatticeError):
    pass


class Degenerate(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


class NotSemiDefinite(LatticeError):
    pass


Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class ShadowCoset:
    rep: Vector
    beta_mod1: Fraction
    order2: bool


@dataclass(frozen=True)
class LatticeInfo:
    det: int
    even: bool
    level: int
    n2: int
    elementary_divisors: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Lattice:
    """A non-degenerate integral lattice ``(Z^n, beta)``.

    Equality and hashing only look at the Gram matrix.
    """

    gram: tuple[tuple[int, ...], ...]
    name: str | None = None
    definiteness: str = "positive-definite"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        label = self.name or f"gram={[list(r) for r in self.gram]}"
        return f"Lattice({label})"

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def det(self) -> int:
        return abs(int(la.det(self.gram))) if self.rank else 1

    @cached_property
    def gram_inverse(self) -> tuple[Vector, ...]:
        return tuple(tuple(row) for row in la.inverse(self.gram)) if self.rank else ()

    @cached_property
    def info(self) -> LatticeInfo:
        return invariants_of(self)

    @cached_property
    def shadow(self) -> tuple[ShadowCoset, ...]:
        return tuple(shadow_reps(self))

    @cached_property
    def shadow_denominator(self) -> int:
        """Smallest d with d * sh(L) contained in Z^n."""
        return la.lcm(*(x.denominator for c in self.shadow for x in c.rep))

    def beta(self, x: Sequence) -> Fraction:
        return beta_value(self, x)

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        return beta_pair(self, x, y)


def _check_square(gram: Sequence[Sequence]) -> tuple[tuple[int, ...], ...]:
    rows = [list(r) for r in gram]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("Gram matrix must be square")
    out = []
    for r in rows:
        conv = []
        for x in r:
            if isinstance(x, bool) or int(x) != x:
                raise LatticeError(f"Gram entries must be integers, got {x!r}")
            conv.append(int(x))
        out.append(tuple(conv))
    for i in range(n):
        for j in range(i + 1, n):
            if out[i][j] != out[j][i]:
                raise NonSymmetric(f"entry ({i},{j}) differs from ({j},{i})")
    return tuple(out)


def make_lattice(gram: Sequence[Sequence[int]], *, positive_definite: bool = True,
                 name: str | None = None) -> Lattice:
    """Validate a Gram matrix and wrap it as a :class:`Lattice`."""
    g = _check_square(gram)
    if g and la.det(g) == 0:
        raise Degenerate("Gram matrix has zero determinant")
    if positive_definite and any(m <= 0 for m in la.leading_minors(g)):
        raise NotPositiveDefinite("a leading principal minor is not positive")
    return Lattice(g, name, "positive-definite" if positive_definite else "non-degenerate")


def beta_pair(L: Lattice, x: Sequence, y: Sequence) -> Fraction:
    n = L.rank
    if len(x) != n or len(y) != n:
        raise DimensionMismatch(f"expected vectors of length {n}")
    g = L.gram
    total = Fraction(0)
    for i in range(n):
        if x[i]:
            total += Fraction(x[i]) * sum(g[i][j] * Fraction(y[j]) for j in range(n) if y[j])
    return total


def beta_value(L: Lattice, x: Sequence) -> Fraction:
    return beta_pair(L, x, x) / 2


# --- invariants ------------------------------------------------------------

def _v2(x: Fraction) -> int:
    if x == 0:
        return 10**9
    num, den = x.numerator, x.denominator
    v = 0
    while num % 2 == 0:
        num //= 2
        v += 1
    while den % 2 == 0:
        den //= 2
        v -= 1
    return v


def _n2_jordan(gram: Sequence[Sequence[int]]) -> int:
    """Rank of the 2-adic unimodular part, by symmetric block splitting."""
    m = [[Fraction(x) for x in row] for row in gram]
    n2 = 0
    while m:
        size = len(m)
        best = None
        for i in range(size):
            v = _v2(m[i][i])
            if best is None or v < best[0]:
                best = (v, i, i)
        for i in range(size):
            for j in range(i + 1, size):
                v = _v2(m[i][j])
                if v < best[0]:
                    best = (v, i, j)
        v, i, j = best
        if i == j:
            block = [i]
        else:
            block = [i, j]
        rest = [t for t in range(size) if t not in block]
        # symmetric elimination: complement gets m_rest - m_rb m_bb^{-1} m_br
        mbb = [[m[a][b] for b in block] for a in block]
        inv = la.inverse(mbb)
        new = []
        for a in rest:
            row = []
            for b in rest:
                corr = sum(m[a][p] * inv[pi][qi] * m[q][b]
                           for pi, p in enumerate(block) for qi, q in enumerate(block))
                row.append(m[a][b] - corr)
            new.append(row)
        if v == 0:
            n2 += len(block)
        m = new
    return n2


def n2_from_snf(L: Lattice) -> int:
    """Cross-check of n2: number of odd elementary divisors."""
    return sum(1 for d in la.smith_diagonal(L.gram) if d % 2) if L.rank else 0


def _level(L: Lattice) -> int:
    ev, _ = even_sublattice(L)
    if ev.rank == 0:
        return 1
    q = ev.gram_inverse
    n = ev.rank
    dens = [q[i][j].denominator for i in range(n) for j in range(n) if i != j]
    dens += [(q[i][i] / 2).denominator for i in range(n)]
    return la.lcm(*dens)


def invariants_of(L: Lattice) -> LatticeInfo:
    """Determinant, parity, level, n2 and elementary divisors of ``L``."""
    if L.rank == 0:
        return LatticeInfo(1, True, 1, 0, ())
    if la.det(L.gram) == 0:
        raise Degenerate("Gram matrix has zero determinant")
    return LatticeInfo(
        det=L.det,
        even=L.is_even,
        level=_level(L),
        n2=_n2_jordan(L.gram),
        elementary_divisors=tuple(la.smith_diagonal(L.gram)),
    )


def _frac_mod1(v: Iterable[Fraction]) -> Vector:
    return tuple(x - (x.numerator // x.denominator) for x in v)


def shadow_reps(L: Lattice) -> list[ShadowCoset]:
    """Representatives of ``sh(L)/L`` with coordinates in ``[0, 1)``, sorted."""
    n = L.rank
    if n == 0:
        return [ShadowCoset((), Fraction(0), True)]
    if la.det(L.gram) == 0:
        raise Degenerate("Gram matrix has zero determinant")
    ginv = L.gram_inverse
    gens = [_frac_mod1(row) for row in ginv]
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = _frac_mod1(a + b for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    half_diag = [Fraction(L.gram[i][i], 2) for i in range(n)]
    r0 = la.vecmat(half_diag, ginv)
    reps = sorted({_frac_mod1(a + b for a, b in zip(v, r0)) for v in seen})
    out = []
    for r in reps:
        b = beta_value(L, r)
        out.append(ShadowCoset(r, b - (b.numerator // b.denominator),
                               all((2 * x).denominator == 1 for x in r)))
    return out


# --- constructions -----------------------------------------------------------

def even_sublattice(L: Lattice) -> tuple[Lattice, tuple[tuple[int, ...], ...]]:
    """Maximal even sublattice and the matrix whose rows are its basis in L."""
    n = L.rank
    odd = [i for i in range(n) if L.gram[i][i] % 2]
    if not odd:
        return L, tuple(tuple(r) for r in la.identity(n))
    first = odd[0]
    basis = []
    for j in range(n):
        row = [0] * n
        if j == first:
            row[j] = 2
        elif j in odd:
            row[j], row[first] = 1, -1
        else:
            row[j] = 1
        basis.append(row)
    g = la.matmul(la.matmul(basis, L.gram), la.transpose(basis))
    name = f"ev({L.name})" if L.name else None
    ev = Lattice(tuple(tuple(int(x) for x in r) for r in g), name, L.definiteness)
    return ev, tuple(tuple(r) for r in basis)


def direct_sum(L1: Lattice, L2: Lattice) -> Lattice:
    n1, n2 = L1.rank, L2.rank
    g = [list(r) + [0] * n2 for r in L1.gram] + [[0] * n1 + list(r) for r in L2.gram]
    name = f"{L1.name}+{L2.name}" if L1.name and L2.name else None
    flag = "positive-definite" if (L1.definiteness == L2.definiteness == "positive-definite") \
        else "non-degenerate"
    return Lattice(tuple(tuple(r) for r in g), name, flag)


def rescale(L: Lattice, a: int) -> Lattice:
    if int(a) != a or a < 1:
        raise LatticeError("rescaling factor must be a positive integer")
    name = f"({L.name})({a})" if L.name else None
    return Lattice(tuple(tuple(a * x for x in r) for r in L.gram), name, L.definiteness)


def _is_positive_semidefinite(g: Sequence[Sequence[int]]) -> bool:
    d = [[Fraction(x) for x in r] for r in g]
    n = len(d)
    active = list(range(n))
    # symmetric Gaussian elimination with zero-pivot checks
    while active:
        i = active[0]
        p = d[i][i]
        if p < 0:
            return False
        if p == 0:
            if any(d[i][j] != 0 for j in active):
                return False
            active = active[1:]
            continue
        for a in active[1:]:
            f = d[a][i] / p
            for b in active[1:]:
                d[a][b] -= f * d[i][b]
        active = active[1:]
    return True


def radical_quotient(gram: Sequence[Sequence[int]] | Lattice) -> Lattice:
    """Positive definite lattice ``L/R`` where ``R`` is the radical."""
    given = gram if isinstance(gram, Lattice) else None
    if given is not None:
        gram = given.gram
    g = _check_square(gram)
    if not _is_positive_semidefinite(g):
        raise NotSemiDefinite("Gram matrix is not positive semi-definite")
    if not g:
        return Lattice((), None)
    if la.det(g) != 0:
        # zero radical: keep the basis
        return given if given is not None else make_lattice(g)
    u, _, rank = la.row_echelon_int(g)
    basis = u[:rank]
    q = la.matmul(la.matmul(basis, g), la.transpose(basis))
    return make_lattice([[int(x) for x in r] for r in q])


# --- named lattices and JSON -----------------------------------------------

@lru_cache(maxsize=None)
def _named_data() -> dict:
    text = resources.files("jaclat").joinpath("data/lattices.json").read_text()
    return json.loads(text)


def _a_gram(n: int) -> list[list[int]]:
    return [[2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def _d_gram(n: int) -> list[list[int]]:
    # basis e1-e2, ..., e_{n-1}-e_n, e_{n-1}+e_n
    vecs = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        vecs.append(v)
    v = [0] * n
    v[n - 2], v[n - 1] = 1, 1
    vecs.append(v)
    return la.matmul(vecs, la.transpose(vecs))


def named_lattice(kind: str, n: int | None = None) -> Lattice:
    """Root lattices ``A_n``, ``D_n``, ``E_6..E_8`` and ``Z^n``.

    Small cases come from the packaged data file; larger ``A_n``, ``D_n``
    and ``Z^n`` are generated.
    """
    kind = kind.upper()
    data = _named_data()
    if kind == "E":
        key = f"E{n}"
        if key not in data:
            raise LatticeError(f"unknown lattice {key}")
        return make_lattice(data[key], name=key)
    if n is None or n < 1:
        raise LatticeError(f"{kind} needs a positive rank")
    key = f"{kind}{n}"
    if key in data:
        gram = data[key]
    elif kind == "A":
        gram = _a_gram(n)
    elif kind == "D":
        if n < 2:
            raise LatticeError("D_n needs n >= 2")
        gram = _d_gram(n)
    elif kind == "Z":
        gram = la.identity(n)
    else:
        raise LatticeError(f"unknown lattice {key}")
    name = "Z" if key == "Z1" else key
    return make_lattice(gram, name=name)


def lattice_to_json(L: Lattice) -> dict:
    out: dict = {"gram": [list(r) for r in L.gram]}
    if L.name:
        out["name"] = L.name
    return out


def lattice_from_json(obj: dict | str) -> Lattice:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return make_lattice(obj["gram"], name=obj.get("name"))


def gcd_vector(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g

"""Acceptance suites: table reproduction, representation identities, q-series identities."""

from __future__ import annotations

import itertools
import json
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import _linalg as la
from .cyclotomic import milgram_check
from .dimension import (EXACT, as_weight, dim_formula, dim_jacobi, eisenstein_count,
                        hp_b, hp_polynomial, stable_equiv_dim_check)
from .lattice import Lattice, direct_sum, make_lattice, named_lattice, rescale
from .qseries import (A2_IN_Z3, CATALOG, D3_IN_Z3, JacobiQExp, NotIsometric, QSeries,
                      check_L_invariance, explicit_eis4_A2_8, jacobi_mul, jacobi_scalar_mul,
                      named_form, pullback, reconstruct, series_E, series_eta_pow,
                      theta_decompose, theta_nullwert)
from .theta_rep import singular_dimension, traces, verify_relations

GOLDEN_ENV = "JACLAT_GOLDEN_DIR"


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title} ({self.seconds:.1f}s) {self.detail}".rstrip()

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3),
                "failures": [str(f) for f in self.failures[:20]]}


def golden_dir(path: str | os.PathLike | None = None) -> Path:
    if path:
        return Path(path)
    env = os.environ.get(GOLDEN_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("jaclat") / "golden"))


def load_golden(name: str, path=None) -> dict:
    with open(golden_dir(path) / name) as fh:
        return json.load(fh)


def lat(name: str) -> Lattice:
    from .expr import evaluate
    return evaluate(name)


# --- 1: Hilbert-Poincare polynomials ------------------------------------------

def check_table1(path=None) -> tuple[bool, list]:
    golden = load_golden("table1_hp.json", path)
    failures = []
    for name in ("A1", "A2", "A3", "D4", "D5", "E6", "E7"):
        L = lat(name)
        for parity in ("even", "odd"):
            res = hp_polynomial(L, 0, parity)
            want = {Fraction(w): c for w, c in golden[name][parity].items()}
            got = {w: c for w, c in res.coeffs.items() if c}
            if not res.complete or got != want:
                failures.append((name, parity, res.numerator_str(), want))
    return not failures, failures


# --- 2: A2 dimension table ------------------------------------------------------

def _a2_even_part(L: Lattice, k: Fraction, h: int) -> tuple[int, str]:
    """Dimension of the z-even subspace and its exactness label."""
    if (k - Fraction(h, 2)) % 2 != 0:
        # weight parity forces every form to be odd in z
        return 0, EXACT
    r = dim_jacobi(L, k, h)
    return int(r.value), r.exactness


def _odd_module_dim(k: Fraction, h: int) -> int:
    """``dim`` of ``eta^l M_* distjac_A2`` in weight k, character h (l = h - 8 mod 24)."""
    l = (h - 8) % 24
    w = k - 1 - Fraction(l, 2)
    if w.denominator != 1 or w < 0 or w % 2:
        return 0
    w = int(w)
    return w // 12 + (0 if w % 12 == 2 else 1)


def check_a2_table(path=None) -> tuple[bool, list]:
    golden = load_golden("a2_dimension_table.json", path)
    L = lat("A2")
    failures = []
    for h in range(24):
        row = golden["rows"].get(str(h), {})
        for ws in golden["weights"]:
            k = Fraction(ws)
            want = row.get(ws, 0)
            even = (k - Fraction(h, 2)) % 2 == 0
            if k >= 3 and even:
                got = dim_formula(L, k, h)
                if got != want:
                    failures.append((h, ws, "formula", got, want))
            got, label = _a2_even_part(L, k, h)
            if got != want or label != EXACT:
                failures.append((h, ws, "even part", got, label, want))
            if not even:
                r = dim_jacobi(L, k, h)
                odd = _odd_module_dim(k, h)
                if r.exactness != EXACT or int(r.value) != odd:
                    failures.append((h, ws, "odd module", r, odd))
    return not failures, failures


# --- 3, 4: singular classification ----------------------------------------------

def _is_square(m: int) -> bool:
    r = int(m ** 0.5 + 0.5)
    return any((r + d) ** 2 == m for d in (-1, 0, 1))


def check_rank1_singular() -> tuple[bool, list]:
    failures = []
    Z = named_lattice("Z", 1)
    for m in range(1, 26):
        L = rescale(Z, m) if m > 1 else Z
        for h in range(24):
            want = int((h == 3 and _is_square(m)) or (h == 1 and m % 3 == 0 and _is_square(m // 3)))
            got = singular_dimension(L, h)
            if got != want:
                failures.append((m, h, got, want))
    return not failures, failures


def check_unimodular_singular() -> tuple[bool, list]:
    failures = []
    lattices = [named_lattice("Z", n) for n in range(1, 9)] + [named_lattice("E", 8)]
    for L in lattices:
        for h in range(24):
            want = int((h - 3 * L.rank) % 24 == 0)
            got = singular_dimension(L, h)
            if got != want:
                failures.append((L.name, h, got, want))
    return not failures, failures


# --- 5, 6: representation --------------------------------------------------------

REP_SET = ("Z", "Z2", "Z(3)", "A2", "A3", "D4", "E6", "E7", "E8")


def check_representation() -> tuple[bool, list]:
    failures = []
    for name in REP_SET:
        L = lat(name)
        rel = verify_relations(L)
        for k, ok in rel.items():
            if not ok:
                failures.append((name, k))
        for k, t in traces(L).items():
            if not t["ok"]:
                failures.append((name, k, t["value"], t["expected"]))
    return not failures, failures


def random_grams(count: int, max_det: int = 40, seed: int = 20240607,
                 max_rank: int = 4) -> list[list[list[int]]]:
    """Random positive definite integral Gram matrices with ``det <= max_det``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_rank)
        B = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            B[i][i] = rng.choice([1, 1, 2])
        G = la.matmul(B, la.transpose(B))
        # occasionally add the identity to vary parity and determinant
        if rng.random() < 0.3:
            G = [[G[i][j] + (i == j) for j in range(n)] for i in range(n)]
        d = la.det(G)
        if 0 < d <= max_det and all(m > 0 for m in la.leading_minors(G)):
            out.append([[int(x) for x in r] for r in G])
    return out


def check_milgram(count: int = 50) -> tuple[bool, list]:
    failures = []
    for name in REP_SET:
        if not milgram_check(lat(name)):
            failures.append(name)
    for G in random_grams(count):
        if not milgram_check(make_lattice(G)):
            failures.append(G)
    return not failures, failures


# --- 7: integrality and recurrence ------------------------------------------------

NAMED_SET = ("Z", "Z2", "Z3", "Z(3)", "A1", "A2", "A3", "D4", "D5", "E6", "E7", "E8", "A2+Z")


def check_integrality(samples: int = 200, seed: int = 7) -> tuple[bool, list]:
    rng = random.Random(seed)
    pool = [lat(n) for n in NAMED_SET] + [make_lattice(G) for G in random_grams(30, seed=seed)]
    failures = []
    for _ in range(samples):
        L = rng.choice(pool)
        k = Fraction(L.rank, 2) + 2 + Fraction(rng.randint(0, 24), 2)
        h = rng.randrange(24)
        v = dim_formula(L, k, h)
        if v.denominator != 1 or v < 0:
            failures.append((L, k, h, v))
    for name in NAMED_SET:
        L = lat(name)
        base = Fraction(L.rank, 2) + 12
        for h in range(24):
            for j in range(8):
                k = base + Fraction(j, 2)
                b = hp_b(L, k, h)
                if b != 0:
                    failures.append(("b", name, k, h, b))
    return not failures, failures


# --- 8: q-series identities ----------------------------------------------------------

def triple_product_oracle(N: int) -> dict[tuple[Fraction, Fraction], int]:
    """``q^{1/8}(z^{1/2} - z^{-1/2}) prod (1-q^n)(1-q^n z)(1-q^n/z)`` as ``{(n, r): c}``."""
    poly: dict[tuple[int, int], int] = {(0, 0): 1}
    for m in range(1, N + 1):
        for fac in ({(0, 0): 1, (m, 0): -1}, {(0, 0): 1, (m, 1): -1}, {(0, 0): 1, (m, -1): -1}):
            nxt: dict[tuple[int, int], int] = {}
            for (a, b), c in poly.items():
                for (da, db), e in fac.items():
                    if a + da <= N:
                        key = (a + da, b + db)
                        nxt[key] = nxt.get(key, 0) + c * e
            poly = {k: v for k, v in nxt.items() if v}
    out: dict[tuple[Fraction, Fraction], int] = {}
    for (a, b), c in poly.items():
        for sh, s in ((Fraction(1, 2), 1), (Fraction(-1, 2), -1)):
            key = (a + Fraction(1, 8), b + sh)
            out[key] = out.get(key, 0) + s * c
    return {k: v for k, v in out.items() if v}


def e8_counts_oracle(N: int) -> list[int]:
    """Number of E8 vectors of norm 2m, m <= N, in the half-integer coordinate model.

    Uses one-dimensional theta series split by parity, independent of the
    lattice enumeration kernels.
    """
    M = 2 * N  # bound on sum of squares
    R = int(M ** 0.5) + 2
    te = [0] * (M + 1)
    to = [0] * (M + 1)
    for x in range(-R, R + 1):
        if x * x <= M:
            (te if x % 2 == 0 else to)[x * x] += 1
    # half-integers y + 1/2, tracked by 4 (y+1/2)^2 = (2y+1)^2 and parity of y
    M4 = 4 * M
    he = [0] * (M4 + 1)
    ho = [0] * (M4 + 1)
    for y in range(-R - 1, R + 1):
        s = (2 * y + 1) ** 2
        if s <= M4:
            (he if y % 2 == 0 else ho)[s] += 1

    def pw(a, b, top):
        plus = np.array([x + y for x, y in zip(a, b)], dtype=object)
        minus = np.array([x - y for x, y in zip(a, b)], dtype=object)
        p8 = np.array([1] + [0] * top, dtype=object)
        m8 = np.array([1] + [0] * top, dtype=object)
        for _ in range(8):
            p8 = np.convolve(p8, plus)[:top + 1]
            m8 = np.convolve(m8, minus)[:top + 1]
        return [(x + y) // 2 for x, y in zip(p8, m8)]

    ints = pw(te, to, M)
    halves = pw(he, ho, M4)
    return [ints[2 * m] + halves[8 * m] for m in range(N + 1)]


def e8_brute_force(N: int) -> list[int]:
    """Literal enumeration of a coordinate box; practical for ``N <= 3``."""
    counts = [0] * (N + 1)
    R = int((2 * N) ** 0.5)
    ints = np.arange(-R, R + 1)
    for pts in (ints, np.arange(-R, R + 1) + 0.5):
        grid = np.array(list(itertools.product(pts.tolist(), repeat=8)))
        ok = (np.round(grid.sum(axis=1)) % 2 == 0)
        nrm = (grid ** 2).sum(axis=1) / 2
        for m in range(N + 1):
            counts[m] += int(np.sum(ok & (np.abs(nrm - m) < 1e-9)))
    return counts


def iota2_sign(N: int = 6) -> int:
    """Sign s with ``iota2^* distjac_Z4 = s * theta(a) theta(b) theta(c) theta((z1+z2+z3)/2)``."""
    base = [[Fraction(x, 2) for x in row] for row in
            ((1, 1, -1, 1), (1, -1, 1, 1), (-1, 1, 1, 1))]
    A = la.matmul(D3_IN_Z3, base)
    prod = pullback(named_form("distjac_Z4", N), A, named_lattice("D", 3))
    phi = named_form("iota2_D3", N)
    if phi.equals(prod):
        return 1
    if phi.equals(prod.scale(-1)):
        return -1
    return 0


def qseries_identities(N: int = 30) -> dict[str, bool]:
    out: dict[str, bool] = {}
    th = named_form("theta", N)
    oracle = triple_product_oracle(N)
    got = {(n, Fraction(r[0], th.denom)): c for (n, r), c in th.coeffs.items()}
    want = {k: v for k, v in oracle.items() if k[0] <= N}
    out["Jacobi triple product"] = got == want

    lhs = jacobi_scalar_mul(series_eta_pow(1, N), pullback(th, [[2]]))
    rhs = jacobi_mul(named_form("theta_tilde", N), th)
    out["theta(2z) eta = theta_tilde theta"] = lhs.equals(rhs) and not lhs.is_zero()

    E4, E6 = series_E(4, 50), series_E(6, 50)
    out["E4^3 - E6^2 = 1728 eta^24"] = (E4 ** 3 - E6 ** 2).equals(series_eta_pow(24, 50) * 1728)

    a2 = named_form("distjac_A2", N)
    triple = pullback(named_form("distjac_Z3", N + 1), A2_IN_Z3, named_lattice("A", 2))
    rhs = jacobi_scalar_mul(series_eta_pow(-1, N + 1), triple).truncate(N)
    out["distjac_A2 = eta^-1 theta theta theta"] = a2.equals(rhs) and rhs.prec >= N

    e4 = named_form("eis4_A2_8", N)
    out["12 delta Eis2 = explicit Eis4"] = e4.equals(explicit_eis4_A2_8(N))

    e2 = named_form("eis2_A2_8", N)
    e40, e60 = named_form("eis4_A2_0", N), named_form("eis6_A2_0", N)
    E4, E6 = series_E(4, N), series_E(6, N)
    eta16 = series_eta_pow(16, N) * 1728
    row3 = (jacobi_scalar_mul(eta16, e2) + jacobi_scalar_mul(E6, e40)
            - jacobi_scalar_mul(E4, e60))
    row4 = (jacobi_scalar_mul(eta16, e4) - jacobi_scalar_mul(E4 * E4, e40)
            + jacobi_scalar_mul(E6, e60))
    out["syzygy row 3"] = row3.is_zero() and row3.prec >= N
    out["syzygy row 4"] = row4.is_zero() and row4.prec >= N

    null = theta_nullwert(named_form("distjac_E8", 0).index, [1], N)
    counts = e8_counts_oracle(N)
    frozen = load_golden("e8_theta_counts.json")["counts"][:N + 1]
    small = e8_brute_force(3)
    out["E8 nullwert vs enumeration oracle"] = (
        [null.coefficient(m) for m in range(N + 1)] == counts == frozen
        and counts[:4] == small)
    return out


def check_qseries(N: int = 30) -> tuple[bool, list]:
    res = qseries_identities(N)
    failures = [k for k, v in res.items() if not v]
    return not failures, failures


# --- 9: roundtrips -------------------------------------------------------------------

ROUNDTRIP_PREC = {"distjac_Z7": 3, "distjac_Z8": 3, "distjac_E8": 3}


def check_roundtrips(N: int = 5) -> tuple[bool, list]:
    failures = []
    for name in CATALOG:
        phi = named_form(name, ROUNDTRIP_PREC.get(name, N))
        if phi.is_zero():
            failures.append((name, "zero"))
            continue
        if not check_L_invariance(phi):
            failures.append((name, "L-invariance"))
            continue
        if phi.validate():
            failures.append((name, "keys", phi.validate()[:3]))
        back = reconstruct(theta_decompose(phi), phi.index, phi.prec)
        if not back.equals(phi) or back.prec < phi.prec:
            failures.append((name, "reconstruction"))
    try:
        pullback(named_form("distjac_Z2", 2), [[1, 1]], named_lattice("Z", 1))
        failures.append(("pullback", "non-isometric matrix accepted"))
    except NotIsometric:
        pass
    return not failures, failures


# --- 10: stable equivalence ------------------------------------------------------------

STABLE_PAIRS = (("A2", "A2+Z"), ("Z8", "E8"), ("Z", "Z+E8"))


def check_stable_equivalence(kmax: int = 15) -> tuple[bool, list]:
    failures = []
    ks = [Fraction(j, 2) for j in range(4, 2 * kmax + 1)]
    for a, b in STABLE_PAIRS:
        L1, L2 = lat(a), lat(b)
        for h in range(24):
            if not stable_equiv_dim_check(L1, L2, h, ks):
                failures.append((a, b, h))
    return not failures, failures


# --- 11: Eisenstein counts ----------------------------------------------------------------

def check_eisenstein() -> tuple[bool, list]:
    failures = []
    # maximal even lattices: one Eisenstein series for even k, none for odd k
    for name in ("E8", "A2", "D4", "E6", "E7"):
        L = lat(name)
        start = int(Fraction(L.rank, 2) + 3)
        for k in range(start, start + 10):
            want = 1 if k % 2 == 0 else 0
            if eisenstein_count(L, k, 0) != want:
                failures.append((name, k, eisenstein_count(L, k, 0), want))
    # Z^n with n not divisible by 8, trivial character
    for n in range(1, 12):
        if n % 8 == 0:
            continue
        L = named_lattice("Z", n)
        for k in range(n // 2 + 3, n // 2 + 9):
            for kk in (Fraction(k), Fraction(2 * k + 1, 2)):
                if eisenstein_count(L, kk, 0) != 0:
                    failures.append((f"Z{n}", kk))
    # level coprime to the denominator of h/24 (h not 0 mod 24)
    for name in ("A2", "E6", "Z(5)", "A4", "Z(7)", "D4", "E7"):
        L = lat(name)
        lev = L.info.level
        for h in range(1, 24):
            den = Fraction(h, 24).denominator
            if np.gcd(lev, den) != 1:
                continue
            for k in range(L.rank // 2 + 3, L.rank // 2 + 7):
                for kk in (Fraction(k), Fraction(2 * k + 1, 2)):
                    if eisenstein_count(L, kk, h) != 0:
                        failures.append((name, h, kk))
    return not failures, failures


# --- registry -------------------------------------------------------------------------------

CRITERIA: dict[int, tuple[str, Callable[[], tuple[bool, list]]]] = {
    1: ("Table 1 Hilbert-Poincare polynomials", check_table1),
    2: ("A2 dimension table", check_a2_table),
    3: ("rank-1 singular classification", check_rank1_singular),
    4: ("unimodular singular classification", check_unimodular_singular),
    5: ("representation relations and traces", check_representation),
    6: ("Milgram formula", check_milgram),
    7: ("integrality and HP recurrence", check_integrality),
    8: ("q-series identities at N = 30", check_qseries),
    9: ("decomposition roundtrips and isometry check", check_roundtrips),
    10: ("stable equivalence of dimensions", check_stable_equivalence),
    11: ("Eisenstein counts", check_eisenstein),
}

SUITES = {
    "tables": (1, 2, 3, 4, 7, 10, 11),
    "representation": (5, 6),
    "identities": (8, 9),
    "all": tuple(CRITERIA),
}


def run_criterion(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        ok, failures = fn()
        detail = "" if ok else f"{len(failures)} failure(s)"
    except Exception as exc:  # report, do not hide
        ok, failures, detail = False, [repr(exc)], f"error: {exc!r}"
    return CriterionResult(number, title, ok, detail, time.perf_counter() - t0, failures)


def run_suite(name: str = "all") -> list[CriterionResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return [run_criterion(n) for n in SUITES[name]]

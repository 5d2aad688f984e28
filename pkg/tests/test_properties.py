from fractions import Fraction as F

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from jaclat.cyclotomic import cyclo_root, gauss_sum_chi, milgram_check
from jaclat.dimension import dim_formula
from jaclat.expr import evaluate, parse_lattice_expr, to_text
from jaclat.lattice import direct_sum, make_lattice, radical_quotient
from jaclat.qseries import QSeries
from jaclat.verify import random_grams

GRAMS = [make_lattice(g) for g in random_grams(40, max_det=40)]
SETTINGS = settings(max_examples=30, deadline=None, suppress_health_check=list(HealthCheck))


@SETTINGS
@given(st.sampled_from(GRAMS), st.integers(0, 23), st.integers(0, 6))
def test_integrality(L, h, j):
    k = F(L.rank, 2) + 2 + j + F((h + L.rank) % 2, 2)
    v = dim_formula(L, k, h)
    assert v.denominator == 1 and v >= 0


@SETTINGS
@given(st.sampled_from(GRAMS))
def test_milgram_random(L):
    assert milgram_check(L)


@SETTINGS
@given(st.sampled_from(GRAMS), st.sampled_from(GRAMS), st.integers(1, 5))
def test_gauss_multiplicative(L1, L2, t):
    S = direct_sum(L1, L2)
    assert gauss_sum_chi(S, t) == gauss_sum_chi(L1, t) * gauss_sum_chi(L2, t)
    assert gauss_sum_chi(L1, t).conj() == gauss_sum_chi(L1, -t)


@SETTINGS
@given(st.sampled_from(GRAMS))
def test_radical_quotient_idempotent(L):
    q = radical_quotient(L)
    assert radical_quotient(q) == q


@SETTINGS
@given(st.integers(1, 60), st.integers(-100, 100), st.integers(-100, 100))
def test_root_multiplication(M, a, b):
    assert cyclo_root(M, a) * cyclo_root(M, b) == cyclo_root(M, a + b)
    assert cyclo_root(M, a).conj() == cyclo_root(M, -a)


atoms = st.one_of(
    st.builds(lambda n: f"Z{n}" if n > 1 else "Z", st.integers(1, 4)),
    st.builds(lambda n: f"A{n}", st.integers(1, 4)),
    st.builds(lambda n: f"D{n}", st.integers(2, 5)),
    st.sampled_from(["E6", "E7", "E8"]),
)
terms = st.one_of(atoms, st.builds(lambda a, f: f"{a}({f})", atoms, st.integers(2, 5)))


@SETTINGS
@given(st.lists(terms, min_size=1, max_size=3))
def test_expr_roundtrip(parts):
    text = "+".join(parts)
    e = parse_lattice_expr(text)
    assert to_text(e) == text
    assert evaluate(text).rank == sum(evaluate(p).rank for p in parts)


@SETTINGS
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8).filter(lambda c: c[0] != 0))
def test_series_inverse(coeffs):
    a = QSeries.from_list(coeffs, prec=6)
    assert (a * a.inverse()).equals(QSeries.one(6))

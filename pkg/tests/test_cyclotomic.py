import cmath
from fractions import Fraction as F

import pytest

from jaclat.cyclotomic import (CycloNum, cyclo_root, cyclotomic_poly, e_frac, gauss_sum_chi,
                               milgram_check, rational_reconstruct, sqrt_positive_integer)


def test_root_arithmetic():
    i = cyclo_root(4, 1)
    assert i * i == cyclo_root(2, 1) == -1
    z8 = cyclo_root(8, 1)
    re = z8.real_part()
    assert abs(re.to_complex() - 2 ** 0.5 / 2) < 1e-12
    s = cyclo_root(3, 1) + cyclo_root(3, 2)
    assert s.is_rational() and s.to_rational() == -1


def test_conj_is_involution_and_inverse():
    x = cyclo_root(12, 1) * 3 + cyclo_root(12, 5) - F(1, 2)
    assert x.conj().conj() == x
    assert x * x.inverse() == 1
    assert abs(x.to_complex() - (3 * cmath.exp(2j * cmath.pi / 12) + cmath.exp(10j * cmath.pi / 12) - 0.5)) < 1e-12


def test_cyclotomic_poly():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("d", range(1, 60))
def test_sqrt(d):
    s = sqrt_positive_integer(d)
    assert s * s == d
    assert s.to_complex().real > 0


def test_sqrt_examples():
    assert sqrt_positive_integer(1) == 1
    assert sqrt_positive_integer(4) == 2
    assert sqrt_positive_integer(3) - (cyclo_root(12, 1) + cyclo_root(12, 11)) == 0


def test_gauss_sums(lat):
    assert gauss_sum_chi(lat("A2"), 1) == cyclo_root(8, 2)
    assert gauss_sum_chi(lat("Z"), 1) == cyclo_root(8, 1)
    assert gauss_sum_chi(lat("Z"), 2) == cyclo_root(4, 1)


@pytest.mark.parametrize("name", ["A2", "E8", "D4", "E6", "E7", "Z(3)"] + [f"Z{n}" for n in range(1, 9)])
def test_milgram(lat, name):
    assert milgram_check(lat(name))


def test_json_roundtrip():
    x = cyclo_root(24, 5) - F(7, 3)
    assert CycloNum.from_json(x.to_json()) == x


def test_e_frac():
    assert e_frac(F(1, 4)) == cyclo_root(4, 1)
    assert e_frac(F(3, 2)) == -1


def test_rational_reconstruct():
    assert rational_reconstruct(2 / 3 + 1e-13, 100) == F(2, 3)

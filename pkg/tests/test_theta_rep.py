from fractions import Fraction as F

import pytest

from jaclat.cyclotomic import cyclo_root, e_frac
from jaclat.theta_rep import (RepMatrices, is_singular_vector, rep_matrices, singular_basis,
                              singular_dimension, traces, verify_relations)
from jaclat.verify import load_golden

SET = ["Z", "Z2", "Z(3)", "A2", "A3", "D4", "E6", "E7", "E8"]


def test_rank_one_matrices(lat):
    rm = rep_matrices(lat("Z"))
    assert rm.T[0][0] == e_frac(F(-1, 8))
    assert rm.S[0][0] == cyclo_root(8, 3)


def test_unimodular_scalars(lat):
    rm = rep_matrices(lat("E8"))
    assert rm.T[0][0] == 1
    s = rm.S[0][0]
    assert s ** 4 == 1


@pytest.mark.parametrize("name", SET)
def test_relations_and_traces(lat, name):
    L = lat(name)
    assert all(verify_relations(L).values())
    assert all(t["ok"] for t in traces(L).values())


def test_trace_examples(lat):
    assert traces(lat("A2"))["trZ"]["value"] == -1
    assert traces(lat("Z"))["trR"]["value"] == cyclo_root(4, 1)
    assert traces(lat("Z"))["trS"]["value"] == cyclo_root(8, 3)


def test_singular_examples(lat):
    assert singular_dimension(lat("Z"), 3) == 1
    assert singular_dimension(lat("Z(3)"), 1) == 1
    assert all(singular_dimension(lat("Z(3)"), h) == 0 for h in range(24) if h != 1)
    assert singular_dimension(lat("A2"), 8) == 1
    assert [singular_dimension(lat("E8"), h) for h in range(24)] == [1] + [0] * 23


def test_singular_basis_vectors(lat):
    L = lat("A2")
    (v,) = singular_basis(L, 8)
    assert is_singular_vector(L, 8, v)
    assert is_singular_vector(L, 8, [0, 1, -1])
    assert not is_singular_vector(L, 8, [1, 0, 0])


@pytest.mark.parametrize("name,file", [("A2", "rep_A2.json"), ("Z(3)", "rep_Z3.json")])
def test_rep_matrix_golden(lat, name, file):
    frozen = RepMatrices.from_json(load_golden(file))
    rm = rep_matrices(lat(name))
    for a, b in ((rm.T, frozen.T), (rm.S, frozen.S), (rm.Z, frozen.Z)):
        assert all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))

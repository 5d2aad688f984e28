from fractions import Fraction as F

import pytest

from jaclat.lattice import (Degenerate, DimensionMismatch, NonSymmetric, NotPositiveDefinite,
                            NotSemiDefinite, beta_pair, beta_value, direct_sum, even_sublattice,
                            invariants_of, lattice_from_json, lattice_to_json, make_lattice,
                            n2_from_snf, named_lattice, radical_quotient, rescale, shadow_reps)


def test_make_lattice_examples():
    A2 = make_lattice([[2, 1], [1, 2]])
    assert A2.det == 3
    Z = make_lattice([[1]])
    assert not Z.is_even
    with pytest.raises(Degenerate):
        make_lattice([[1, 1], [1, 1]])
    with pytest.raises(NonSymmetric):
        make_lattice([[2, 1], [0, 2]])
    with pytest.raises(NotPositiveDefinite):
        make_lattice([[1, 2], [2, 1]])


@pytest.mark.parametrize("name,det,even,level,n2", [
    ("Z", 1, False, 8, 1),
    ("A2", 3, True, 3, 2),
    ("D4", 4, True, 2, 2),
    ("E8", 1, True, 1, 8),
    ("E7", 2, True, 4, 6),
    ("Z(3)", 3, False, 24, 1),
])
def test_invariants(lat, name, det, even, level, n2):
    inf = invariants_of(lat(name))
    assert (inf.det, inf.even, inf.level, inf.n2) == (det, even, level, n2)


def test_d4_level_follows_definition(lat):
    # l * beta(x) integral on the dual of D4: the dual has norms 1 mod 2
    D4 = lat("D4")
    assert all((2 * c.beta_mod1).denominator == 1 for c in D4.shadow)
    assert D4.info.level == 2


def test_odd_rank_odd_lattice_level_divisible_by_4(lat):
    for name in ("Z", "Z3", "Z(3)", "Z(5)+A2", "Z5"):
        assert lat(name).info.level % 4 == 0


def test_shadow_examples(lat):
    (c,) = shadow_reps(lat("Z"))
    assert c.rep == (F(1, 2),) and c.beta_mod1 == F(1, 8)
    z3 = shadow_reps(lat("Z(3)"))
    assert [c.rep[0] for c in z3] == [F(1, 6), F(1, 2), F(5, 6)]
    assert [c.beta_mod1 for c in z3] == [F(1, 24), F(9, 24), F(1, 24)]
    assert sorted(c.beta_mod1 for c in lat("A2").shadow) == [0, F(1, 3), F(1, 3)]


@pytest.mark.parametrize("name", ["Z", "Z2", "A2", "A3", "D4", "D5", "E6", "E7", "Z(3)", "A2+Z(2)"])
def test_shadow_invariants(lat, name):
    L = lat(name)
    assert len(L.shadow) == L.det
    order2 = sum(c.order2 for c in L.shadow)
    assert order2 == 2 ** (L.rank - L.info.n2)
    assert L.info.n2 == n2_from_snf(L)
    from math import prod
    assert prod(L.info.elementary_divisors) == L.det
    for c in L.shadow:
        for i in range(L.rank):
            e = [0] * L.rank
            e[i] = 1
            assert (L.pair(c.rep, e) - L.beta(e)).denominator == 1


def test_constructions(lat):
    ev, basis = even_sublattice(lat("Z3"))
    assert ev.det == 4 and ev.is_even
    assert sorted(invariants_of(ev).elementary_divisors) == [1, 1, 4]
    assert rescale(lat("Z"), 3).gram == ((3,),)
    s = direct_sum(lat("A2"), lat("Z"))
    assert s.gram == ((2, 1, 0), (1, 2, 0), (0, 0, 1)) and s.det == 3


def test_radical_quotient():
    assert radical_quotient([[1, 1], [1, 1]]).gram == ((1,),)
    A2 = named_lattice("A", 2)
    assert radical_quotient(A2) == A2
    assert radical_quotient([[0, 0], [0, 0]]).rank == 0
    with pytest.raises(NotSemiDefinite):
        radical_quotient([[1, 2], [2, 1]])


def test_beta(lat):
    assert beta_value(lat("Z"), [F(1, 2)]) == F(1, 8)
    assert beta_value(lat("Z(3)"), [F(1, 6)]) == F(1, 24)
    assert beta_value(lat("A2"), [F(2, 3), F(-1, 3)]) == F(1, 3)
    assert beta_pair(lat("A2"), [1, 0], [0, 1]) == 1
    with pytest.raises(DimensionMismatch):
        beta_value(lat("A2"), [1])


def test_named_lattices():
    assert named_lattice("A", 2).gram == ((2, 1), (1, 2))
    for n in range(2, 9):
        assert named_lattice("D", n).det == 4
        assert named_lattice("A", n).det == n + 1
    assert [named_lattice("E", n).det for n in (6, 7, 8)] == [3, 2, 1]
    assert named_lattice("A", 12).det == 13


def test_json_roundtrip(lat):
    L = lat("E7")
    assert lattice_from_json(lattice_to_json(L)) == L


def test_radical_quotient_idempotent():
    g = [[2, 2, 1], [2, 2, 1], [1, 1, 3]]
    q = radical_quotient(g)
    assert q.rank == 2 and radical_quotient(q) == q

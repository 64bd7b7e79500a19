from __future__ import annotations

import random
from fractions import Fraction as F

from strataring.algebra import FormalSum, multiply
from strataring.enumeration import decorated_basis, top_degree
from strataring.integrals import integrate_sum
from strataring.pairing import (
    gram,
    kernel_basis,
    kind_for_space,
    matrix_rank,
    null_space,
    rank,
    rank_table,
    verify_relation,
)
from conftest import dec


def test_point_moduli_gram():
    m = gram(0, 3, 0, "mbar")
    assert m.entries == [[F(1)]]
    assert rank(m) == 1


def test_genus_two_codim_one_gram():
    m = gram(2, 0, 1, "mbar")
    assert (len(m.rows), len(m.cols)) == (2, 2)
    assert rank(m) == 2


def test_matrix_rank_edge_cases():
    assert matrix_rank([]) == 0
    assert matrix_rank([[F(0), F(0)]]) == 0
    assert matrix_rank([[F(1), F(0)], [F(0), F(5)]]) == 2
    assert matrix_rank([[F(1, 3), F(2, 3)], [F(2), F(4)]]) == 1


def test_null_space_primitive_integer_vectors():
    basis = null_space([[F(1), F(2), F(3)]])
    assert len(basis) == 2
    for v in basis:
        assert v[0] * 1 + v[1] * 2 + v[2] * 3 == 0
        assert all(x.denominator == 1 for x in v)


def test_kernel_roundtrip_property():
    m = gram(3, 1, 2, "ct")
    vectors = kernel_basis(m)
    assert len(vectors) == len(m.rows) - rank(m)
    for v in vectors:
        rel = FormalSum(3, 1)
        for c, d in zip(v, m.rows):
            rel = rel + FormalSum.unit(d).scale(c)
        assert verify_relation(rel, 3, 1, "ct").passed


def test_gram_transpose_symmetry():
    g, n, space = 2, 1, "mbar"
    top = top_degree(space, g, n)
    m1 = gram(g, n, 1, space)
    m2 = gram(g, n, top - 1, space)
    assert [list(r) for r in zip(*m1.entries)] == m2.entries


def test_self_pairing_matrix_is_symmetric():
    m = gram(2, 1, 2, "mbar")
    assert m.entries == [list(r) for r in zip(*m.entries)]


def test_rank_invariant_under_scaling_a_basis_element():
    m = gram(2, 0, 1, "mbar")
    scaled = [row[:] for row in m.entries]
    scaled[0] = [F(7, 3) * x for x in scaled[0]]
    assert matrix_rank(scaled) == matrix_rank(m.entries)


def test_rank_table_symmetry():
    for g, n, space in [(2, 0, "mbar"), (2, 1, "ct"), (4, 0, "rt")]:
        ranks = rank_table(g, n, space)
        assert ranks == ranks[::-1] or all(
            ranks[k] == ranks[len(ranks) - 1 - k] for k in range(len(ranks))
        )


def test_verify_relation_trivial_cases():
    assert verify_relation(FormalSum(2, 1), 2, 1, "ct").passed
    # a single basis class does not pair to zero with everything
    d = decorated_basis(2, 1, 1, "ct")[0]
    rep = verify_relation(FormalSum.unit(d), 2, 1, "ct")
    assert not rep.passed and rep.failures()


def test_pairing_values_match_direct_integration():
    rng = random.Random(9)
    g, n, space = 2, 1, "mbar"
    top = top_degree(space, g, n)
    k = 2
    m = gram(g, n, k, space)
    for _ in range(5):
        i = rng.randrange(len(m.rows))
        j = rng.randrange(len(m.cols))
        direct = integrate_sum(
            multiply(FormalSum.unit(m.rows[i]), FormalSum.unit(m.cols[j])),
            kind_for_space(space),
        )
        assert m.entries[i][j] == direct

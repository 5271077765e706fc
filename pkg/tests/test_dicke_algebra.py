from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dicke_npt import oracle
from dicke_npt.dicke_algebra import (
    bipartite_operator,
    dicke_ket,
    embed_dense,
    exact_sqrt,
    partial_transpose,
    reduced_state,
    schmidt_coefficient,
    schmidt_decomposition,
)
from dicke_npt.limits import DenseLimitError
from dicke_npt.multiindex import enumerate_full, enumerate_restricted, sub


def test_schmidt_coefficient_worked_example():
    assert schmidt_coefficient((1, 2), (1, 1)) == Fraction(2, 3)
    assert schmidt_coefficient((1, 2), (0, 2)) == Fraction(1, 3)
    assert schmidt_coefficient((3, 1, 2), (3, 1, 2)) == 1


@pytest.mark.parametrize("part", [(2, 0), (0, 3), (1, 1, 0)])
def test_schmidt_coefficient_rejects(part):
    with pytest.raises(ValueError):
        schmidt_coefficient((1, 2), part)


def test_schmidt_decomposition_examples():
    assert schmidt_decomposition((1, 2), 2) == [((1, 1), Fraction(2, 3)), ((0, 2), Fraction(1, 3))]
    assert schmidt_decomposition((4, 0, 0), 3) == [((3, 0, 0), Fraction(1))]
    got = schmidt_decomposition((2, 2), 2)
    assert got == [((2, 0), Fraction(1, 6)), ((1, 1), Fraction(4, 6)), ((0, 2), Fraction(1, 6))]
    sv2 = np.sort(oracle.schmidt_singular_values((2, 2), 2) ** 2)[::-1]
    assert np.allclose(sv2[:3], [4 / 6, 1 / 6, 1 / 6], atol=1e-12)
    assert np.allclose(sv2[3:], 0, atol=1e-12)


@pytest.mark.parametrize("m", [0, 3])
def test_schmidt_decomposition_rejects_m(m):
    with pytest.raises(ValueError):
        schmidt_decomposition((1, 2), m)


def test_reduced_state_examples():
    assert reduced_state((1, 2), 2).weights == {(1, 1): Fraction(2, 3), (0, 2): Fraction(1, 3)}
    assert reduced_state((1, 2), 3).weights == {(1, 2): 1}
    third = Fraction(1, 3)
    assert reduced_state((1, 1, 1), 1).weights == {(1, 0, 0): third, (0, 1, 0): third, (0, 0, 1): third}
    rho = oracle.reduced_dicke_matrix((1, 1, 1), 1)
    assert np.allclose(rho, np.eye(3) / 3, atol=1e-12)


@pytest.mark.parametrize("m", [0, 4])
def test_reduced_state_rejects(m):
    with pytest.raises(ValueError):
        reduced_state((1, 2), m)


occupation = st.lists(st.integers(0, 3), min_size=1, max_size=4).filter(lambda x: sum(x) >= 1)


@given(occupation, st.data())
def test_normalization_and_symmetry(parent, data):
    m = data.draw(st.integers(1, sum(parent)))
    st_ = reduced_state(parent, m)
    assert st_.trace() == 1
    assert set(st_.weights) == set(enumerate_restricted(m, parent))
    for part, w in st_.weights.items():
        assert 0 < w <= 1
        assert w == schmidt_coefficient(parent, sub(parent, part))


def test_bipartite_operator_two_qubits():
    op = bipartite_operator((1, 2), 2, 1)
    a = op.to_array()
    assert a.shape == (4, 4)
    nonzero_rows = np.flatnonzero(np.abs(a).sum(axis=1))
    assert len(nonzero_rows) == 3
    assert op.trace() == 1
    assert np.linalg.matrix_rank(a, tol=1e-12) == 2
    # hand expansion: 2/3 |D11><D11| + 1/3 |D02><D02| in the pair basis
    d11 = np.zeros(4)
    d11[op.flat((1, 0), (0, 1))] = d11[op.flat((0, 1), (1, 0))] = 1 / math.sqrt(2)
    d02 = np.zeros(4)
    d02[op.flat((0, 1), (0, 1))] = 1
    assert np.allclose(a, 2 / 3 * np.outer(d11, d11) + 1 / 3 * np.outer(d02, d02), atol=1e-15)


def test_bipartite_operator_product_state_is_projector():
    a = bipartite_operator((0, 4, 0), 3, 1).to_array()
    assert np.allclose(a @ a, a)
    assert np.isclose(np.trace(a), 1)


def test_bipartite_operator_trace_exact():
    assert bipartite_operator((2, 2), 3, 1).trace() == 1


@pytest.mark.parametrize("k", [0, 2])
def test_bipartite_operator_rejects_k(k):
    with pytest.raises(ValueError):
        bipartite_operator((1, 2), 2, k)


@given(occupation.filter(lambda x: sum(x) >= 2), st.data())
def test_operator_marginals(parent, data):
    m = data.draw(st.integers(2, sum(parent)))
    k = data.draw(st.integers(1, m - 1))
    op = bipartite_operator(parent, m, k)
    assert op.trace_right() == reduced_state(parent, k).weights
    assert op.trace_left() == reduced_state(parent, m - k).weights
    a = op.to_array()
    assert np.array_equal(a, a.T)


def test_partial_transpose_properties():
    op = bipartite_operator((2, 1, 1), 3, 1)
    twice = partial_transpose(partial_transpose(op))
    assert twice.entries == op.entries
    pt = partial_transpose(op)
    assert pt.trace() == op.trace()
    a = pt.to_array()
    assert np.array_equal(a, a.T)


def test_partial_transpose_fixes_diagonal():
    op = bipartite_operator((3, 0), 3, 1)
    assert partial_transpose(op).entries == op.entries


def test_partial_transpose_two_qubit_min_eigenvalue():
    pt = partial_transpose(bipartite_operator((1, 2), 2, 1))
    lam = np.linalg.eigvalsh(pt.to_array())[0]
    assert abs(lam - (1 - math.sqrt(5)) / 6) < 1e-12
    dense = oracle.dense_pt_spectrum((1, 2), 2, 1)[0]
    assert abs(lam - dense) < 1e-12


def test_dicke_ket_worked_example():
    v = dicke_ket((1, 1))
    expected = np.zeros(4)
    expected[0b01] = expected[0b10] = 1 / math.sqrt(2)
    assert np.allclose(v, expected)
    e = dicke_ket((0, 0, 3))
    assert e[26] == 1 and np.count_nonzero(e) == 1


def test_embed_matches_oracle_w_state():
    rho = oracle.reduced_dicke_matrix((1, 2), 2)
    assert np.max(np.abs(embed_dense(reduced_state((1, 2), 2)) - rho)) <= 1e-12
    assert np.max(np.abs(embed_dense(bipartite_operator((1, 2), 2, 1)) - rho)) <= 1e-12


def test_embed_single_occupation_is_basis_projector():
    mat = embed_dense(reduced_state((0, 3), 2))
    expected = np.zeros((4, 4))
    expected[3, 3] = 1
    assert np.array_equal(mat, expected)


def test_embed_respects_limit():
    with pytest.raises(DenseLimitError) as info:
        embed_dense(reduced_state((2, 2, 2), 6), limit=100)
    assert info.value.dimension == 729


def test_exact_sqrt():
    assert exact_sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert exact_sqrt(Fraction(2)) is None
    assert exact_sqrt(Fraction(-1)) is None


@pytest.mark.parametrize("parent", [(1, 2), (2, 2), (1, 1, 1), (2, 0, 1), (1, 2, 1)])
def test_embedded_partial_transpose_matches_dense(parent):
    n = sum(parent)
    d = len(parent)
    for m in range(2, n + 1):
        rho = oracle.reduced_dicke_matrix(parent, m)
        for k in range(1, m):
            pt = embed_dense(partial_transpose(bipartite_operator(parent, m, k)))
            assert np.max(np.abs(pt - oracle.dense_partial_transpose(rho, d, k, m=m))) <= 1e-12

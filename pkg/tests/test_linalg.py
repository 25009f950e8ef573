import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddvv_forge.errors import DegenerateMetric, DependentProtected, NotSymmetric
from ddvv_forge.jets import Jet
from ddvv_forge.linalg import gram_schmidt, smallest_eig, solve2, sym_eigen


def test_identity_eigen():
    np.testing.assert_allclose(sym_eigen(np.eye(3)).values, [1, 1, 1])


def test_diagonal_sorted_descending():
    e = sym_eigen(np.diag([2.0, -2.0, 0.0]))
    np.testing.assert_allclose(e.values, [2, 0, -2])
    np.testing.assert_allclose(np.abs(e.vectors), np.eye(3)[:, [0, 2, 1]], atol=1e-15)


def test_two_by_two_offdiagonal():
    # characteristic polynomial t^2 - mu^2
    e = sym_eigen([[0.0, 2.0], [2.0, 0.0]])
    np.testing.assert_allclose(e.values, [2, -2])
    v = e.vectors * np.sign(e.vectors[0])
    np.testing.assert_allclose(v, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)


def test_not_symmetric():
    with pytest.raises(NotSymmetric):
        sym_eigen([[1.0, 2.0], [0.0, 1.0]])


def test_gram_schmidt_examples():
    basis, rank, _ = gram_schmidt(np.eye(4))
    assert rank == 4
    np.testing.assert_allclose(basis, np.eye(4))
    basis, rank, order = gram_schmidt([[1.0, 0], [2.0, 0], [0, 3.0]])
    assert rank == 2
    # pivoting takes the largest residual first; the output set is {e1, e2}
    assert order[0] == 2
    np.testing.assert_allclose(sorted(map(tuple, np.abs(basis)), reverse=True), np.eye(2))
    p = np.array([1.0, 1.0, 0]) / np.sqrt(2)
    basis, rank, _ = gram_schmidt(np.eye(3), protected=[p])
    assert rank == 3
    np.testing.assert_allclose(basis[0], p)
    np.testing.assert_allclose(basis[1:] @ p, 0, atol=1e-15)


def test_dependent_protected():
    with pytest.raises(DependentProtected):
        gram_schmidt(np.eye(3), protected=[[1.0, 0, 0], [2.0, 0, 0]])


def test_solve2_examples():
    np.testing.assert_allclose(solve2(np.eye(2), (3.0, 4.0)), (3, 4))
    np.testing.assert_allclose(solve2(np.diag([4.0, 1.0]), (4.0, 1.0)), (1, 1))
    x = solve2([[2.0, 1.0], [1.0, 2.0]], (3.0, 3.0))
    np.testing.assert_allclose(np.array([[2, 1], [1, 2]]) @ np.array(x), (3, 3))
    np.testing.assert_allclose(x, (1, 1))
    with pytest.raises(DegenerateMetric):
        solve2([[1.0, 1.0], [1.0, 1.0]], (1.0, 1.0))


def test_solve2_propagates_jets():
    t = Jet.seed(2.0, 0, 1)
    x, y = solve2([[t, 0.0], [0.0, 1.0]], (1.0, t))
    assert x.val == 0.5 and x.grad[0] == pytest.approx(-0.25)
    assert y.val == 2.0 and y.grad[0] == 1.0


def test_smallest_eig_closed_form():
    G = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert smallest_eig(G) == pytest.approx(1.0)
    assert smallest_eig(np.diag([3.0, 1e-12])) == pytest.approx(1e-12, rel=1e-9)
    assert smallest_eig(np.diag([3.0, 2.0, 5.0])) == pytest.approx(2.0)


@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_eigen_reconstruction(seed, n):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n))
    A = M + M.T
    e = sym_eigen(A)
    assert np.all(np.diff(e.values) <= 0)
    V = e.vectors
    assert np.linalg.norm(A - V @ np.diag(e.values) @ V.T) <= 1e-10 * np.linalg.norm(A)
    np.testing.assert_allclose(V.T @ V, np.eye(n), atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(2, 11), st.integers(1, 12))
def test_gram_schmidt_orthonormal(seed, N, count):
    rng = np.random.default_rng(seed)
    vecs = rng.normal(size=(count, N))
    basis, rank, order = gram_schmidt(vecs)
    assert rank == min(count, N) == len(order)
    np.testing.assert_allclose(basis @ basis.T, np.eye(rank), atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_gram_schmidt_lorentz_inner(seed):
    rng = np.random.default_rng(seed)
    eta = np.array([1.0, 1.0, 1.0, -1.0])
    tangent = rng.normal(size=(2, 4)) * [1, 1, 1, 0.1]
    basis, rank, _ = gram_schmidt(np.eye(4), protected=tangent, inner=lambda a, b: float(np.dot(a * eta, b)))
    assert rank == 4
    G = basis @ np.diag(eta) @ basis.T
    np.testing.assert_allclose(np.abs(G), np.eye(4), atol=1e-9)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dims, seeds
from polarfix import linalg
from polarfix.errors import NotPositiveDefinite, NotSymmetric, SingularOperator, UnboundedLP
from polarfix.gallery import simplex_vertices


def rot(t):
    return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])


class TestSymEig:
    def test_diagonal(self):
        dec = linalg.sym_eig(np.diag([2.0, 3.0]))
        np.testing.assert_allclose(dec.eigvalues, [2, 3])
        np.testing.assert_allclose(dec.eigvectors, np.eye(2), atol=1e-15)

    def test_reflection(self):
        dec = linalg.sym_eig([[0.0, 1.0], [1.0, 0.0]])
        np.testing.assert_allclose(dec.eigvalues, [-1, 1], atol=1e-14)
        s = 1 / math.sqrt(2)
        np.testing.assert_allclose(dec.eigvectors, [[s, s], [-s, s]], atol=1e-14)

    def test_rejects_nonsymmetric(self):
        with pytest.raises(NotSymmetric):
            linalg.sym_eig([[0.0, 2.0], [-1.0, 0.0]])

    def test_ties_are_deterministic(self):
        dec = linalg.sym_eig(np.eye(3))
        np.testing.assert_array_equal(dec.eigvectors, np.eye(3))

    @given(seeds, dims)
    def test_reconstruction_and_orthonormality(self, seed, n):
        rng = np.random.default_rng(seed)
        M = linalg.random_symmetric(rng, n, mixed_signs=True)
        dec = linalg.sym_eig(M)
        U = dec.eigvectors
        assert np.linalg.norm(U.T @ U - np.eye(n)) <= 1e-10
        assert np.linalg.norm(dec.reconstruct() - M) <= 1e-9 * np.linalg.norm(M)
        assert np.all(np.diff(dec.eigvalues) >= 0)
        # sign convention: largest-magnitude entry of each column is positive
        idx = np.argmax(np.abs(U), axis=0)
        assert np.all(U[idx, np.arange(n)] > 0)

    def test_matches_lapack_eigenvalues(self, rng):
        M = linalg.random_symmetric(rng, 6, mixed_signs=True)
        np.testing.assert_allclose(linalg.sym_eig(M).eigvalues, np.linalg.eigvalsh(M), atol=1e-10)


class TestSpectralAbs:
    def test_examples(self):
        np.testing.assert_allclose(linalg.spectral_abs(-np.eye(3)), np.eye(3), atol=1e-15)
        np.testing.assert_allclose(linalg.spectral_abs(np.diag([-2.0, 3.0])), np.diag([2, 3]), atol=1e-15)
        np.testing.assert_allclose(linalg.spectral_abs([[0.0, 1.0], [1.0, 0.0]]), np.eye(2), atol=1e-14)

    def test_singular(self):
        with pytest.raises(SingularOperator):
            linalg.spectral_abs(np.diag([1.0, 0.0]))

    @given(seeds, dims)
    def test_square_and_commutation(self, seed, n):
        M = linalg.random_symmetric(np.random.default_rng(seed), n, mixed_signs=True)
        A = linalg.spectral_abs(M)
        nM = np.linalg.norm(M)
        assert linalg.is_positive_definite(A)
        assert np.linalg.norm(A @ A - M @ M) <= 1e-9 * nM**2
        assert np.linalg.norm(A @ M - M @ A) <= 1e-8 * nM**2


class TestNormsAndFlags:
    def test_operator_norm_examples(self):
        assert linalg.operator_norm(np.diag([2.0, 3.0])) == pytest.approx(3.0)
        assert linalg.operator_norm(rot(0.7)) == pytest.approx(1.0)

    def test_operator_norm_sampling_oracle(self, rng):
        M = rng.standard_normal((4, 4))
        X = rng.standard_normal((100_000, 4))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        sampled = np.max(np.linalg.norm(X @ M.T, axis=1))
        norm = linalg.operator_norm(M)
        assert sampled <= norm + 1e-12
        assert norm - sampled <= 0.05 * norm  # loose: sampling only approaches the sup
        assert norm == pytest.approx(linalg.operator_norm(M.T), abs=1e-12)

    def test_flags(self):
        assert linalg.is_positive_definite(np.diag([0.25, 4.0]))
        assert not linalg.is_symmetric([[0.0, 2.0], [-1.0, 0.0]])
        assert linalg.is_unitary(rot(math.pi / 4))
        assert not linalg.is_positive_definite(np.diag([1.0, -1.0]))

    def test_coercivity_examples(self):
        assert linalg.coercivity_constant(np.diag([2.0, 3.0])) == pytest.approx(2.0)
        assert linalg.coercivity_constant(np.eye(3)) == pytest.approx(1.0)
        with pytest.raises(NotPositiveDefinite):
            linalg.coercivity_constant(np.diag([1.0, -2.0]))

    @given(seeds, dims)
    def test_coercivity_optimality(self, seed, n):
        A = linalg.random_spd(np.random.default_rng(seed), n)
        beta = linalg.coercivity_constant(A)
        assert beta * linalg.operator_norm(np.linalg.inv(A)) == pytest.approx(1.0, abs=1e-10)


class TestLP:
    SQUARE = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])

    def test_square(self):
        assert linalg.lp_support([1.0, 1.0], self.SQUARE) == pytest.approx(2.0, abs=1e-10)
        assert linalg.lp_support([1.0, 0.0], self.SQUARE) == pytest.approx(1.0, abs=1e-10)

    def test_unbounded(self):
        with pytest.raises(UnboundedLP):
            linalg.lp_support([1.0, 0.0], np.array([[-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]))

    @given(seeds, st.integers(2, 5))
    def test_matches_vertex_maximum(self, seed, n):
        # H-rep of conv(V) is the polar of the V-rep: rows are the vertices of
        # the polar body. Here we go the other way: rows = vertices of a body
        # P, so the feasible set is P°, and max <c, x> over P° = gauge_P(c).
        rng = np.random.default_rng(seed)
        V = np.vstack([simplex_vertices(n, 1.0), rng.standard_normal((8, n))])
        c = rng.standard_normal(n)
        # gauge of conv(V) at c by the LP on the vertex description
        from scipy.optimize import linprog

        res = linprog(np.ones(len(V)), A_eq=V.T, b_eq=c, bounds=(0, None), method="highs")
        assert linalg.lp_support(c, V) == pytest.approx(res.fun, rel=1e-9, abs=1e-9)

    def test_h_rep_from_v_rep_2d(self, rng):
        from polarfix.sets import convex_hull_2d, polar_vertices_2d

        for _ in range(20):
            V = np.vstack([simplex_vertices(2, 1.0), rng.standard_normal((9, 2))])
            H = polar_vertices_2d(V)  # rows a_i with conv(V) = {<a_i, x> <= 1}
            c = rng.standard_normal(2)
            assert linalg.lp_support(c, H) == pytest.approx(np.max(V @ c), abs=1e-9)
            assert len(convex_hull_2d(V)) == len(H)

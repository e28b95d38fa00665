import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from conftest import seeds
from polarfix import linalg
from polarfix.conjugate import (
    GridFunction,
    GridSpec,
    coercivity_check,
    composed_residual,
    fb_function,
    fixedpoint_function_residual,
    functional_equation_residual,
    gauge_power_conjugate,
    half_gauge_squared,
    legendre_grid,
    quadratic_conjugate,
    sampled_quadratic_min,
)
from polarfix.errors import NotPositiveDefinite, UnboundedSet
from polarfix.sets import Ball, Ellipsoid, Orthant, rhombus, square

SEMI_SKEW = np.array([[0.0, 2.0], [-1.0, 0.0]])
ROT45 = np.array([[1.0, 1.0], [-1.0, 1.0]]) / math.sqrt(2)
GRID_1D = GridSpec(4.0, 513, 1)
GRID_2D = GridSpec(4.0, 257, 2)  # h = 1/32; the acceptance suite runs the 513 grid


def sup_oracle(f, y, x0):
    """Conjugate value by continuous optimisation, independent of any grid."""
    res = minimize(lambda x: f(x) - x @ y, x0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20_000})
    return -res.fun


class TestClosedForms:
    def test_quadratic_examples(self):
        assert quadratic_conjugate(np.eye(2), [3.0, 4.0]) == pytest.approx(12.5)
        assert quadratic_conjugate(2 * np.eye(2), [2.0, 0.0]) == pytest.approx(1.0)
        assert quadratic_conjugate(np.diag([2.0, 3.0]), [1.0, 1.0]) == pytest.approx(5 / 12)

    @settings(max_examples=15)
    @given(seeds)
    def test_quadratic_against_optimiser(self, seed):
        rng = np.random.default_rng(seed)
        A = linalg.random_spd(rng, 2, cond=10)
        y = rng.standard_normal(2)
        oracle = sup_oracle(lambda x: 0.5 * x @ A @ x, y, np.zeros(2))
        assert quadratic_conjugate(A, y) == pytest.approx(oracle, rel=1e-8, abs=1e-10)

    def test_quadratic_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            quadratic_conjugate(np.diag([1.0, -1.0]), [1.0, 0.0])

    def test_gauge_power_examples(self):
        y = np.array([0.3, -1.2])
        for C in (square(1.0), Ellipsoid(np.diag([0.25, 4.0])), rhombus(2.0)):
            h = C.support_many(y[None])[0]
            assert gauge_power_conjugate(C, 2, y) == pytest.approx(0.5 * h * h)
        assert gauge_power_conjugate(Ball(1.0, 2), 2, y) == pytest.approx(0.5 * y @ y)
        assert gauge_power_conjugate(Ball(1.0, 1), 3, [8.0]) == pytest.approx(2 / 3 * 8**1.5)
        assert gauge_power_conjugate(Ball(1.0, 1), 3, [8.0]) == pytest.approx(15.0849, abs=1e-4)

    def test_gauge_power_p3_against_grid(self):
        f = GridFunction.sample(lambda x: np.abs(x[:, 0]) ** 3 / 3, GRID_1D.box, GRID_1D.nodes)
        fstar = legendre_grid(f)
        assert abs(fstar([[8.0]])[0] - gauge_power_conjugate(Ball(1.0, 1), 3, [8.0])) <= 5 * GRID_1D.h

    @pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
    def test_gauge_power_against_optimiser(self, p):
        C = Ellipsoid(np.diag([0.5, 2.0]))
        y = np.array([0.7, -0.4])
        oracle = sup_oracle(lambda x: C.gauge_many(x[None])[0] ** p / p, y, np.array([0.5, -0.5]))
        assert gauge_power_conjugate(C, p, y) == pytest.approx(oracle, rel=1e-6)

    def test_gauge_power_guards(self):
        with pytest.raises(UnboundedSet):
            gauge_power_conjugate(Orthant([1, 1]), 2, [1.0, 0.0])
        with pytest.raises(ValueError):
            gauge_power_conjugate(Ball(1.0, 2), 1.0, [1.0, 0.0])


class TestLegendreGrid:
    def test_half_square_is_self_conjugate(self):
        f = GridFunction.sample(lambda x: 0.5 * x[:, 0] ** 2, GRID_1D.box, GRID_1D.nodes)
        fstar = legendre_grid(f, dual_box=[(-3.0, 3.0)])
        y = fstar.axes[0]
        assert np.max(np.abs(fstar.values - 0.5 * y**2)) <= 5 * f.h

    def test_reliable_mask_excludes_boundary_maximisers(self):
        f = GridFunction.sample(lambda x: 0.5 * x[:, 0] ** 2, GRID_1D.box, GRID_1D.nodes)
        fstar = legendre_grid(f, dual_box=[(-6.0, 6.0)])
        # slopes beyond 4 are maximised at the primal boundary
        assert np.isnan(fstar([[5.0]])[0]) and np.isfinite(fstar([[3.0]])[0])

    def test_square_gauge_vs_rhombus(self):
        f = GridFunction.sample(half_gauge_squared(square(1.0)), GRID_2D.box, GRID_2D.nodes)
        fstar = legendre_grid(f)
        target = half_gauge_squared(rhombus(1.0))(fstar.points()).reshape(fstar.resolution)
        err = np.abs(fstar.values - target)[fstar.reliable]
        assert fstar.reliable.sum() > 0.5 * fstar.reliable.size
        assert err.max() <= 5 * f.h

    @pytest.mark.parametrize("b", [0.5, 1.0, 2.0])
    def test_fb_self_duality(self, b):
        f = GridFunction.sample(fb_function(b), GRID_1D.box, GRID_1D.nodes)
        res, used = composed_residual(f, legendre_grid(f), [[-1.0]])
        assert used > 50 and res <= 5 * f.h

    def test_fb_closed_form(self):
        f = fb_function(2.0)
        np.testing.assert_allclose(f(np.array([-1.0, 0.0, 2.0])), [2.0, 0.0, 0.5])
        with pytest.raises(ValueError):
            fb_function(0.0)

    @settings(max_examples=10)
    @given(seeds)
    def test_young_fenchel(self, seed):
        rng = np.random.default_rng(seed)
        A = linalg.random_spd(rng, 2, cond=8)
        f = GridFunction.sample(lambda X: 0.5 * np.einsum("ij,jk,ik->i", X, A, X), [(-2, 2)] * 2, 65)
        fstar = legendre_grid(f)
        X = rng.uniform(-2, 2, (200, 2))
        lo = np.array(fstar.box)
        Y = rng.uniform(lo[:, 0], lo[:, 1], (200, 2))
        fx = 0.5 * np.einsum("ij,jk,ik->i", X, A, X)
        fy = fstar(Y)
        ok = np.isfinite(fy)
        # the grid sup never exceeds the true conjugate, so only interpolation can break the inequality
        assert np.all(fx[ok] + fy[ok] >= np.sum(X[ok] * Y[ok], axis=1) - 5 * f.h)

    def test_biconjugate_recovers_convex_function(self):
        f = GridFunction.sample(lambda x: np.abs(x[:, 0]) ** 1.5, GRID_1D.box, GRID_1D.nodes)
        fss = legendre_grid(legendre_grid(f))
        x = fss.axes[0]
        vals = fss.values[fss.reliable]
        assert np.max(np.abs(vals - np.abs(x[fss.reliable]) ** 1.5)) <= 5 * f.h

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            GridFunction([(1.0, 2.0)], np.zeros(20))
        with pytest.raises(ValueError):
            GridFunction([(-1.0, 1.0)], np.zeros(5))


class TestFixedPointFunction:
    def test_ball_identity(self):
        assert fixedpoint_function_residual(Ball(1.0, 2), np.eye(2), GRID_2D) <= 5 * GRID_2D.h

    def test_pd_solution(self):
        G = np.diag([0.25, 4.0])
        assert fixedpoint_function_residual(Ellipsoid(G), G, GRID_2D) <= 5 * GRID_2D.h

    def test_square_rotation(self):
        C = square(2 ** -0.25)
        assert fixedpoint_function_residual(C, ROT45, GRID_2D) <= 5 * GRID_2D.h

    def test_square_semi_skew_is_not_a_solution(self):
        assert fixedpoint_function_residual(square(1.0), SEMI_SKEW, GRID_2D) >= 10 * 5 * GRID_2D.h


class TestFunctionalEquation:
    def test_minus_identity_even_function(self):
        f = GridFunction.sample(half_gauge_squared(square(1.0)), GRID_2D.box, 65)
        assert functional_equation_residual(f, -np.eye(2)) == 0

    def test_minus_identity_ignores_parity(self):
        # E^{-1} E^T = I for E = -I, so even a non-even f satisfies the equation
        f = GridFunction.sample(lambda X: 0.5 * np.sum(X**2, axis=1) + 0.1 * X[:, 0] ** 3, GRID_2D.box, 65)
        assert functional_equation_residual(f, -np.eye(2)) == 0

    def test_quarter_turn_detects_odd_part(self):
        # for the quarter turn E^{-1} E^T = -I, so the equation demands f(x) = f(-x)
        f = GridFunction.sample(lambda X: 0.5 * np.sum(X**2, axis=1) + 0.1 * X[:, 0] ** 3, GRID_2D.box, 65)
        quarter = np.array([[0.0, 1.0], [-1.0, 0.0]])  # E^{-1} E^T = -I
        assert functional_equation_residual(f, quarter) > 1.0

    def test_semi_skew_square(self):
        f = GridFunction.sample(half_gauge_squared(square(1.0)), GRID_2D.box, GRID_2D.nodes)
        assert functional_equation_residual(f, SEMI_SKEW) >= 10 * 5 * GRID_2D.h

    def test_scaled_rotation_round_ball(self):
        f = GridFunction.sample(half_gauge_squared(Ball(1.0, 2)), GRID_2D.box, GRID_2D.nodes)
        assert functional_equation_residual(f, [[0.0, 1.0], [-1.0, 0.0]]) <= 5 * GRID_2D.h


class TestCoercivity:
    def test_examples(self):
        beta, v = coercivity_check(np.diag([2.0, 3.0]))
        assert beta == pytest.approx(2.0)
        np.testing.assert_allclose(np.abs(v), [1.0, 0.0], atol=1e-15)
        beta, v = coercivity_check(np.eye(3))
        assert beta == pytest.approx(1.0) and np.linalg.norm(v) == pytest.approx(1.0)

    @settings(max_examples=25)
    @given(seeds, st.integers(2, 6))
    def test_random_spd(self, seed, n):
        A = linalg.random_spd(np.random.default_rng(seed), n)
        beta, v = coercivity_check(A, samples=2000, seed=seed % 1000)
        assert beta == pytest.approx(np.linalg.eigvalsh(A)[0], abs=1e-10)
        assert abs(v @ A @ v - beta) <= 1e-10 * max(1.0, beta)
        assert sampled_quadratic_min(A, 2000, seed % 1000) >= beta - 1e-10

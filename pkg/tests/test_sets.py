import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dims, random_body, seeds, unit
from polarfix.errors import DimensionMismatch, UnboundedSet
from polarfix.gallery import simplex_vertices
from polarfix.polarity import polar
from polarfix.sets import (
    INF,
    Ball,
    ConeH,
    ConeV,
    Ellipsoid,
    Interval,
    LorentzCone,
    Orthant,
    PolytopeH,
    PolytopeV,
    classify,
    contains,
    gauge,
    rhombus,
    square,
    support,
)

SQUARE_ROWS = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])


def bisection_gauge(C, x, hi=1e3, iters=200):
    """Oracle: smallest mu with x/mu in C, by bisection on membership."""
    lo = 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if contains(C, x / mid, 0.0):
            hi = mid
        else:
            lo = mid
    return hi


class TestGauge:
    def test_ellipse_boundary(self):
        assert gauge(Ellipsoid(np.diag([0.25, 4.0])), [2.0, 0.0]) == pytest.approx(1.0)

    def test_ball_is_norm(self, rng):
        x = rng.standard_normal(3)
        assert gauge(Ball(1.0, 3), x) == pytest.approx(np.linalg.norm(x))

    def test_h_square(self):
        C = PolytopeH(SQUARE_ROWS)
        assert gauge(C, [0.5, 0.25]) == pytest.approx(0.5)
        assert bisection_gauge(C, np.array([0.5, 0.25])) == pytest.approx(0.5, abs=1e-9)

    def test_v_polytope_against_bisection(self, rng):
        C = PolytopeV(np.vstack([simplex_vertices(3, 1.0), rng.standard_normal((6, 3))]))
        for _ in range(5):
            x = rng.standard_normal(3)
            assert gauge(C, x) == pytest.approx(bisection_gauge(C, x), abs=1e-8)

    @given(seeds, st.integers(3, 6))
    def test_v_polytope_facets_match_lp(self, seed, n):
        from conftest import random_polytope_v
        from polarfix import linalg

        rng = np.random.default_rng(seed)
        P = random_polytope_v(rng, n)
        X = rng.standard_normal((10, n))
        lp = np.array([linalg.lp_support(x, P.vertices) for x in X])
        np.testing.assert_allclose(P.gauge_many(X), lp, rtol=1e-9, atol=1e-12)

    def test_cones_and_rays_are_indicators(self):
        assert gauge(Orthant([1, 1]), [1.0, 2.0]) == 0
        assert gauge(Orthant([1, 1]), [1.0, -2.0]) == INF
        assert gauge(Interval(-INF, 0), -5) == 0
        assert gauge(Interval(Fraction(-1, 2), 2), -1) == 2

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            gauge(Ball(1.0, 2), [1.0, 2.0, 3.0])


class TestSupport:
    def test_examples(self):
        assert support(square(1.0), [1.0, 0.0]) == pytest.approx(1.0)
        assert support(Ellipsoid(np.diag([0.25, 4.0])), [1.0, 0.0]) == pytest.approx(2.0)
        assert support(Orthant([1, 1]), [-1.0, -1.0]) == 0
        assert support(Orthant([1, 1]), [1.0, 0.0]) == INF

    def test_h_rep_uses_lp_in_higher_dim(self, rng):
        V = np.vstack([simplex_vertices(4, 1.0), rng.standard_normal((5, 4))])
        P = polar(PolytopeV(V))  # H-rep whose rows are V
        Q = polar(P)  # back to V-rep, rows V
        U = rng.standard_normal((20, 4))
        np.testing.assert_allclose(P.support_many(U), polar(Q).support_many(U), atol=1e-12)
        np.testing.assert_allclose(Q.support_many(U), np.max(U @ V.T, axis=1), atol=1e-12)


class TestContains:
    def test_lorentz_boundary_is_closed(self):
        assert contains(LorentzCone([0.0, 0.0, 1.0]), [1.0, 0.0, 1.0])

    def test_orthant(self):
        assert not contains(Orthant([1, 1]), [1.0, -0.01], 1e-9)

    def test_ray(self):
        assert contains(Interval(-INF, 0), -5)

    @given(seeds, dims)
    def test_membership_matches_gauge(self, seed, n):
        rng = np.random.default_rng(seed)
        C = random_body(rng, n)
        for x in rng.standard_normal((20, n)):
            assert contains(C, x, 0.0) == (gauge(C, x) <= 1.0)


class TestClassify:
    def test_flags(self):
        c = classify(Ellipsoid(np.eye(2)))
        assert (c.bounded, c.zero_interior, c.cone, c.centrally_symmetric) == (True, True, False, True)
        c = classify(LorentzCone([0.0, 1.0]))
        assert (c.bounded, c.cone, c.zero_interior) == (False, True, False)
        c = classify(Interval(Fraction(-1, 2), 2))
        assert (c.bounded, c.zero_interior, c.centrally_symmetric) == (True, True, False)

    def test_cone_never_bounded(self):
        for C in (Orthant([1, -1, 1]), ConeV(np.eye(3)), ConeH(-np.eye(2)), Interval(0, INF)):
            c = classify(C)
            assert c.cone and not c.bounded


class TestInvariants:
    @given(seeds, dims)
    def test_gauge_sandwich(self, seed, n):
        rng = np.random.default_rng(seed)
        C = random_body(rng, n)
        outer, inner = C.norm_bounds()
        X = rng.standard_normal((50, n))
        g = C.gauge_many(X)
        r = np.linalg.norm(X, axis=1)
        assert np.all(r / outer <= g * (1 + 1e-9) + 1e-12)
        assert np.all(g <= r / inner * (1 + 1e-9) + 1e-12)

    @given(seeds, dims, st.floats(0.0, 100.0))
    def test_positive_homogeneity(self, seed, n, lam):
        rng = np.random.default_rng(seed)
        C = random_body(rng, n)
        x = rng.standard_normal(n)
        assert gauge(C, lam * x) == pytest.approx(lam * gauge(C, x), rel=1e-12, abs=1e-300)

    @given(seeds, dims)
    def test_subadditivity_and_lipschitz(self, seed, n):
        rng = np.random.default_rng(seed)
        C = random_body(rng, n)
        _, inner = C.norm_bounds()
        X, Y = rng.standard_normal((2, 30, n))
        gx, gy, gxy = C.gauge_many(X), C.gauge_many(Y), C.gauge_many(X + Y)
        assert np.all(gxy <= gx + gy + 1e-9)
        assert np.all(np.abs(gx - gy) <= np.linalg.norm(X - Y, axis=1) / inner + 1e-9)

    def test_v_and_h_representations_agree(self, rng):
        U = rng.standard_normal((512, 2))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        pairs = [(square(1.0), PolytopeH(SQUARE_ROWS))]
        V = simplex_vertices(2, 1.0)
        Hrows = -2.0 * V  # facet opposite v sits on <x, -v/2> = 1/4, i.e. <x, -2v> <= 1
        pairs.append((PolytopeV(V), PolytopeH(Hrows)))
        V3 = simplex_vertices(3, 1.0)
        pairs.append((PolytopeV(V3), PolytopeH(-3.0 * V3)))
        for P, H in pairs:
            Uc = rng.standard_normal((512, P.dim))
            Uc /= np.linalg.norm(Uc, axis=1, keepdims=True)
            np.testing.assert_allclose(P.support_many(Uc), H.support_many(Uc), atol=1e-9)
            np.testing.assert_allclose(P.gauge_many(Uc), H.gauge_many(Uc), atol=1e-9)

    def test_degenerate_vertices_accepted(self):
        V = np.vstack([square(1.0).vertices, [[0.2, 0.1], [1.0, 1.0]]])
        P = PolytopeV(V)
        assert support(P, [1.0, 1.0]) == pytest.approx(2.0)
        assert gauge(P, [0.5, 0.0]) == pytest.approx(0.5)

    def test_rhombus_square_helpers(self):
        assert support(rhombus(2.0), unit([1.0, 1.0])) == pytest.approx(math.sqrt(2))
        assert gauge(square(0.5), [0.5, 0.5]) == pytest.approx(1.0)


class TestRepresentationChecks:
    def test_polytope_needs_interior_origin(self):
        with pytest.raises(UnboundedSet):
            PolytopeV(np.array([[1.0, 0.0], [2.0, 1.0], [2.0, -1.0]])).gauge_many(np.ones((1, 2)))

    def test_interval_endpoint_order(self):
        with pytest.raises(ValueError):
            Interval(1, 2)

    def test_lorentz_axis_normalized(self):
        with pytest.raises(ValueError):
            LorentzCone([0.0, 2.0])

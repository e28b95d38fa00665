"""Constructive solutions of ``C = (GC)°``, operator-equation residuals, the
complete 1D classification, semi-skew operators and the polarity-map iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .config import DEFAULT, RunConfig
from .errors import (
    NoConstructiveSolver,
    NotPositiveDefinite,
    NotSemiSkew,
    NotSymmetric,
    SingularOperator,
    ZeroGamma,
)
from .polarity import Operator, as_operator, polarity_map, pushforward
from .sets import INF, Ball, ConvexSet, Ellipsoid, Interval
from .verify import set_distance, normalized_support_residual


def _exact_sqrt(x):
    """Square root that stays a Fraction for perfect-square rationals."""
    if isinstance(x, Fraction) and x > 0:
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
    return math.sqrt(x)


def _as_gamma(g):
    if isinstance(g, Operator):
        g = g.gamma
    if isinstance(g, (int, np.integer)) and not isinstance(g, bool):
        return Fraction(int(g))
    return g if isinstance(g, Fraction) else float(g)


def _ellipsoid_or_ball(A: np.ndarray) -> ConvexSet:
    n = A.shape[0]
    c = float(np.trace(A)) / n
    if n > 1 and np.linalg.norm(A - c * np.eye(n)) <= 1e-12 * max(1.0, c):
        return Ball(1.0 / math.sqrt(c), n)
    return Ellipsoid(A)


def solve_positive_definite(G) -> ConvexSet:
    """The unique solution ``{x : <Gx, x> <= 1}`` for positive definite ``G``.

    Returned as an :class:`Interval` in 1D, a :class:`Ball` when ``G`` is a
    multiple of the identity, and an :class:`Ellipsoid` otherwise.
    """
    G = as_operator(G)
    if not G.is_positive_definite:
        raise NotPositiveDefinite("operator is not symmetric positive definite")
    if G.dim == 1:
        r = 1 / _exact_sqrt(_as_gamma(G))
        return Interval(-r, r)
    return _ellipsoid_or_ball(G.matrix)


def solve_symmetric(G) -> tuple[np.ndarray, ConvexSet]:
    """Ellipsoid solution for symmetric invertible ``G`` via ``A = |G|``.

    ``A = U |Λ| Uᵀ`` satisfies ``A = G A⁻¹ Gᵀ``, so ``{<Ax, x> <= 1}`` is a
    fixed point whatever the signs of the spectrum.
    """
    G = as_operator(G)
    if not G.is_symmetric:
        raise NotSymmetric("operator is not symmetric")
    A = linalg.spectral_abs(G.matrix)
    if G.dim == 1:
        r = 1 / _exact_sqrt(abs(_as_gamma(G)))
        return A, Interval(-r, r)
    return A, _ellipsoid_or_ball(A)


def operator_equation_residual(A, G) -> float:
    """``|A - G A⁻¹ Gᵀ|``; zero certifies that the ellipsoid of ``A`` solves."""
    A = linalg.as_matrix(A)
    if not linalg.is_positive_definite(A):
        raise NotPositiveDefinite("A must be symmetric positive definite")
    G = as_operator(G)
    return linalg.operator_norm(A - G.matrix @ np.linalg.solve(A, G.matrix.T))


def transport_residual(A, G) -> float:
    """``|(A⁻¹)ᵀ G A⁻¹ - G|``; zero means ``A`` maps solutions to solutions."""
    A, G = as_operator(A), as_operator(G)
    return linalg.operator_norm(A.inverse.T @ G.matrix @ A.inverse - G.matrix)


def transport_solution(A, C: ConvexSet) -> ConvexSet:
    return pushforward(A, C)


# -- one dimension ---------------------------------------------------------

@dataclass(frozen=True)
class OneDimSolutionFamily:
    """All solutions for ``G(x) = gamma * x`` on the line.

    ``gamma > 0``: a single interval. ``gamma < 0``: the bounded family
    ``b -> [1/(gamma b), b]`` plus the two closed rays.
    """

    gamma: object
    unique: Interval | None = None
    rays: tuple = ()

    @property
    def has_family(self) -> bool:
        return self.gamma < 0

    def member(self, b) -> Interval:
        if not self.has_family:
            raise ValueError("gamma > 0 has a unique solution, no family")
        b = _as_gamma(b)
        if not b > 0:
            raise ValueError("family parameter b must be positive")
        return Interval(1 / (self.gamma * b), b)

    def describe(self) -> dict:
        if self.unique is not None:
            return {"gamma": float(self.gamma), "unique": self.unique.to_doc()}
        return {
            "gamma": float(self.gamma),
            "family": {"lo": "1/(gamma*b)", "hi": "b", "b": "(0, inf)"},
            "rays": [r.to_doc() for r in self.rays],
        }


def classify_1d(gamma) -> OneDimSolutionFamily:
    gamma = _as_gamma(gamma)
    if gamma == 0:
        raise ZeroGamma("gamma must be nonzero")
    if gamma > 0:
        r = 1 / _exact_sqrt(gamma)
        return OneDimSolutionFamily(gamma, unique=Interval(-r, r))
    return OneDimSolutionFamily(gamma, rays=(Interval(-INF, 0), Interval(0, INF)))


CASE_LABELS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX")


def one_dim_case_shapes(a, b) -> dict[str, Interval]:
    """The nine shapes ``[a', b']`` with ``a' in {-inf, a, 0}``, ``b' in {0, b, inf}``.

    Ordered as the exhaustive case split used to classify 1D solutions; ``a``
    must be negative and ``b`` positive and finite.
    """
    a, b = _as_gamma(a), _as_gamma(b)
    if not (a < 0 < b) or b == INF or a == -INF:
        raise ValueError("need finite a < 0 < b")
    shapes = [(-INF, 0), (-INF, b), (-INF, INF), (a, 0), (a, b), (a, INF), (0, 0), (0, b), (0, INF)]
    return {lab: Interval(lo, hi) for lab, (lo, hi) in zip(CASE_LABELS, shapes)}


# -- semi-skew operators -----------------------------------------------------

def _frame(u: np.ndarray) -> np.ndarray:
    return np.array([[u[0], -u[1]], [u[1], u[0]]])  # columns u, u_perp


@dataclass(frozen=True, eq=False)
class SemiSkewForm:
    """``E = R [[0, a2], [-a1, 0]] Rᵀ`` in the orthonormal frame ``R = (u, u⊥)``."""

    u: np.ndarray
    alpha1: float
    alpha2: float

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).ravel()
        if u.shape != (2,) or abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise ValueError("u must be a unit vector in R^2")
        a1, a2 = float(self.alpha1), float(self.alpha2)
        if a1 == 0 or a2 == 0 or (a1 > 0) != (a2 > 0):
            raise ValueError("alpha1 and alpha2 must be nonzero with the same sign")
        if abs(a1 - a2) <= 1e-9 * max(abs(a1), abs(a2)):
            raise ValueError("alpha1 must differ from alpha2")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)

    @staticmethod
    def _matrix(u, a1, a2) -> np.ndarray:
        R = _frame(u)
        return R @ np.array([[0.0, a2], [-a1, 0.0]]) @ R.T

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix(self.u, self.alpha1, self.alpha2)

    @property
    def adjoint(self) -> "SemiSkewForm":
        return SemiSkewForm(self.u, -self.alpha2, -self.alpha1)

    @property
    def inverse(self) -> "SemiSkewForm":
        return SemiSkewForm(self.u, -1.0 / self.alpha2, -1.0 / self.alpha1)

    @property
    def inv_adj(self) -> np.ndarray:
        """``E⁻¹Eᵀ``, diagonal ``(-a2/a1, -a1/a2)`` in the frame."""
        R = _frame(self.u)
        return R @ np.diag([-self.alpha2 / self.alpha1, -self.alpha1 / self.alpha2]) @ R.T

    def to_doc(self) -> dict:
        return {"u": self.u.tolist(), "alpha1": self.alpha1, "alpha2": self.alpha2}


def semi_skew_decompose(M, tol: float = 1e-9) -> SemiSkewForm:
    """Recover ``(u, alpha1, alpha2)`` from a 2x2 semi-skew matrix.

    A traceless 2x2 matrix with positive determinant has a direction ``u``
    with ``<Mu, u> = 0``; in the frame ``(u, u⊥)`` it is anti-diagonal. Among
    the two such frames (angles ``theta`` and ``theta + pi/2``) the one with
    angle in ``[0, pi/2)`` is returned.

    Raises:
        NotSemiSkew: with ``reason`` NonzeroTrace, NonpositiveDeterminant,
            ScaledRotation (``alpha1 == alpha2``) or WrongDimension.
    """
    M = linalg.as_matrix(M)
    if M.shape != (2, 2):
        raise NotSemiSkew(NotSemiSkew.WRONG_DIMENSION, "semi-skew detection is 2D only")
    scale = max(1.0, np.linalg.norm(M))
    if abs(np.trace(M)) > tol * scale:
        raise NotSemiSkew(NotSemiSkew.NONZERO_TRACE)
    det = float(np.linalg.det(M))
    if det <= tol * scale**2:
        raise NotSemiSkew(NotSemiSkew.NONPOSITIVE_DETERMINANT)
    if np.linalg.norm(M.T @ M - det * np.eye(2)) <= tol * scale**2:
        raise NotSemiSkew(NotSemiSkew.SCALED_ROTATION)
    a = 0.5 * (M[0, 0] - M[1, 1])
    s = 0.5 * (M[0, 1] + M[1, 0])
    # <Mu, u> = a cos 2t + s sin 2t for u = (cos t, sin t)
    theta = 0.5 * math.atan2(-a, s)
    theta %= math.pi / 2
    u = np.array([math.cos(theta), math.sin(theta)])
    R = _frame(u)
    F = R.T @ M @ R
    form = SemiSkewForm(u, -F[1, 0], F[0, 1])
    if np.linalg.norm(form.matrix - M) > tol * scale:
        raise NotSemiSkew(NotSemiSkew.NONZERO_TRACE, "frame reconstruction failed")
    return form


# -- iteration ---------------------------------------------------------------

@dataclass
class IterationTrace:
    sets: list
    self_residuals: list = field(default_factory=list)
    consecutive_residuals: list = field(default_factory=list)
    verdict: str = "NoFixedPointWithinBudget"  # | "Converged" | "Cycled"
    period: int | None = None
    normalized_residuals: list = field(default_factory=list)  # bounded orbits only

    @property
    def min_self_residual(self) -> float:
        return float(min(self.self_residuals))

    def rows(self):
        """``(step, self_residual, consecutive_residual)`` for CSV export."""
        for k, r in enumerate(self.self_residuals):
            c = self.consecutive_residuals[k] if k < len(self.consecutive_residuals) else math.nan
            yield k, float(r), float(c)

    def to_doc(self) -> dict:
        return {
            "verdict": self.verdict,
            "period": self.period,
            "steps": len(self.self_residuals),
            "self_residuals": [float(r) for r in self.self_residuals],
            "consecutive_residuals": [float(r) for r in self.consecutive_residuals],
            "min_self_residual": self.min_self_residual,
            "normalized_residuals": [float(r) for r in self.normalized_residuals],
        }


def _bounded_body(C: ConvexSet) -> bool:
    cls = C.classify()
    return cls.bounded and cls.zero_interior and not isinstance(C, Interval)


def iterate_polarity(G, C0: ConvexSet, max_steps: int = 50, tol: float = 1e-8,
                     config: RunConfig = DEFAULT, max_period: int = 4) -> IterationTrace:
    """Run ``C_{k+1} = (G C_k)°`` and classify the orbit.

    ``self_residuals[k]`` is the distance from ``C_k`` to its image;
    ``consecutive_residuals[k]`` the distance from ``C_k`` to ``C_{k-1}``
    (NaN at ``k = 0``). Stops at the first fixed point or at a repeat of
    period ``<= max_period``.
    """
    G = as_operator(G)
    cfg = RunConfig(tol, config.dirs, config.seed, config.grid_nodes, max_steps, config.margin)
    trace = IterationTrace(sets=[C0])
    C = C0
    for k in range(max_steps):
        image = polarity_map(G, C)
        r = float(set_distance(C, image, cfg).max_residual)
        trace.self_residuals.append(r)
        if _bounded_body(C) and _bounded_body(image):
            trace.normalized_residuals.append(
                normalized_support_residual(C, image, cfg.dirs, cfg.seed).max_residual)
        trace.consecutive_residuals.append(
            math.nan if k == 0 else float(set_distance(C, trace.sets[k - 1], cfg).max_residual))
        if r <= tol:
            trace.verdict = "Converged"
            return trace
        for p in range(2, max_period + 1):
            if k - p >= 0 and float(set_distance(C, trace.sets[k - p], cfg).max_residual) <= tol:
                trace.verdict, trace.period = "Cycled", p
                return trace
        if k + 1 < max_steps:
            trace.sets.append(image)
            C = image
    return trace


# -- dispatch ----------------------------------------------------------------

SOLVE_MODES = ("auto", "pd", "symmetric", "1d")


def solve(G, mode: str = "auto"):
    """Pick a constructive solver and run it.

    ``auto`` tries positive definite, then symmetric; 1D operators always go
    to the complete classification. Returns ``(mode_used, result)`` where
    ``result`` is a :class:`ConvexSet` or, in 1D, a
    :class:`OneDimSolutionFamily`.

    Raises:
        NoConstructiveSolver: no solver applies; carries the
            :class:`SemiSkewForm` when the operator is semi-skew.
    """
    if mode not in SOLVE_MODES:
        raise ValueError(f"mode must be one of {SOLVE_MODES}")
    G = as_operator(G)
    if mode == "1d" or (mode == "auto" and G.dim == 1):
        if G.dim != 1:
            raise NoConstructiveSolver("the 1d solver needs a 1x1 operator")
        return "1d", classify_1d(_as_gamma(G))
    if mode in ("auto", "pd") and G.is_positive_definite:
        return "pd", solve_positive_definite(G)
    if mode in ("auto", "symmetric") and G.is_symmetric:
        return "symmetric", solve_symmetric(G)[1]
    form = None
    if G.dim == 2:
        try:
            form = semi_skew_decompose(G.matrix)
        except NotSemiSkew:
            pass
    what = "semi-skew (no bounded solution exists)" if form is not None else "neither positive definite nor symmetric"
    raise NoConstructiveSolver(f"{mode} solver does not apply: operator is {what}", semi_skew=form)

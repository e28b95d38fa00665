"""Polar sets, linear images, and the map ``T_G(C) = (GC)° = (Gᵀ)⁻¹ C°``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg
from .errors import DimensionMismatch, SingularOperator, UnsupportedPushforward, UnsupportedRepresentation
from .sets import (
    INF,
    Ball,
    ConeH,
    ConeV,
    ConvexSet,
    Ellipsoid,
    Interval,
    LorentzCone,
    Orthant,
    PolytopeH,
    PolytopeV,
)


@dataclass(frozen=True, eq=False)
class Operator:
    """Invertible square matrix with cached inverse, transpose and property flags.

    A 1x1 operator built with :meth:`scalar` keeps its exact ``Fraction`` value
    in ``gamma`` so interval computations stay exact.
    """

    matrix: np.ndarray
    gamma: object = None

    def __post_init__(self):
        M = linalg.as_matrix(self.matrix)
        object.__setattr__(self, "matrix", M)
        if M.shape[0] > 1 or self.gamma is None:
            object.__setattr__(self, "gamma", None if M.shape[0] > 1 else float(M[0, 0]))
        if np.linalg.matrix_rank(M) < M.shape[0] or np.min(np.linalg.svd(M, compute_uv=False)) < 1e-12:
            raise SingularOperator("operator is not invertible")
        err = np.linalg.norm(M @ self.inverse - np.eye(self.dim))
        if err > 1e-9:
            raise SingularOperator(f"operator is too ill-conditioned (|M M^-1 - I| = {err:.2e})")

    @classmethod
    def scalar(cls, gamma, dim: int = 1) -> "Operator":
        if isinstance(gamma, (int, np.integer)) and not isinstance(gamma, bool):
            gamma = Fraction(int(gamma))
        if dim == 1:
            return cls(np.array([[float(gamma)]]), gamma)
        return cls(float(gamma) * np.eye(dim))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)

    @property
    def T(self) -> np.ndarray:
        return self.matrix.T

    @cached_property
    def inverse_adjoint(self) -> np.ndarray:
        """``(Mᵀ)⁻¹``."""
        return self.inverse.T

    @cached_property
    def is_symmetric(self) -> bool:
        return linalg.is_symmetric(self.matrix)

    @cached_property
    def is_positive_definite(self) -> bool:
        return linalg.is_positive_definite(self.matrix)

    @cached_property
    def is_unitary(self) -> bool:
        return linalg.is_unitary(self.matrix)

    @cached_property
    def conformal_scale(self) -> float | None:
        """``c > 0`` with ``MᵀM = c² I`` (a scaled unitary), else ``None``."""
        M = self.matrix
        c2 = float(np.trace(M.T @ M)) / self.dim
        if np.linalg.norm(M.T @ M - c2 * np.eye(self.dim)) <= 1e-10 * max(1.0, c2):
            return math.sqrt(c2)
        return None

    @cached_property
    def is_semi_skew(self) -> bool:
        from .solver import semi_skew_decompose
        from .errors import NotSemiSkew

        try:
            semi_skew_decompose(self.matrix)
        except NotSemiSkew:
            return False
        return True

    def adjoint(self) -> "Operator":
        return Operator(self.matrix.T, self.gamma)

    def inv_adjoint_operator(self) -> "Operator":
        g = self.gamma
        if self.dim == 1 and g is not None:
            return Operator(self.inverse_adjoint, 1 / g if isinstance(g, Fraction) else 1.0 / g)
        return Operator(self.inverse_adjoint)

    def to_doc(self) -> dict:
        if self.dim == 1:
            return {"scalar": float(self.matrix[0, 0]), "dim": 1}
        return {"matrix": self.matrix.tolist()}

    def __matmul__(self, other):
        return self.matrix @ other


def as_operator(G) -> Operator:
    if isinstance(G, Operator):
        return G
    if np.ndim(G) == 0:
        return Operator.scalar(G)
    return Operator(G)


def _recip(v, sign: int):
    """Reciprocal on the extended line; ``sign`` picks the side of 1/0."""
    if v == 0:
        return sign * INF
    if v in (INF, -INF):
        return Fraction(0)  # exact whatever the type of the other endpoint
    return 1 / v if isinstance(v, Fraction) else 1.0 / v


def polar(C: ConvexSet) -> ConvexSet:
    """Polar set ``{y : <y, c> <= 1 for all c in C}``, in closed form."""
    if isinstance(C, Ball):
        return Ball(1.0 / C.radius, C.dim)
    if isinstance(C, Ellipsoid):
        return Ellipsoid(C.inverse)
    if isinstance(C, PolytopeV):
        return PolytopeH(C.vertices)
    if isinstance(C, PolytopeH):
        return PolytopeV(C.normals)
    if isinstance(C, ConeV):
        return ConeH(C.generators)
    if isinstance(C, ConeH):
        return ConeV(C.normals)
    if isinstance(C, LorentzCone):
        # half-aperture pi/4 makes the cone self-dual up to reflection
        return LorentzCone(-C.axis)
    if isinstance(C, Orthant):
        return Orthant(-C.signs)
    if isinstance(C, Interval):
        # y*lo <= 1 bounds y below by 1/lo, y*hi <= 1 bounds it above by 1/hi
        return Interval(_recip(C.lo, -1), _recip(C.hi, +1))
    raise UnsupportedRepresentation(type(C).__name__)


def _monomial_map(M: np.ndarray):
    """Column permutation and entries for a matrix with one nonzero per row/column."""
    nz = np.abs(M) > 1e-12 * np.max(np.abs(M))
    if not (np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1)):
        return None
    rows = np.argmax(nz, axis=0)  # column j -> row where its nonzero sits
    return rows, M[rows, np.arange(M.shape[1])]


def pushforward(G, C: ConvexSet) -> ConvexSet:
    """Linear image ``GC`` in the representation of ``C``."""
    G = as_operator(G)
    if G.dim != C.dim:
        raise DimensionMismatch(f"operator dim {G.dim} vs set dim {C.dim}")
    M, Mi = G.matrix, G.inverse
    if isinstance(C, Interval):
        g = G.gamma
        a, b = C.lo * g, C.hi * g
        if isinstance(a, float) and math.isnan(a) or isinstance(b, float) and math.isnan(b):
            raise UnsupportedPushforward("degenerate interval arithmetic")
        return Interval(min(a, b), max(a, b))
    if isinstance(C, Ball):
        c = G.conformal_scale
        if c is not None:
            return Ball(C.radius * c, C.dim)
        return Ellipsoid(Mi.T @ Mi / C.radius**2)
    if isinstance(C, Ellipsoid):
        return Ellipsoid(Mi.T @ C.matrix @ Mi)
    if isinstance(C, PolytopeV):
        return PolytopeV(C.vertices @ M.T)
    if isinstance(C, PolytopeH):
        return PolytopeH(C.normals @ Mi)
    if isinstance(C, ConeV):
        return ConeV(C.generators @ M.T)
    if isinstance(C, ConeH):
        return ConeH(C.normals @ Mi)
    if isinstance(C, LorentzCone):
        if G.conformal_scale is None:
            raise UnsupportedPushforward("Lorentz cone image needs a scaled unitary operator")
        a = M @ C.axis
        return LorentzCone(a / np.linalg.norm(a))
    if isinstance(C, Orthant):
        mono = _monomial_map(M)
        if mono is None:
            raise UnsupportedPushforward("orthant image needs a signed permutation")
        rows, vals = mono
        signs = np.empty(C.dim)
        signs[rows] = np.sign(vals) * C.signs
        return Orthant(signs)
    raise UnsupportedRepresentation(type(C).__name__)


def polarity_map(G, C: ConvexSet) -> ConvexSet:
    """``(GC)°``, computed as ``(Gᵀ)⁻¹ C°`` with ``(GC)°`` as fallback."""
    G = as_operator(G)
    try:
        return pushforward(G.inv_adjoint_operator(), polar(C))
    except UnsupportedPushforward:
        return polar(pushforward(G, C))

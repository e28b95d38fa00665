"""Closed-form convex sets: balls, ellipsoids, polytopes, cones and 1D intervals.

Every set answers three queries:

* ``gauge(x)``   - Minkowski functional ``inf{mu >= 0 : x in mu C}``
* ``support(u)`` - ``sup{<u, c> : c in C}``
* ``contains(x, tol)``

Batch methods (``gauge_many`` / ``support_many``) take an ``(m, n)`` array of
row vectors. ``+inf`` is an ordinary value here: cone gauges and supports are
``0``/``inf`` indicators, and interval endpoints may be infinite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.optimize import nnls

from . import linalg
from .errors import DimensionMismatch, NotPositiveDefinite, UnboundedLP, UnboundedSet

INV_SQRT2 = 1.0 / math.sqrt(2.0)
CONE_TOL = 1e-12
INF = math.inf


@dataclass(frozen=True)
class SetClass:
    bounded: bool
    zero_interior: bool
    cone: bool
    centrally_symmetric: bool


def _rows(a, name="array") -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.ndim != 2 or a.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty list of vectors")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _symmetric_point_set(P: np.ndarray, tol: float = 1e-12) -> bool:
    scale = max(1.0, float(np.max(np.abs(P))))
    for p in P:
        if np.min(np.linalg.norm(P + p, axis=1)) > tol * scale:
            return False
    return True


def convex_hull_2d(P: np.ndarray) -> np.ndarray:
    """Counter-clockwise hull vertices (monotone chain, collinear points dropped)."""
    pts = sorted(set(map(tuple, np.asarray(P, dtype=float))))
    if len(pts) <= 2:
        return np.array(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _origin_strictly_inside_2d(hull: np.ndarray) -> bool:
    if len(hull) < 3:
        return False
    nxt = np.roll(hull, -1, axis=0)
    cross = hull[:, 0] * nxt[:, 1] - hull[:, 1] * nxt[:, 0]
    return bool(np.all(cross > 0))


def polar_vertices_2d(points) -> np.ndarray:
    """Vertices of ``{x : <p, x> <= 1 for all p}`` in the plane, sorted by angle.

    Each hull edge ``(p, q)`` of the point set yields the vertex solving
    ``<p, x> = <q, x> = 1``. Requires 0 strictly inside the hull of the points.
    """
    hull = convex_hull_2d(points)
    if not _origin_strictly_inside_2d(hull):
        raise UnboundedSet("origin is not strictly inside the hull; polar is unbounded")
    nxt = np.roll(hull, -1, axis=0)
    det = hull[:, 0] * nxt[:, 1] - hull[:, 1] * nxt[:, 0]
    verts = np.column_stack([(nxt[:, 1] - hull[:, 1]) / det, (hull[:, 0] - nxt[:, 0]) / det])
    order = np.argsort(np.arctan2(verts[:, 1], verts[:, 0]), kind="stable")
    return verts[order]


class ConvexSet:
    """Base class; subclasses define ``dim`` and the evaluation methods."""

    kind = "abstract"
    dim: int

    def gauge_many(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def support_many(self, U: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x, tol: float = CONE_TOL) -> bool:
        return bool(self.gauge_many(np.atleast_2d(x))[0] <= 1.0 + tol)

    def classify(self) -> SetClass:
        raise NotImplementedError

    def norm_bounds(self) -> tuple[float, float]:
        """``(|C|, r_C)``: circumradius about 0 and radius of a ball about 0 inside C."""
        raise UnboundedSet(f"{self.kind} is not bounded")

    def to_doc(self) -> dict:
        raise NotImplementedError

    @property
    def is_cone(self) -> bool:
        return self.classify().cone

    @property
    def is_bounded(self) -> bool:
        return self.classify().bounded


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    radius: float
    dim: int

    kind = "ball"

    def __post_init__(self):
        if not self.radius > 0 or self.dim < 1:
            raise ValueError("ball needs radius > 0 and dim >= 1")

    def gauge_many(self, X):
        return np.linalg.norm(X, axis=1) / self.radius

    def support_many(self, U):
        return self.radius * np.linalg.norm(U, axis=1)

    def classify(self):
        return SetClass(True, True, False, True)

    def norm_bounds(self):
        return float(self.radius), float(self.radius)

    def to_doc(self):
        return {"kind": "ball", "radius": float(self.radius), "dim": int(self.dim)}


def _quadratic_norm(X, M):
    """Row-wise sqrt(x^T M x), rescaled first so tiny or huge x neither underflow nor overflow."""
    X = np.asarray(X, dtype=float)
    s = np.max(np.abs(X), axis=1, keepdims=True)
    s = np.where(s > 0, s, 1.0)
    Y = X / s
    q = np.einsum("ij,jk,ik->i", Y, M, Y)
    return s[:, 0] * np.sqrt(np.maximum(q, 0.0))


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexSet):
    """``{x : <Ax, x> <= 1}`` for symmetric positive definite ``A``."""

    matrix: np.ndarray

    kind = "ellipsoid"

    def __post_init__(self):
        A = linalg.as_matrix(self.matrix)
        if not linalg.is_positive_definite(A):
            raise NotPositiveDefinite("ellipsoid matrix must be symmetric positive definite")
        object.__setattr__(self, "matrix", 0.5 * (A + A.T))

    @property
    def dim(self):
        return self.matrix.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        Ai = np.linalg.inv(self.matrix)
        return 0.5 * (Ai + Ai.T)

    def gauge_many(self, X):
        return _quadratic_norm(X, self.matrix)

    def support_many(self, U):
        return _quadratic_norm(U, self.inverse)

    def classify(self):
        return SetClass(True, True, False, True)

    def norm_bounds(self):
        lam = linalg.sym_eig(self.matrix).eigvalues
        return float(1.0 / math.sqrt(lam[0])), float(1.0 / math.sqrt(lam[-1]))

    def to_doc(self):
        return {"kind": "ellipsoid", "matrix": self.matrix.tolist()}


def _dual_points(P: np.ndarray):
    """Facets ``<a, x> <= 1`` of ``conv(P)`` for ``n >= 3``, i.e. the vertices of its polar.

    ``None`` when qhull fails or 0 is not safely interior; callers then fall
    back to per-point LPs.
    """
    if P.shape[1] < 3:
        return None
    from scipy.spatial import ConvexHull, QhullError

    try:
        eq = ConvexHull(P).equations
    except (QhullError, ValueError):
        return None
    offset = -eq[:, -1]
    if np.min(offset) <= 1e-12 * float(np.max(np.linalg.norm(P, axis=1))):
        return None
    return eq[:, :-1] / offset[:, None]


def _h_support(normals: np.ndarray, U: np.ndarray, verts2d) -> np.ndarray:
    if verts2d is not None:
        return np.max(U @ verts2d.T, axis=1)
    out = np.empty(U.shape[0])
    for k, u in enumerate(U):
        try:
            out[k] = linalg.lp_support(u, normals)
        except UnboundedLP:
            out[k] = INF
    return out


@dataclass(frozen=True, eq=False)
class PolytopeV(ConvexSet):
    """Convex hull of ``vertices`` (rows); 0 must lie in its interior.

    Redundant or repeated vertices are accepted as given.
    """

    vertices: np.ndarray

    kind = "polytope_v"

    def __post_init__(self):
        V = _rows(self.vertices, "vertices")
        object.__setattr__(self, "vertices", V)
        if V.shape[1] == 2:
            self._polar_vertices  # validates 0 in the interior

    @property
    def dim(self):
        return self.vertices.shape[1]

    @cached_property
    def _polar_vertices(self):
        """Facet normals scaled to ``<a, x> <= 1``: the vertices of the polar.

        Closed form in 2D; one qhull call in higher dimension, falling back
        to per-point LPs (``None``) when qhull cannot certify 0 as interior.
        """
        if self.dim == 2:
            return polar_vertices_2d(self.vertices)
        return _dual_points(self.vertices)

    def gauge_many(self, X):
        # gauge of C is the support function of its polar {y : <v_i, y> <= 1}
        return _h_support(self.vertices, X, self._polar_vertices)

    def support_many(self, U):
        return np.max(U @ self.vertices.T, axis=1)

    def classify(self):
        return SetClass(True, True, False, _symmetric_point_set(self.vertices))

    def norm_bounds(self):
        outer = float(np.max(np.linalg.norm(self.vertices, axis=1)))
        if self.dim == 1:
            return outer, float(min(-self.vertices.min(), self.vertices.max()))
        from scipy.spatial import ConvexHull

        eq = ConvexHull(self.vertices).equations
        return outer, float(np.min(-eq[:, -1] / np.linalg.norm(eq[:, :-1], axis=1)))

    def to_doc(self):
        return {"kind": "polytope_v", "vertices": self.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class PolytopeH(ConvexSet):
    """``{x : <a_i, x> <= 1 for every row a_i}``, bounded with 0 in the interior."""

    normals: np.ndarray

    kind = "polytope_h"

    def __post_init__(self):
        A = _rows(self.normals, "normals")
        if np.any(np.all(A == 0.0, axis=1)):
            raise ValueError("zero constraint row")
        object.__setattr__(self, "normals", A)
        if A.shape[1] == 2:
            self._vertex_list

    @property
    def dim(self):
        return self.normals.shape[1]

    @cached_property
    def _vertex_list(self):
        """Vertex list (2D closed form, qhull facet duality above), or ``None`` for the LP path."""
        if self.dim == 2:
            return polar_vertices_2d(self.normals)
        return _dual_points(self.normals)

    def vertices(self) -> np.ndarray:
        """Vertex enumeration; closed form in 2D, facet duality via qhull otherwise."""
        if self.dim == 1:
            a = self.normals[:, 0]
            return np.array([[1.0 / a[a < 0].max()], [1.0 / a[a > 0].max()]])
        if self._vertex_list is None:
            raise UnboundedSet("vertex enumeration failed: 0 is not interior to the polar hull")
        return self._vertex_list

    def gauge_many(self, X):
        return np.maximum(0.0, np.max(X @ self.normals.T, axis=1))

    def support_many(self, U):
        return _h_support(self.normals, U, self._vertex_list)

    def classify(self):
        return SetClass(True, True, False, _symmetric_point_set(self.normals))

    def norm_bounds(self):
        outer = float(np.max(np.linalg.norm(self.vertices(), axis=1)))
        return outer, float(1.0 / np.max(np.linalg.norm(self.normals, axis=1)))

    def to_doc(self):
        return {"kind": "polytope_h", "normals": self.normals.tolist()}


class _Cone(ConvexSet):
    """Closed convex cone; gauge and support are 0/inf indicators."""

    def member(self, x, tol: float = CONE_TOL) -> bool:
        raise NotImplementedError

    def polar_member(self, u, tol: float = CONE_TOL) -> bool:
        raise NotImplementedError

    def boundary_slack(self, u) -> float | None:
        """Signed distance-like slack of a unit vector (positive inside), if closed form."""
        return None

    def contains(self, x, tol: float = CONE_TOL) -> bool:
        return self.member(np.asarray(x, dtype=float).ravel(), tol)

    def gauge_many(self, X):
        return np.array([0.0 if self.member(x) else INF for x in X])

    def support_many(self, U):
        return np.array([0.0 if self.polar_member(u) else INF for u in U])

    def classify(self):
        return SetClass(False, False, True, False)


def _in_generated_cone(gens: np.ndarray, x: np.ndarray, tol: float) -> bool:
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return True
    _, resid = nnls(gens.T, x)
    return bool(resid <= max(tol, 1e-12) * nx)


@dataclass(frozen=True, eq=False)
class ConeV(_Cone):
    generators: np.ndarray

    kind = "cone_v"

    def __post_init__(self):
        g = _rows(self.generators, "generators")
        if np.any(np.linalg.norm(g, axis=1) == 0.0):
            raise ValueError("zero generator")
        object.__setattr__(self, "generators", g)

    @property
    def dim(self):
        return self.generators.shape[1]

    @cached_property
    def facet_normals(self) -> np.ndarray | None:
        """Unit rows ``a_f`` with cone ``= {x : <a_f, x> <= 0}``, or ``None``.

        The facets of ``conv({0} ∪ generators)`` through the origin describe
        the cone exactly whenever that hull is full-dimensional.
        """
        from scipy.spatial import ConvexHull, QhullError

        g = self.generators / np.linalg.norm(self.generators, axis=1, keepdims=True)
        if self.dim < 2:
            return None
        try:
            eq = ConvexHull(np.vstack([np.zeros(self.dim), g])).equations
        except (QhullError, ValueError):
            return None
        through0 = eq[np.abs(eq[:, -1]) <= 1e-12, :-1]
        return through0 / np.linalg.norm(through0, axis=1, keepdims=True) if len(through0) else through0

    def boundary_slack(self, u):
        a = self.facet_normals
        if a is None:
            return None
        return float(-np.max(a @ u)) if len(a) else INF

    def member(self, x, tol=CONE_TOL):
        x = np.asarray(x, dtype=float).ravel()
        if self.facet_normals is not None:
            return self.boundary_slack(x) >= -tol * np.linalg.norm(x)
        return _in_generated_cone(self.generators, x, tol)

    def polar_member(self, u, tol=CONE_TOL):
        g = self.generators
        bound = tol * np.linalg.norm(g, axis=1) * np.linalg.norm(u)
        return bool(np.all(g @ u <= bound))

    def to_doc(self):
        return {"kind": "cone_v", "generators": self.generators.tolist()}


@dataclass(frozen=True, eq=False)
class ConeH(_Cone):
    """``{x : <a_i, x> <= 0 for every row a_i}``."""

    normals: np.ndarray

    kind = "cone_h"

    def __post_init__(self):
        a = _rows(self.normals, "normals")
        if np.any(np.linalg.norm(a, axis=1) == 0.0):
            raise ValueError("zero constraint row")
        object.__setattr__(self, "normals", a)

    @property
    def dim(self):
        return self.normals.shape[1]

    def boundary_slack(self, u):
        a = self.normals
        return float(-np.max(a @ u / np.linalg.norm(a, axis=1)))

    def member(self, x, tol=CONE_TOL):
        return self.boundary_slack(x) >= -tol * np.linalg.norm(x)

    def polar_member(self, u, tol=CONE_TOL):
        return _in_generated_cone(self.normals, u, tol)

    def to_doc(self):
        return {"kind": "cone_h", "normals": self.normals.tolist()}


@dataclass(frozen=True, eq=False)
class LorentzCone(_Cone):
    """Circular cone of half-aperture pi/4 about a unit ``axis``."""

    axis: np.ndarray

    kind = "lorentz"

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=float).ravel()
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValueError("Lorentz cone axis must be a unit vector")
        object.__setattr__(self, "axis", a)

    @property
    def dim(self):
        return self.axis.shape[0]

    def boundary_slack(self, u):
        return float(self.axis @ u - INV_SQRT2 * np.linalg.norm(u))

    def member(self, x, tol=CONE_TOL):
        return bool(self.axis @ x >= (INV_SQRT2 - tol) * np.linalg.norm(x))

    def polar_member(self, u, tol=CONE_TOL):
        return bool(-self.axis @ u >= (INV_SQRT2 - tol) * np.linalg.norm(u))

    def to_doc(self):
        return {"kind": "lorentz", "axis": self.axis.tolist()}


@dataclass(frozen=True, eq=False)
class Orthant(_Cone):
    """``{x : s_i x_i >= 0}`` for a sign vector ``s``."""

    signs: np.ndarray

    kind = "orthant"

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=float).ravel()
        if not np.all(np.abs(s) == 1.0):
            raise ValueError("orthant signs must be +-1")
        object.__setattr__(self, "signs", s)

    @property
    def dim(self):
        return self.signs.shape[0]

    def boundary_slack(self, u):
        return float(np.min(self.signs * u))

    def member(self, x, tol=CONE_TOL):
        return bool(np.min(self.signs * x) >= -tol * np.linalg.norm(x))

    def polar_member(self, u, tol=CONE_TOL):
        return bool(np.max(self.signs * u) <= tol * np.linalg.norm(u))

    def to_doc(self):
        return {"kind": "orthant", "signs": [int(v) for v in self.signs]}


def _exact(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, Fraction):
        return v
    return float(v)


@dataclass(frozen=True)
class Interval(ConvexSet):
    """Closed interval ``[lo, hi]`` in the line with ``lo <= 0 <= hi``.

    Endpoints may be ``Fraction`` (exact arithmetic), ``float`` or ``+-inf``.
    """

    lo: object
    hi: object

    kind = "interval"
    dim = 1

    def __post_init__(self):
        lo, hi = _exact(self.lo), _exact(self.hi)
        if not (lo <= 0 <= hi):
            raise ValueError(f"interval must satisfy lo <= 0 <= hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def gauge(self, x):
        if x > 0:
            return INF if self.hi == 0 else (0 if self.hi == INF else x / self.hi)
        if x < 0:
            return INF if self.lo == 0 else (0 if self.lo == -INF else x / self.lo)
        return 0

    def support(self, u):
        if u > 0:
            return INF if self.hi == INF else u * self.hi
        if u < 0:
            return INF if self.lo == -INF else u * self.lo
        return 0

    def gauge_many(self, X):
        return np.array([float(self.gauge(x[0])) for x in X])

    def support_many(self, U):
        return np.array([float(self.support(u[0])) for u in U])

    def contains(self, x, tol=0.0):
        x = x if isinstance(x, (Fraction, int, float)) else float(np.asarray(x).ravel()[0])
        return bool(self.lo - tol <= x <= self.hi + tol)

    def classify(self):
        finite = self.lo != -INF and self.hi != INF
        zero_int = self.lo < 0 < self.hi
        is_ray = not finite and self.lo in (0, -INF) and self.hi in (0, INF)
        return SetClass(finite, zero_int, is_ray, self.lo == -self.hi)

    def norm_bounds(self):
        if not self.classify().bounded:
            raise UnboundedSet("interval is unbounded")
        return float(max(-self.lo, self.hi)), float(min(-self.lo, self.hi))

    def to_doc(self):
        def enc(v):
            if v == INF:
                return "inf"
            if v == -INF:
                return "-inf"
            return float(v)

        return {"kind": "interval", "lo": enc(self.lo), "hi": enc(self.hi)}

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


def square(half_width: float = 1.0) -> PolytopeV:
    s = half_width
    return PolytopeV([[s, s], [-s, s], [-s, -s], [s, -s]])


def rhombus(radius: float = 1.0) -> PolytopeV:
    t = radius
    return PolytopeV([[t, 0.0], [0.0, t], [-t, 0.0], [0.0, -t]])


def _check(C: ConvexSet, x) -> np.ndarray:
    X = np.asarray(x, dtype=float)
    X = X.reshape(1, -1) if X.ndim <= 1 else X
    if X.shape[1] != C.dim:
        raise DimensionMismatch(f"set has dimension {C.dim}, vector has {X.shape[1]}")
    return X


def gauge(C: ConvexSet, x):
    """Gauge of ``C`` at ``x`` (a vector, or an ``(m, n)`` batch)."""
    if isinstance(C, Interval) and np.ndim(x) == 0:
        return C.gauge(_exact(x))
    X = _check(C, x)
    out = C.gauge_many(X)
    return float(out[0]) if np.ndim(x) <= 1 else out


def support(C: ConvexSet, u):
    """Support function of ``C`` at ``u`` (a vector, or an ``(m, n)`` batch)."""
    if isinstance(C, Interval) and np.ndim(u) == 0:
        return C.support(_exact(u))
    U = _check(C, u)
    out = C.support_many(U)
    return float(out[0]) if np.ndim(u) <= 1 else out


def contains(C: ConvexSet, x, tol: float = CONE_TOL) -> bool:
    if isinstance(C, Interval):
        return C.contains(x if np.ndim(x) == 0 else _check(C, x)[0], tol)
    return C.contains(_check(C, x)[0], tol)


def classify(C: ConvexSet) -> SetClass:
    return C.classify()

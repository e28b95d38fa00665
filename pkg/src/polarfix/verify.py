"""Residual certificates for ``C = (GC)°``.

For compact convex sets ``sup_|u|=1 |h_C(u) - h_D(u)|`` is the Hausdorff
distance, so sampling it over finitely many directions gives a lower bound:
a Fail is rigorous, a Pass means no violation was found at that resolution.
Cones are compared by membership of sampled unit directions, and 1D intervals
by exact endpoint arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import DimensionMismatch, NotACone, UnboundedSet
from . import linalg
from .polarity import as_operator, polarity_map, pushforward
from .sets import INF, ConvexSet, Ellipsoid, Interval, PolytopeH, PolytopeV, _Cone, gauge

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
PLASTIC = 1.32471795724474602596


def sample_directions(n: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` unit vectors in ``R^n`` arranged as antipodal pairs ``u, -u``.

    Low-discrepancy Kronecker sequences in 2D (golden ratio) and 3D (the R2
    sequence mapped area-preservingly onto the sphere); seeded Gaussians
    otherwise. The sequence is nested: the first ``k`` directions never depend
    on ``count``.
    """
    m = (count + 1) // 2
    rng = np.random.default_rng(seed)
    if n == 1:
        base = np.ones((m, 1))
    elif n == 2:
        t = (rng.random() + GOLDEN * np.arange(m)) % 1.0
        base = np.column_stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)])
    elif n == 3:
        shift = rng.random(2)
        j = np.arange(m)[:, None]
        t = (shift + j * np.array([1.0 / PLASTIC, 1.0 / PLASTIC**2])) % 1.0
        z = 1.0 - 2.0 * t[:, 0]
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = 2 * np.pi * t[:, 1]
        base = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        base = np.empty((m, n))
        for k in range(m):
            base[k] = rng.standard_normal(n)
        base /= np.linalg.norm(base, axis=1, keepdims=True)
    out = np.empty((2 * m, n))
    out[0::2] = base
    out[1::2] = -base
    return out[:count]


@dataclass
class ResidualReport:
    kind: str  # "support" | "gauge" | "cone_membership" | "interval_exact"
    num_directions: int
    max_residual: object
    argmax_direction: list
    tolerance: float
    sanity: dict = field(default_factory=dict)
    samples: np.ndarray | None = None
    exact: bool = False

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_doc(self) -> dict:
        r = self.max_residual
        return {
            "kind": self.kind,
            "dirs": int(self.num_directions),
            "max_residual": "inf" if r == INF else float(r),
            "argmax": [float(v) for v in self.argmax_direction],
            "verdict": self.verdict,
            "tolerance": float(self.tolerance),
            "sanity": {k: bool(v) for k, v in self.sanity.items()},
        }


def _abs_gap(a, b):
    if a == b:  # covers equal infinities
        return 0
    if INF in (a, b) or -INF in (a, b):
        return INF
    return abs(a - b)


def _require_same_dim(C, D):
    if C.dim != D.dim:
        raise DimensionMismatch(f"sets of dimension {C.dim} and {D.dim}")


def support_residual(C: ConvexSet, D: ConvexSet, dirs: int = 512, seed: int = 0,
                     tol: float = DEFAULT.tolerance, keep_samples: bool = False) -> ResidualReport:
    """Max over sampled unit directions of ``|h_C(u) - h_D(u)|``."""
    _require_same_dim(C, D)
    for S in (C, D):
        cls = S.classify()
        if not (cls.bounded and cls.zero_interior):
            raise UnboundedSet(f"{S.kind} is not bounded with 0 in its interior; use cone_residual")
    U = sample_directions(C.dim, dirs, seed)
    diff = np.abs(C.support_many(U) - D.support_many(U))
    k = int(np.argmax(diff))
    return ResidualReport("support", len(U), float(diff[k]), U[k].tolist(), tol,
                          samples=diff if keep_samples else None)


def _rounding_map(C: ConvexSet) -> np.ndarray:
    """Linear map ``L`` making ``L C`` roughly isotropic, equivariant under ``C -> MC``.

    ``L = S^{-1/2}`` with ``S`` the vertex second-moment matrix (polytopes) or
    the shape matrix ``A⁻¹`` (ellipsoids); the identity otherwise.
    """
    if isinstance(C, PolytopeV):
        V = C.vertices
    elif isinstance(C, PolytopeH):
        V = C.vertices()
    elif isinstance(C, Ellipsoid):
        return linalg.sym_eig(C.matrix).map_eigenvalues(np.sqrt)
    else:
        return np.eye(C.dim)
    S = V.T @ V / len(V)
    return linalg.sym_eig(S).map_eigenvalues(lambda w: 1.0 / np.sqrt(w))


def normalized_support_residual(C: ConvexSet, D: ConvexSet, dirs: int = 512, seed: int = 0,
                                tol: float = DEFAULT.tolerance) -> ResidualReport:
    """:func:`support_residual` after mapping both sets by ``C``'s rounding map.

    Unchanged (up to a rotation) when ``C`` and ``D`` are moved by a common
    linear map, so an orbit that collapses one axis while stretching another
    cannot look convergent merely because its sets become thin.
    """
    _require_same_dim(C, D)
    L = _rounding_map(C)
    rep = support_residual(pushforward(L, C), pushforward(L, D), dirs, seed, tol)
    rep.kind = "support_normalized"
    return rep


def gauge_residual(C: ConvexSet, D: ConvexSet, dirs: int = 512, seed: int = 0,
                   tol: float = DEFAULT.tolerance) -> ResidualReport:
    _require_same_dim(C, D)
    U = sample_directions(C.dim, dirs, seed)
    diff = np.abs(C.gauge_many(U) - D.gauge_many(U))
    k = int(np.argmax(diff))
    return ResidualReport("gauge", len(U), float(diff[k]), U[k].tolist(), tol)


def _near_boundary(C: _Cone, u: np.ndarray, margin: float) -> bool:
    slack = C.boundary_slack(u)
    if slack is not None:
        return abs(slack) <= margin
    # no closed-form slack (generator cones): probe membership under small kicks
    ref = C.member(u)
    for k in range(len(u)):
        for s in (margin, -margin):
            v = u.copy()
            v[k] += s
            if C.member(v) != ref:
                return True
    return False


def cone_residual(C: ConvexSet, D: ConvexSet, dirs: int = 10_000, seed: int = 0,
                  margin: float = DEFAULT.margin) -> ResidualReport:
    """Count sampled unit directions on which cone memberships disagree.

    Directions within ``margin`` of either boundary are skipped. The report's
    ``max_residual`` is the disagreement count; Pass iff it is zero.
    """
    _require_same_dim(C, D)
    for S in (C, D):
        if not isinstance(S, _Cone):
            raise NotACone(f"{S.kind} is not a cone representation")
    U = sample_directions(C.dim, dirs, seed)
    bad, first, skipped = 0, None, 0
    for u in U:
        if _near_boundary(C, u, margin) or _near_boundary(D, u, margin):
            skipped += 1
            continue
        if C.member(u, 0.0) != D.member(u, 0.0):
            bad += 1
            if first is None:
                first = u
    rep = ResidualReport("cone_membership", len(U) - skipped,
                         bad, (first if first is not None else np.zeros(C.dim)).tolist(), 0)
    return rep


def interval_residual(C: Interval, D: Interval, tol: float = 0) -> ResidualReport:
    """Exact endpoint gap ``max(|lo_C - lo_D|, |hi_C - hi_D|)``."""
    gap = max(_abs_gap(C.lo, D.lo), _abs_gap(C.hi, D.hi), key=float)
    exact = all(isinstance(v, (int, Fraction)) or v in (INF, -INF) for v in (C.lo, C.hi, D.lo, D.hi))
    arg = [1.0] if _abs_gap(C.hi, D.hi) >= _abs_gap(C.lo, D.lo) else [-1.0]
    return ResidualReport("interval_exact", 2, gap, arg, tol, exact=exact)


def set_distance(C: ConvexSet, D: ConvexSet, config: RunConfig = DEFAULT) -> ResidualReport:
    """Dispatch to the residual appropriate for the pair's representations."""
    if isinstance(C, Interval) and isinstance(D, Interval):
        return interval_residual(C, D, config.tolerance)
    if isinstance(C, _Cone) or isinstance(D, _Cone):
        return cone_residual(C, D, config.dirs, config.seed, config.margin)
    return support_residual(C, D, config.dirs, config.seed, config.tolerance)


def verify_fixed_point(G, C: ConvexSet, config: RunConfig = DEFAULT) -> ResidualReport:
    """Certify (or refute) ``C = (GC)°``.

    Sanity flags: ``zero_in_set`` (``0 ∈ C`` and ``gauge(C, 0) = 0``), which
    every solution must satisfy.
    """
    G = as_operator(G)
    D = polarity_map(G, C)
    rep = set_distance(C, D, config)
    zero = np.zeros(C.dim)
    g0 = gauge(C, 0) if isinstance(C, Interval) else gauge(C, zero)
    rep.sanity = {"zero_in_set": bool(C.contains(zero if C.dim > 1 else 0)) and g0 == 0}
    return rep

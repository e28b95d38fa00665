"""Legendre-Fenchel conjugates: closed forms and brute-force grid transforms.

The grid transform is the exact supremum over grid nodes. In 2D the double
maximum is taken one axis at a time, ``max_x1 (y1 x1 + max_x2 (y2 x2 - f))``,
which visits the same node pairs as the naive O(N^2) sweep at O(N^1.5) cost.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import linalg
from .errors import NotPositiveDefinite, UnboundedSet
from .polarity import as_operator
from .sets import ConvexSet, gauge, support

DUAL_BOX_SHRINK = 0.8
_CHUNK_BYTES = 64 * 2**20


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a function on a regular box grid (1D or 2D).

    ``reliable`` (optional) flags nodes whose value is trusted, e.g. conjugate
    nodes whose maximiser was interior to the primal box.
    """

    box: tuple
    values: np.ndarray
    reliable: np.ndarray | None = None

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != len(box) or vals.ndim not in (1, 2):
            raise ValueError("grid work is limited to 1D and 2D")
        if any(not lo <= 0.0 <= hi for lo, hi in box):
            raise ValueError("grid box must contain 0")
        if min(vals.shape) < 9:
            raise ValueError("need at least 9 nodes per axis")
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid values must be finite")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, fn, box, nodes) -> "GridFunction":
        """Evaluate ``fn`` on an ``(N, d)`` array of grid points."""
        box = [tuple(b) for b in box]
        nodes = [nodes] * len(box) if np.ndim(nodes) == 0 else list(nodes)
        axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(box, nodes)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.column_stack([m.ravel() for m in mesh])
        return cls(box, np.asarray(fn(pts), dtype=float).reshape(mesh[0].shape))

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def resolution(self) -> tuple:
        return self.values.shape

    @property
    def axes(self) -> list:
        return [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.box, self.resolution)]

    @property
    def h(self) -> float:
        return max((hi - lo) / (n - 1) for (lo, hi), n in zip(self.box, self.resolution))

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.column_stack([m.ravel() for m in mesh])

    def __call__(self, pts) -> np.ndarray:
        """Multilinear interpolation; NaN outside the box or at unreliable cells."""
        pts = np.asarray(pts, dtype=float).reshape(-1, self.dim)
        interp = RegularGridInterpolator(self.axes, self.values, bounds_error=False, fill_value=np.nan)
        out = interp(pts)
        if self.reliable is not None:
            mask = RegularGridInterpolator(self.axes, self.reliable.astype(float),
                                           bounds_error=False, fill_value=0.0)(pts)
            out[mask < 1.0 - 1e-12] = np.nan
        return out

    def to_csv_rows(self):
        """Yield ``(*coords, value)`` per node."""
        for p, v in zip(self.points(), self.values.ravel()):
            yield (*p.tolist(), float(v))


def default_dual_box(f: GridFunction) -> list:
    """Per axis, ``0.8 *`` the range of the partial derivative over the grid.

    Keeps dual nodes away from slopes only attained on the primal boundary, so
    their maximisers stay interior.
    """
    grads = np.gradient(f.values, *f.axes)
    grads = [grads] if f.dim == 1 else grads
    return [(DUAL_BOX_SHRINK * min(g.min(), 0.0), DUAL_BOX_SHRINK * max(g.max(), 0.0)) for g in grads]


def _max_over_last(slopes, nodes, vals):
    """``max_i (slopes[j] * nodes[i] - vals[..., i])`` and its argmax, chunked."""
    lead = vals.shape[:-1]
    M, N = len(slopes), len(nodes)
    out = np.empty(lead + (M,))
    arg = np.empty(lead + (M,), dtype=np.int64)
    flat_v = vals.reshape(-1, N)
    flat_o, flat_a = out.reshape(-1, M), arg.reshape(-1, M)
    step = max(1, _CHUNK_BYTES // (8 * M * N))
    lin = slopes[:, None] * nodes[None, :]
    for s in range(0, flat_v.shape[0], step):
        block = lin[None, :, :] - flat_v[s : s + step, None, :]
        a = np.argmax(block, axis=2)
        flat_a[s : s + step] = a
        flat_o[s : s + step] = np.take_along_axis(block, a[..., None], axis=2)[..., 0]
    return out, arg


def legendre_grid(f: GridFunction, dual_box=None, nodes=None) -> GridFunction:
    """Discrete conjugate ``f*(y) = max over grid nodes x of <y, x> - f(x)``.

    Returns a :class:`GridFunction` on ``dual_box`` (default
    :func:`default_dual_box`) whose ``reliable`` mask marks dual nodes with an
    interior maximiser.
    """
    dual_box = default_dual_box(f) if dual_box is None else [tuple(b) for b in dual_box]
    nodes = f.resolution if nodes is None else ([nodes] * f.dim if np.ndim(nodes) == 0 else nodes)
    dual_axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(dual_box, nodes)]
    x_axes = f.axes
    if f.dim == 1:
        vals, arg = _max_over_last(dual_axes[0], x_axes[0], f.values[None, :])
        vals, arg = vals[0], arg[0]
        reliable = (arg > 0) & (arg < len(x_axes[0]) - 1)
    else:
        # g[i1, j2] = max_i2 (y2 x2 - f(x1, x2))
        g, arg2 = _max_over_last(dual_axes[1], x_axes[1], f.values)
        # f*[j1, j2] = max_i1 (y1 x1 + g[i1, j2])
        vals_t, arg1 = _max_over_last(dual_axes[0], x_axes[0], -g.T)
        vals, arg1 = vals_t.T, arg1.T
        j2 = np.broadcast_to(np.arange(len(dual_axes[1]))[None, :], arg1.shape)
        a2 = arg2[arg1, j2]
        n1, n2 = len(x_axes[0]), len(x_axes[1])
        reliable = (arg1 > 0) & (arg1 < n1 - 1) & (a2 > 0) & (a2 < n2 - 1)
    return GridFunction(dual_box, vals, reliable)


def quadratic_conjugate(A, xstar) -> float:
    """Conjugate of ``x -> <Ax, x>/2`` at ``xstar``: ``<A⁻¹ x*, x*>/2``."""
    A = linalg.as_matrix(A)
    if not linalg.is_positive_definite(A):
        raise NotPositiveDefinite("A must be symmetric positive definite")
    xs = np.asarray(xstar, dtype=float).ravel()
    return 0.5 * float(xs @ np.linalg.solve(A, xs))


def gauge_power_conjugate(C: ConvexSet, p: float, xstar) -> float:
    """Conjugate of ``x -> gauge_C(x)^p / p`` at ``xstar``.

    For ``phi(t) = t^p/p`` the conjugate of ``phi o gauge_C`` is
    ``phi*(h_C(x*)) = h_C(x*)^q / q`` with ``1/p + 1/q = 1``.
    """
    cls = C.classify()
    if not (cls.bounded and cls.zero_interior):
        raise UnboundedSet("C must be bounded with 0 in its interior")
    if not p > 1:
        raise ValueError("p must exceed 1")
    q = p / (p - 1.0)
    xs = np.asarray(xstar, dtype=float).ravel()
    return float(support(C, xs)) ** q / q


def half_gauge_squared(C: ConvexSet):
    """``x -> gauge_C(x)^2 / 2`` as a batch callable."""
    return lambda pts: 0.5 * np.asarray(gauge(C, np.atleast_2d(pts)), dtype=float) ** 2


def fb_function(b: float):
    """``b^2 x^2 / 2`` for ``x <= 0`` and ``x^2 / (2 b^2)`` for ``x >= 0``."""
    if not b > 0:
        raise ValueError("b must be positive")

    def f(pts):
        x = np.asarray(pts, dtype=float).reshape(-1)
        return np.where(x <= 0, 0.5 * b * b * x * x, 0.5 * x * x / (b * b))

    return f


@dataclass(frozen=True)
class GridSpec:
    half_width: float = 4.0
    nodes: int = 513
    dim: int = 2

    @property
    def box(self):
        return [(-self.half_width, self.half_width)] * self.dim

    @property
    def h(self) -> float:
        return 2 * self.half_width / (self.nodes - 1)


def composed_residual(f: GridFunction, g: GridFunction, M) -> tuple[float, int]:
    """``max |f(x) - g(Mx)|`` over nodes ``x`` of ``f`` with ``Mx`` usable in ``g``.

    Returns the residual and the number of nodes that entered the max.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    X = f.points()
    gv = g(X @ M.T)
    ok = np.isfinite(gv)
    if not np.any(ok):
        return float("nan"), 0
    return float(np.max(np.abs(f.values.ravel()[ok] - gv[ok]))), int(ok.sum())


def fixedpoint_function_residual_detail(C: ConvexSet, G, grid: GridSpec = GridSpec()):
    G = as_operator(G)
    if G.dim != C.dim:
        raise ValueError("dimension mismatch")
    f = GridFunction.sample(half_gauge_squared(C), GridSpec(grid.half_width, grid.nodes, C.dim).box, grid.nodes)
    fstar = legendre_grid(f)
    return composed_residual(f, fstar, G.matrix.T)


def fixedpoint_function_residual(C: ConvexSet, G, grid: GridSpec = GridSpec()) -> float:
    """``max |f(x) - f*(Gᵀx)|`` for ``f = gauge_C²/2`` sampled on ``grid``.

    Vanishes up to grid error whenever ``C = (GC)°``.
    """
    return fixedpoint_function_residual_detail(C, G, grid)[0]


def functional_equation_residual(f: GridFunction, E) -> float:
    """``max |f(x) - f(E⁻¹Eᵀ x)|`` over grid nodes whose image stays in the box."""
    E = as_operator(E)
    return composed_residual(f, f, E.inverse @ E.matrix.T)[0]


def coercivity_check(A, samples: int = 10_000, seed: int = 0):
    """Coercivity constant ``beta = λ_min(A)`` and a unit vector attaining it.

    ``samples`` random unit vectors are also screened; a sampled quadratic
    form below ``beta`` would contradict optimality and raises.
    """
    A = linalg.as_matrix(A)
    beta = linalg.coercivity_constant(A)
    v = linalg.sym_eig(A).eigvectors[:, 0]
    if sampled_quadratic_min(A, samples, seed) < beta - 1e-10:
        raise AssertionError("sampled quadratic form dips below the coercivity constant")
    return beta, v


def sampled_quadratic_min(A, samples: int = 10_000, seed: int = 0) -> float:
    """Smallest ``<Ax, x>`` over seeded random unit vectors."""
    A = linalg.as_matrix(A)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples, A.shape[0]))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return float(np.min(np.einsum("ij,jk,ik->i", X, A, X)))

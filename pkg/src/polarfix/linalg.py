"""Dense real linear algebra for small operators.

Symmetric eigendecomposition is done with cyclic Jacobi rotations and support
functions of halfspace polytopes with a tableau simplex (Bland's rule). Both
are sized for desk-scale problems (n up to a few dozen, m up to ~1000 rows).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefinite, NotSymmetric, SingularOperator, UnboundedLP

TOL_ABS = 1e-10
TOL_REL = 1e-9


def as_matrix(M) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigvalues: np.ndarray  # ascending
    eigvectors: np.ndarray  # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        U = self.eigvectors
        return (U * self.eigvalues) @ U.T

    def map_eigenvalues(self, fn) -> np.ndarray:
        U = self.eigvectors
        out = (U * fn(self.eigvalues)) @ U.T
        return 0.5 * (out + out.T)


def is_symmetric(M, tol: float = TOL_ABS) -> bool:
    M = as_matrix(M)
    return bool(np.linalg.norm(M - M.T) <= tol * max(1.0, np.linalg.norm(M)))


def _jacobi(A: np.ndarray, max_sweeps: int = 100):
    A = A.copy()
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))  # direct: |A|² - |diag|² cancels
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:  # theta² would overflow; t ~ 1/(2 theta)
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    return np.diag(A).copy(), V


def sym_eig(M) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues come back ascending (stable order for ties) and each
    eigenvector is signed so that its largest-magnitude entry is positive.

    Raises:
        NotSymmetric: if ``M`` is not symmetric within relative tolerance 1e-10.
    """
    M = as_matrix(M)
    if not is_symmetric(M):
        raise NotSymmetric("matrix is not symmetric")
    vals, vecs = _jacobi(0.5 * (M + M.T))
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    for j in range(vecs.shape[1]):
        k = int(np.argmax(np.abs(vecs[:, j]) - 1e-12 * np.arange(vecs.shape[0])))
        if vecs[k, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return SpectralDecomposition(vals, vecs)


def spectral_abs(M) -> np.ndarray:
    """``U |Λ| Uᵀ``: the positive definite square root of ``M²``."""
    dec = sym_eig(M)
    if np.min(np.abs(dec.eigvalues)) < TOL_ABS:
        raise SingularOperator("spectral_abs needs all |eigenvalues| >= 1e-10")
    return dec.map_eigenvalues(np.abs)


def operator_norm(M) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_matrix(M), 2))


def is_positive_definite(M, tol: float = TOL_ABS) -> bool:
    M = as_matrix(M)
    if not is_symmetric(M, tol):
        return False
    return bool(sym_eig(M).eigvalues[0] > tol)


def is_unitary(M, tol: float = TOL_ABS) -> bool:
    M = as_matrix(M)
    return bool(np.linalg.norm(M.T @ M - np.eye(M.shape[0])) <= tol)


def coercivity_constant(A) -> float:
    """Largest β with ``<Ax, x> >= β|x|²``, i.e. ``λ_min(A) = 1/|A⁻¹|``."""
    A = as_matrix(A)
    if not is_symmetric(A):
        raise NotPositiveDefinite("matrix is not symmetric")
    lam = sym_eig(A).eigvalues[0]
    if lam <= TOL_ABS:
        raise NotPositiveDefinite(f"smallest eigenvalue {lam:.3g} is not positive")
    return float(lam)


def lp_support(c, normals) -> float:
    """Maximise ``<c, x>`` subject to ``<a_i, x> <= 1`` for every row ``a_i``.

    Dense tableau simplex with Bland's anti-cycling rule. The free variable is
    split as ``x = x⁺ - x⁻``; since the right-hand side is all ones the slack
    basis is feasible, so no phase one is needed. The optimal vertex is
    re-solved from its active constraints to polish round-off.

    Raises:
        UnboundedLP: if the objective is unbounded along ``c``.
    """
    c = np.asarray(c, dtype=float).ravel()
    A = np.atleast_2d(np.asarray(normals, dtype=float))
    m, n = A.shape
    if c.shape[0] != n:
        raise ValueError("dimension mismatch between c and normals")
    if np.any(np.all(A == 0.0, axis=1)):
        raise ValueError("zero constraint row")
    rownorm = np.linalg.norm(A, axis=1)
    eps = 1e-12
    nv = 2 * n + m
    T = np.zeros((m + 1, nv + 1))
    T[:m, :n] = A / rownorm[:, None]
    T[:m, n : 2 * n] = -T[:m, :n]
    T[:m, 2 * n : nv] = np.eye(m)
    T[:m, -1] = 1.0 / rownorm
    T[m, :n] = -c
    T[m, n : 2 * n] = c
    basis = list(range(2 * n, nv))
    for _ in range(50 * (nv + m) + 100):
        entering = next((j for j in range(nv) if T[m, j] < -eps * (1 + abs(T[m, -1]))), None)
        if entering is None:
            break
        col = T[:m, entering]
        rows = np.nonzero(col > eps)[0]
        if rows.size == 0:
            raise UnboundedLP("support is +inf along this direction")
        ratios = T[rows, -1] / col[rows]
        best = np.min(ratios)
        ties = rows[ratios <= best + 1e-14 * (1 + abs(best))]
        leave = min(ties, key=lambda r: basis[r])
        T[leave] /= T[leave, entering]
        for r in range(m + 1):
            if r != leave and T[r, entering] != 0.0:
                T[r] -= T[r, entering] * T[leave]
        basis[leave] = entering
    else:  # pragma: no cover - Bland's rule terminates
        raise RuntimeError("simplex did not terminate")

    x = np.zeros(nv)
    for r, b in enumerate(basis):
        x[b] = T[r, -1]
    xs = x[:n] - x[n : 2 * n]
    active = np.nonzero(A @ xs >= 1.0 - 1e-9)[0]
    if active.size >= n and np.linalg.matrix_rank(A[active]) == n:
        polished, *_ = np.linalg.lstsq(A[active], np.ones(active.size), rcond=None)
        if np.all(A @ polished <= 1.0 + 1e-9):
            xs = polished
    return float(c @ xs)


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_symmetric(rng: np.random.Generator, n: int, mixed_signs: bool = False,
                     lo: float = 0.1, hi: float = 10.0) -> np.ndarray:
    """``Q diag(λ) Qᵀ`` with |λ| log-uniform in ``[lo, hi]``.

    With ``mixed_signs`` the eigenvalue signs are random but at least one of
    each sign is present when ``n >= 2``.
    """
    lam = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    if mixed_signs:
        signs = rng.choice([-1.0, 1.0], size=n)
        if n >= 2:
            signs[0], signs[1] = -1.0, 1.0
            signs = rng.permutation(signs)
        lam = lam * signs
    Q = random_orthogonal(rng, n)
    M = (Q * lam) @ Q.T
    return 0.5 * (M + M.T)


def random_spd(rng: np.random.Generator, n: int, cond: float = 100.0) -> np.ndarray:
    """Random SPD matrix with condition number at most ``cond``."""
    lo = 0.1
    return random_symmetric(rng, n, lo=lo, hi=lo * cond)

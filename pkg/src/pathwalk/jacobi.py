"""
The Jacobi matrix J_{n+2} of the reflecting random walk on P_{n+2}.

J_{n+2} is symmetric tridiagonal with zero diagonal and off-diagonal entries

    sqrt(q), sqrt(pq), ..., sqrt(pq), sqrt(p)

Its eigenvalues are known in closed form (1, -1 and 2 sqrt(pq) cos(m pi/(n+1))),
and this module provides them together with two independent checks: the
characteristic polynomial built from the E_k recurrence, and a Sturm count
built from the leading principal minors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .core import ConsistencyError, WalkParameters

__all__ = [
    "JacobiMatrix",
    "JacobiSpectrum",
    "bisection_roots",
    "char_poly_D",
    "char_poly_E",
    "chebyshev_eigenvector",
    "chebyshev_u",
    "count_eigenvalues_below",
    "jacobi_eigenvalues",
    "jacobi_eigenvector",
    "jacobi_eigenvectors",
    "jacobi_matrix",
    "jacobi_spectrum",
    "leading_minors",
    "reflecting_transition_matrix",
    "stationary_measure",
]

BISECTION_TOL = 1e-13
BISECTION_MAXITER = 200
GRAM_CHECK_MAX_N = 512
_RESCALE_AT = 1e100


@dataclass(frozen=True)
class JacobiMatrix:
    """Zero-diagonal symmetric tridiagonal matrix stored by its off-diagonal."""

    off_diagonal: NDArray[np.float64]

    @property
    def dimension(self) -> int:
        return self.off_diagonal.size + 1

    @property
    def diagonal(self) -> NDArray[np.float64]:
        return np.zeros(self.dimension)

    def dense(self) -> NDArray[np.float64]:
        b = self.off_diagonal
        return np.diag(b, 1) + np.diag(b, -1)

    def matvec(self, v: NDArray) -> NDArray:
        """``J @ v`` for a vector or a stack of column vectors."""
        b = self.off_diagonal.reshape((-1,) + (1,) * (np.ndim(v) - 1))
        out = np.zeros_like(v, dtype=np.result_type(v, float))
        out[:-1] += b * v[1:]
        out[1:] += b * v[:-1]
        return out


def jacobi_matrix(params: WalkParameters) -> JacobiMatrix:
    p, q, n = params.p, params.q, params.n
    b = np.empty(n + 1)
    b[0] = np.sqrt(q)
    b[1:n] = np.sqrt(p * q)
    b[n] = np.sqrt(p)
    return JacobiMatrix(b)


def jacobi_eigenvalues(params: WalkParameters) -> NDArray[np.float64]:
    """Closed-form eigenvalues of J_{n+2}, in descending order."""
    n = params.n
    theta = np.arange(1, n + 1) * np.pi / (n + 1)
    return np.concatenate(([1.0], 2.0 * np.sqrt(params.p * params.q) * np.cos(theta), [-1.0]))


def chebyshev_u(k, theta):
    """
    Monic Chebyshev polynomial of the second kind, ``sin((k+1) theta) / sin(theta)``.

    Defined for ``k >= -1`` and ``theta`` strictly inside ``(0, pi)``;
    ``k = -1`` gives 0 and ``k = 0`` gives 1.
    """
    k = np.asarray(k)
    theta = np.asarray(theta, dtype=float)
    if np.any(k < -1):
        raise ValueError("chebyshev_u is defined for k >= -1")
    s = np.sin(theta)
    if np.any((theta <= 0.0) | (theta >= np.pi)) or np.any(s == 0.0):
        raise ValueError("theta must lie strictly inside (0, pi)")
    out = np.sin((k + 1) * theta) / s
    out = np.where(k == -1, 0.0, np.where(k == 0, 1.0, out))
    return out[()] if out.ndim == 0 else out


def char_poly_E(params: WalkParameters, lam: float, k: int) -> float:
    """
    ``E_k = det(lam I_k - sqrt(pq) A_k)`` with ``A_k`` the path adjacency matrix.

    Three-term recurrence ``E_k = lam E_{k-1} - pq E_{k-2}`` seeded with
    ``E_{-1} = 0`` and ``E_0 = 1``.
    """
    if k < -1:
        raise ValueError("E_k is defined for k >= -1")
    pq = params.p * params.q
    prev, cur = 0.0, 1.0
    if k == -1:
        return prev
    for _ in range(k):
        prev, cur = cur, lam * cur - pq * prev
    return cur


def char_poly_D(params: WalkParameters, lam: float, k: int) -> float:
    """
    ``det(lam I_k - J_k)`` for the k x k member of the Jacobi family.

    Uses ``D_k = lam^2 E_{k-2} - lam E_{k-3} + pq E_{k-4}`` (with ``E_{-2}``
    read as 0, which only matters for k = 2).
    """
    if not 3 <= k <= params.n + 2:
        raise ValueError(f"k must lie in 3..{params.n + 2}, got {k}")
    m = k - 2
    e_m = char_poly_E(params, lam, m)
    e_m1 = char_poly_E(params, lam, m - 1)
    e_m2 = char_poly_E(params, lam, m - 2) if m >= 1 else 0.0
    return lam * lam * e_m - lam * e_m1 + params.p * params.q * e_m2


def leading_minors(params: WalkParameters, lam: float) -> NDArray[np.float64]:
    """
    ``P_k(lam) = det(lam I_k - [J]_k)`` for the leading k x k blocks, k = 0..n+2.

    Plain (unscaled) recurrence; intended for small n.
    """
    b2 = jacobi_matrix(params).off_diagonal ** 2
    P = np.empty(params.n + 3)
    P[0] = 1.0
    P[1] = lam
    for k in range(2, params.n + 3):
        P[k] = lam * P[k - 1] - b2[k - 2] * P[k - 2]
    return P


def count_eigenvalues_below(params: WalkParameters, x: float) -> int:
    """
    Number of eigenvalues of J_{n+2} strictly below ``x`` (Sturm count).

    Counts negative pivots of the LDL^T factorisation of ``J - x I``, i.e.
    sign changes in the ratio form of the leading-minor sequence.
    """
    b2 = jacobi_matrix(params).off_diagonal ** 2
    tiny = np.finfo(float).tiny
    d = -x
    count = int(d < 0)
    for bb in b2:
        if d == 0.0:
            d = tiny
        d = -x - bb / d
        count += int(d < 0)
    return count


def _bisect(f, lo, hi, tol=BISECTION_TOL, maxiter=BISECTION_MAXITER):
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ConsistencyError(f"no sign change on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or hi - lo < tol:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisection_roots(params: WalkParameters, tol: float = BISECTION_TOL) -> NDArray[np.float64]:
    """
    Roots of ``D_{n+2}`` found by bisection, in descending order.

    Brackets are cut at the midpoints between consecutive closed-form
    eigenvalues (extended to +-1.5 at the ends). The Sturm count must see
    exactly n+2 eigenvalues in total and exactly one per bracket, otherwise
    :class:`ConsistencyError` is raised.
    """
    n = params.n
    k = n + 2
    lam = jacobi_eigenvalues(params)
    edges = np.concatenate(([1.5], 0.5 * (lam[:-1] + lam[1:]), [-1.5]))
    total = count_eigenvalues_below(params, edges[0]) - count_eigenvalues_below(params, edges[-1])
    if total != k:
        raise ConsistencyError(f"Sturm count found {total} eigenvalues, expected {k}")

    def D(x):
        return char_poly_D(params, x, k)

    roots = np.empty(k)
    for m in range(k):
        hi, lo = edges[m], edges[m + 1]
        inside = count_eigenvalues_below(params, hi) - count_eigenvalues_below(params, lo)
        if inside != 1:
            raise ConsistencyError(f"bracket [{lo}, {hi}] holds {inside} eigenvalues")
        roots[m] = _bisect(D, lo, hi, tol=tol)
    return roots


def _recurrence_columns(b: NDArray, lam: NDArray) -> NDArray:
    """
    Eigenvector columns from ``v_{j+1} = (lam v_j - b_{j-1} v_{j-1}) / b_j``, v_0 = 1.

    This is P_j(lam) / (b_0 ... b_{j-1}) evaluated without forming the
    (under/overflowing) minors and products. Columns are rescaled whenever
    they grow past 1e100; the scale factors are positive so signs survive.
    """
    size = b.size + 1
    V = np.empty((size, lam.size))
    V[0] = 1.0
    V[1] = lam / b[0]
    for j in range(1, size - 1):
        V[j + 1] = (lam * V[j] - b[j - 1] * V[j - 1]) / b[j]
        big = np.abs(V[j + 1]) > _RESCALE_AT
        if np.any(big):
            V[: j + 2, big] /= _RESCALE_AT
    return V


def _edge_vector(b: NDArray, lam: float, p: float, q: float) -> NDArray:
    # The +-1 eigenvectors decay like (p/q)^{j/2}; for p < q that is the
    # subdominant solution of the forward recurrence, so run it from the far end.
    if p < q:
        v = _recurrence_columns(b[::-1], np.array([lam]))[::-1, 0]
    else:
        v = _recurrence_columns(b, np.array([lam]))[:, 0]
    return v * np.sign(v[0]) if v[0] != 0.0 else v


def jacobi_eigenvectors(params: WalkParameters) -> NDArray[np.float64]:
    """
    All unit eigenvectors of J_{n+2} as columns, ordered like the eigenvalues.

    Component 0 of every column is positive.
    """
    b = jacobi_matrix(params).off_diagonal
    lam = jacobi_eigenvalues(params)
    V = np.empty((params.n + 2, params.n + 2))
    V[:, 1:-1] = _recurrence_columns(b, lam[1:-1])
    V[:, 0] = _edge_vector(b, 1.0, params.p, params.q)
    V[:, -1] = _edge_vector(b, -1.0, params.p, params.q)
    V /= np.linalg.norm(V, axis=0)
    return V


def jacobi_eigenvector(params: WalkParameters, m: int) -> NDArray[np.float64]:
    """Unit eigenvector for the m-th eigenvalue (m = 0..n+1)."""
    n = params.n
    if not 0 <= m <= n + 1:
        raise IndexError(f"m must lie in 0..{n + 1}")
    b = jacobi_matrix(params).off_diagonal
    lam = jacobi_eigenvalues(params)[m]
    if m in (0, n + 1):
        v = _edge_vector(b, lam, params.p, params.q)
    else:
        v = _recurrence_columns(b, np.array([lam]))[:, 0]
    return v / np.linalg.norm(v)


def chebyshev_eigenvector(params: WalkParameters, m: int) -> NDArray[np.float64]:
    """
    Eigenvector for an interior eigenvalue (1 <= m <= n) from its Chebyshev form

        [1, lam/sqrt(q), ..., lam U_{j-1}/sqrt(q) - U_{j-2}/sqrt(p), ..., -sqrt(q/p) U_{n-1}]

    normalised numerically. Independent of the recurrence route.
    """
    n, p, q = params.n, params.p, params.q
    if not 1 <= m <= n:
        raise IndexError(f"m must lie in 1..{n}")
    theta = m * np.pi / (n + 1)
    lam = 2.0 * np.sqrt(p * q) * np.cos(theta)
    j = np.arange(1, n + 1)
    v = np.empty(n + 2)
    v[0] = 1.0
    v[1 : n + 1] = lam * chebyshev_u(j - 1, theta) / np.sqrt(q) - chebyshev_u(j - 2, theta) / np.sqrt(p)
    v[n + 1] = np.sqrt(q) * (lam * chebyshev_u(n, theta) / np.sqrt(q) - chebyshev_u(n - 1, theta) / np.sqrt(p))
    return v / np.linalg.norm(v)


def reflecting_transition_matrix(params: WalkParameters) -> NDArray[np.float64]:
    """Transition matrix of the walk reflected at 0 and n+1, stepping right w.p. p."""
    n = params.n
    P = np.zeros((n + 2, n + 2))
    P[0, 1] = 1.0
    P[n + 1, n] = 1.0
    i = np.arange(1, n + 1)
    P[i, i + 1] = params.p
    P[i, i - 1] = params.q
    return P


def stationary_measure(params: WalkParameters) -> NDArray[np.float64]:
    """
    Stationary distribution of the reflecting walk on 0..n+1.

    For p != q this is geometric in ``r = p/q`` with halved end masses; for
    p = q it is ``1/(n+1)`` inside and ``1/(2(n+1))`` at the two ends.
    """
    n, p, q = params.n, params.p, params.q
    if p == q:
        pi = np.full(n + 2, 1.0 / (n + 1))
        pi[[0, -1]] = 0.5 / (n + 1)
        return pi
    if p > q:
        # r^{n+1} would overflow for large n; use the mirrored chain instead.
        return stationary_measure(params.mirrored())[::-1].copy()
    r = p / q
    pi0 = (1.0 - r) / (2.0 * (1.0 - r ** (n + 1)))
    pi = np.empty(n + 2)
    pi[0] = pi0
    pi[1 : n + 1] = pi0 / q * r ** np.arange(n)
    pi[n + 1] = pi0 * r**n
    return pi


@dataclass(frozen=True)
class JacobiSpectrum:
    """
    Eigenpairs of J_{n+2}.

    ``eigenvectors[:, m]`` belongs to ``eigenvalues[m]``; ``thetas`` and
    ``phis`` cover the interior indices m = 1..n only.
    """

    params: WalkParameters
    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]
    thetas: NDArray[np.float64]
    phis: NDArray[np.float64]
    diagnostics: dict = field(default_factory=dict, compare=False)


def _validate(spec: JacobiSpectrum, tol: float) -> dict:
    J = jacobi_matrix(spec.params)
    V, lam = spec.eigenvectors, spec.eigenvalues
    residual = float(np.max(np.abs(J.matvec(V) - V * lam)))
    norm_dev = float(np.max(np.abs(np.linalg.norm(V, axis=0) - 1.0)))
    diag = {"max_residual": residual, "max_norm_deviation": norm_dev}
    if residual >= tol:
        raise ConsistencyError(f"Jacobi eigen-residual {residual:.3e} >= {tol:.0e}")
    if spec.params.n <= GRAM_CHECK_MAX_N:
        gram = float(np.max(np.abs(V.T @ V - np.eye(V.shape[1]))))
        diag["gram_deviation"] = gram
        if gram >= tol:
            raise ConsistencyError(f"Jacobi Gram deviation {gram:.3e} >= {tol:.0e}")
    return diag


@lru_cache(maxsize=32)
def jacobi_spectrum(params: WalkParameters, validate: bool = True, tol: float = 1e-10) -> JacobiSpectrum:
    """
    Closed-form eigenvalues with recurrence-built eigenvectors.

    With ``validate`` the eigen-residual (and, up to n = 512, the Gram
    matrix) is checked against ``tol``.
    """
    n = params.n
    lam = jacobi_eigenvalues(params)
    thetas = np.arange(1, n + 1) * np.pi / (n + 1)
    spec = JacobiSpectrum(
        params=params,
        eigenvalues=lam,
        eigenvectors=jacobi_eigenvectors(params),
        thetas=thetas,
        phis=np.arccos(lam[1:-1]),
    )
    if validate:
        spec.diagnostics.update(_validate(spec, tol))
    return spec

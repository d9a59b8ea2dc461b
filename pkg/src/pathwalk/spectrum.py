"""
Eigensystem of U = S C obtained by lifting the Jacobi spectrum.

Each unit eigenvector v of J_{n+2} (eigenvalue lam) lifts to

    a = v(0)|0,R> + sum_j v(j)|j> (x) (sqrt(q)|L> + sqrt(p)|R>) + v(n+1)|n+1,L>
    b = S a

with ``U a = b`` and ``U b = 2 lam b - a``. On span{a, b} the walk acts as
``[[0, -1], [1, 2 lam]]``, whose eigenvalues are ``exp(+-i phi)`` with
``cos(phi) = lam``; the eigenvectors are ``a - exp(+-i phi) b``. For
``lam = +-1`` the span collapses and ``a`` itself is the eigenvector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .core import ConsistencyError, WalkParameters
from .evolution import DENSE_CAP, apply_shift, evolution_kernel, step
from .jacobi import JacobiSpectrum, chebyshev_u, jacobi_eigenvalues, jacobi_spectrum

__all__ = [
    "LiftedPair",
    "UnitarySpectrum",
    "closed_form_eigenvector",
    "eigenphases",
    "eigenvector",
    "full_eigensystem",
    "lift_columns",
    "lifted_pair",
    "lifted_vectors",
    "phase_labels",
    "representation_matrix",
    "spectral_evolve",
]

DEGENERACY_GAP = 1e-12
RELATION_TOL = 1e-12


def phase_labels(n: int) -> NDArray[np.int64]:
    """Eigen-index labels in storage order: 0, 1, -1, 2, -2, ..., n, -n, n+1."""
    m = np.arange(1, n + 1)
    return np.concatenate(([0], np.column_stack((m, -m)).ravel(), [n + 1]))


def _min_phase_gap(mu: NDArray) -> float:
    ang = np.sort(np.mod(np.angle(mu), 2 * np.pi))
    gaps = np.diff(np.concatenate((ang, [ang[0] + 2 * np.pi])))
    return float(gaps.min())


def eigenphases(params: WalkParameters) -> NDArray[np.complex128]:
    """
    The 2n+2 eigenvalues of U, ordered as :func:`phase_labels`.

    Raises :class:`ConsistencyError` if two of them are closer than 1e-12.
    """
    lam = jacobi_eigenvalues(params)
    phi = np.arccos(lam[1:-1])
    mu = np.empty(params.dim, dtype=np.complex128)
    mu[0] = 1.0
    mu[1:-1:2] = np.exp(1j * phi)
    mu[2:-1:2] = np.exp(-1j * phi)
    mu[-1] = -1.0
    gap = _min_phase_gap(mu)
    if gap <= DEGENERACY_GAP:
        raise ConsistencyError(f"eigenphases degenerate: minimum gap {gap:.3e}")
    return mu


def representation_matrix(lam: float) -> NDArray[np.float64]:
    """Matrix of U on span{a, b} in the basis (a, b)."""
    return np.array([[0.0, -1.0], [1.0, 2.0 * lam]])


def lift_columns(params: WalkParameters, V: NDArray) -> tuple[NDArray, NDArray]:
    """Lift Jacobi eigenvector columns ``V`` to the a-vectors and their shifts."""
    A = np.empty((params.dim, V.shape[1]))
    A[0] = V[0]
    A[1:-1:2] = np.sqrt(params.q) * V[1:-1]
    A[2:-1:2] = np.sqrt(params.p) * V[1:-1]
    A[-1] = V[-1]
    B = A.reshape(params.n + 1, 2, -1)[:, ::-1, :].reshape(params.dim, -1)
    return A, B


def lifted_vectors(jacobi: JacobiSpectrum) -> tuple[NDArray, NDArray]:
    """All lifted vectors at once: columns of ``A`` are a_m, of ``B`` are b_m."""
    return lift_columns(jacobi.params, jacobi.eigenvectors)


@dataclass(frozen=True)
class LiftedPair:
    a: NDArray[np.float64]
    b: NDArray[np.float64]
    lam: float
    m: int


def lifted_pair(params: WalkParameters, jacobi: JacobiSpectrum, m: int) -> LiftedPair:
    """
    Lift the m-th Jacobi eigenvector and verify the two-step relations.

    Checks ``U a = b``, ``U b = 2 lam b - a`` and ``<a, b> = lam`` to 1e-12.
    """
    if not 0 <= m <= params.n + 1:
        raise IndexError(f"m must lie in 0..{params.n + 1}")
    lam = float(jacobi.eigenvalues[m])
    A, _ = lift_columns(params, jacobi.eigenvectors[:, m : m + 1])
    a = A[:, 0]
    kernel = evolution_kernel(params)
    b = apply_shift(kernel, a).real
    errors = {
        "Ua=b": np.max(np.abs(step(kernel, a) - b)),
        "Ub=2lam b-a": np.max(np.abs(step(kernel, b) - (2 * lam * b - a))),
        "<a,b>=lam": abs(a @ b - lam),
    }
    bad = {k: v for k, v in errors.items() if v >= RELATION_TOL}
    if bad:
        raise ConsistencyError(f"lifted pair m={m} fails {bad}")
    return LiftedPair(a=a, b=b, lam=lam, m=m)


def _fix_phase(u: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Rotate so the first component that is not numerically zero is real positive."""
    idx = int(np.argmax(np.abs(u) > 1e-14 * np.abs(u).max()))
    return u * (np.conj(u[idx]) / abs(u[idx]))


def eigenvector(params: WalkParameters, pair: LiftedPair, sign: str | None = None) -> NDArray[np.complex128]:
    """
    Unit eigenvector ``(a - exp(i s phi) b) / (sqrt(2) sin(phi))`` with ``s = +-1``.

    For the edge pairs (lam = +-1) pass ``sign=None``; ``a`` is returned.
    """
    edge = abs(abs(pair.lam) - 1.0) < 1e-15
    if sign is None:
        if not edge:
            raise ValueError("interior pairs need sign '+' or '-'")
        return pair.a.astype(np.complex128)
    if edge:
        raise ValueError("the +-1 pairs have no +/- branches")
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    phi = np.arccos(pair.lam)
    mu = np.exp(1j * phi) if sign == "+" else np.exp(-1j * phi)
    u = (pair.a - mu * pair.b) / (np.sqrt(2.0) * np.sin(phi))
    return _fix_phase(u)


def closed_form_eigenvector(params: WalkParameters, label: int, norm_n: int | None = None) -> NDArray[np.complex128]:
    """
    Component formula for the interior eigenvectors (label = +-m, 1 <= m <= n):

        u(j,L) = -i (U_{j-1} - mu sqrt(q/p) U_{j-2}) / N
        u(j,R) = -i (mu U_j - sqrt(q/p) U_{j-1}) / N
        N^2    = (norm_n / p) sin^2(phi) / sin^2(theta)

    ``norm_n`` defaults to n+1, which gives unit vectors.
    """
    n, p, q = params.n, params.p, params.q
    m = abs(label)
    if not 1 <= m <= n:
        raise IndexError(f"label must be +-1..+-{n}")
    norm_n = n + 1 if norm_n is None else norm_n
    theta = m * np.pi / (n + 1)
    lam = 2.0 * np.sqrt(p * q) * np.cos(theta)
    phi = np.arccos(lam)
    mu = np.exp(1j * phi) if label > 0 else np.exp(-1j * phi)
    N = np.sqrt(norm_n / p * np.sin(phi) ** 2 / np.sin(theta) ** 2)
    r = np.sqrt(q / p)

    def U(k):
        # U_{-2} only shows up for the missing (0,L) state and never survives.
        return chebyshev_u(np.maximum(k, -1), theta)

    j = np.arange(0, n + 2)
    u = np.empty(params.dim, dtype=np.complex128)
    left = -1j * (U(j - 1) - mu * r * U(j - 2)) / N
    right = -1j * (mu * U(j) - r * U(j - 1)) / N
    u[0] = right[0]
    u[1:-1:2] = left[1 : n + 1]
    u[2:-1:2] = right[1 : n + 1]
    u[-1] = left[n + 1]
    return u


@dataclass(frozen=True)
class UnitarySpectrum:
    """
    Validated eigensystem of U.

    ``eigenvectors[:, k]`` belongs to ``eigenphases[k]`` with eigen-index
    ``labels[k]``; ``residuals[k]`` is ``max|U u_k - mu_k u_k|``.
    """

    params: WalkParameters
    labels: NDArray[np.int64]
    eigenphases: NDArray[np.complex128]
    eigenvectors: NDArray[np.complex128]
    residuals: NDArray[np.float64]
    jacobi: JacobiSpectrum
    diagnostics: dict = field(default_factory=dict, compare=False)


def full_eigensystem(params: WalkParameters, tol: float = 1e-10, cap: int = DENSE_CAP) -> UnitarySpectrum:
    """
    Assemble and validate all 2n+2 eigenpairs of U.

    Raises :class:`ConsistencyError` naming the worst eigenpair when a
    residual or the Gram matrix misses ``tol``. The interior eigenvectors are
    also compared (after phase alignment) to :func:`closed_form_eigenvector`;
    the largest difference lands in ``diagnostics``.
    """
    n = params.n
    if n > cap:
        raise ValueError(f"n={n} exceeds the dense cap of {cap}")
    jac = jacobi_spectrum(params)
    mu = eigenphases(params)
    labels = phase_labels(n)
    kernel = evolution_kernel(params)

    vecs = np.empty((params.dim, params.dim), dtype=np.complex128)
    vecs[:, 0] = eigenvector(params, lifted_pair(params, jac, 0))
    vecs[:, -1] = eigenvector(params, lifted_pair(params, jac, n + 1))
    for m in range(1, n + 1):
        pair = lifted_pair(params, jac, m)
        vecs[:, 2 * m - 1] = eigenvector(params, pair, "+")
        vecs[:, 2 * m] = eigenvector(params, pair, "-")

    residuals = np.array(
        [np.max(np.abs(step(kernel, vecs[:, k]) - mu[k] * vecs[:, k])) for k in range(params.dim)]
    )
    worst = int(np.argmax(residuals))
    if residuals[worst] >= tol:
        raise ConsistencyError(
            f"eigenpair k={labels[worst]} residual {residuals[worst]:.3e} >= {tol:.0e}"
        )
    gram = np.abs(vecs.conj().T @ vecs - np.eye(params.dim))
    if gram.max() >= tol:
        i, j = np.unravel_index(np.argmax(gram), gram.shape)
        raise ConsistencyError(
            f"Gram deviation {gram.max():.3e} at labels ({labels[i]}, {labels[j]})"
        )

    discrepancy = 0.0
    for k in range(1, params.dim - 1):
        c = closed_form_eigenvector(params, int(labels[k]))
        overlap = np.vdot(c, vecs[:, k])
        discrepancy = max(discrepancy, float(np.max(np.abs(c * overlap / abs(overlap) - vecs[:, k]))))

    diagnostics = {
        "max_residual": float(residuals[worst]),
        "gram_deviation": float(gram.max()),
        "min_phase_gap": _min_phase_gap(mu),
        "closed_form_discrepancy": discrepancy,
    }
    return UnitarySpectrum(params, labels, mu, vecs, residuals, jac, diagnostics)


def spectral_evolve(spectrum: UnitarySpectrum, state, t: int) -> NDArray[np.complex128]:
    """``U^t psi = sum_k mu_k^t u_k <u_k, psi>``."""
    V = spectrum.eigenvectors
    coeffs = V.conj().T @ np.asarray(state, dtype=np.complex128)
    return V @ (spectrum.eigenphases**t * coeffs)

"""
Time-averaged position distribution of the walk.

Three independent routes:

* ``spectral``: with a simple spectrum the Cesaro limit keeps only the
  diagonal terms, ``pbar(x) = sum_k |u_k(x)|^2 |u_k(start)|^2``.
* ``closed-form``: the same sum written out with Chebyshev polynomials
  for starts 0..n (the last vertex is filled in by complement).
* ``cesaro``: brute-force ``(1/T) sum_{t<T} P(X_t = x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .core import (
    ChiralityMode,
    InitialSpec,
    WalkParameters,
    _fold_positions,
    basis_index,
    basis_state,
    branches,
)
from .evolution import EvolutionKernel, _accumulate_positions, _coin_args, evolution_kernel
from .jacobi import JacobiSpectrum, chebyshev_u, jacobi_spectrum
from .spectrum import UnitarySpectrum, eigenphases, lift_columns

__all__ = [
    "METHODS",
    "TimeAveragedDistribution",
    "origin_mass_term",
    "time_averaged",
    "time_averaged_cesaro",
    "time_averaged_closed_form",
    "time_averaged_spectral",
]

METHODS = ("spectral", "closed-form", "cesaro")
_CHUNK = 256
CESARO_CHECKPOINTS = 64


@dataclass(frozen=True)
class TimeAveragedDistribution:
    masses: NDArray[np.float64]
    method: str
    spec: InitialSpec
    params: WalkParameters
    steps: Optional[int] = None
    est_err: Optional[float] = None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.masses, dtype=dtype)

    @property
    def total(self) -> float:
        return float(self.masses.sum())


def _start_offsets(params: WalkParameters, spec: InitialSpec) -> list[int]:
    spec.validate(params)
    return [basis_index(params, spec.start_vertex, br) for br in branches(spec)]


def _literal_spectral(spectrum: UnitarySpectrum, spec: InitialSpec) -> NDArray:
    params = spectrum.params
    weights = np.abs(spectrum.eigenvectors) ** 2
    start = weights[_start_offsets(params, spec)].mean(axis=0)
    return _fold_positions(weights) @ start


def _pair_spectral(jacobi: JacobiSpectrum, spec: InitialSpec) -> NDArray:
    """
    Same sum evaluated pair by pair from the Jacobi spectrum.

    For real a, b the two eigenvectors of a pair share the modulus profile
    ``(a^2 + b^2 - 2 lam a b) / (2 (1 - lam^2))``, so no complex vectors and
    no (2n+2)^2 storage are needed.
    """
    params = jacobi.params
    eigenphases(params)  # degeneracy guard
    offsets = _start_offsets(params, spec)
    V, lam = jacobi.eigenvectors, jacobi.eigenvalues
    n = params.n

    edge = V[:, [0, n + 1]]
    A, _ = lift_columns(params, edge)
    w = A**2
    pbar = _fold_positions(w) @ w[offsets].mean(axis=0)

    for lo in range(1, n + 1, _CHUNK):
        hi = min(lo + _CHUNK, n + 1)
        A, B = lift_columns(params, V[:, lo:hi])
        lm = lam[lo:hi]
        w = (A**2 + B**2 - 2.0 * lm * A * B) / (2.0 * (1.0 - lm**2))
        pbar += _fold_positions(w) @ (2.0 * w[offsets].mean(axis=0))
    return pbar


def time_averaged_spectral(spectrum, spec: InitialSpec) -> TimeAveragedDistribution:
    """
    Limiting Cesaro distribution from the eigensystem.

    ``spectrum`` may be a full :class:`UnitarySpectrum` (the sum is taken
    over its complex eigenvectors) or a :class:`JacobiSpectrum` (the sum is
    taken over lifted pairs, which scales to large n).
    """
    if isinstance(spectrum, UnitarySpectrum):
        masses = _literal_spectral(spectrum, spec)
    elif isinstance(spectrum, JacobiSpectrum):
        masses = _pair_spectral(spectrum, spec)
    else:
        raise TypeError(f"expected UnitarySpectrum or JacobiSpectrum, got {type(spectrum).__name__}")
    return TimeAveragedDistribution(masses, "spectral", spec, spectrum.params)


def _log_pi0(params: WalkParameters) -> float:
    n, p, q = params.n, params.p, params.q
    if p == q:
        return -np.log(2.0 * (n + 1))
    r = p / q
    if r < 1.0:
        return np.log1p(-r) - np.log(2.0) - np.log1p(-(r ** (n + 1)))
    return np.log(r - 1.0) - np.log(2.0) - (n + 1) * np.log(r) - np.log1p(-(r ** -(n + 1)))


def _log_geometric(params: WalkParameters, j: NDArray) -> NDArray:
    """log of delta_0(j) + (1 - delta_0(j)) (p/q)^{j-1} / q."""
    p, q = params.p, params.q
    return np.where(j == 0, 0.0, (j - 1) * np.log(p / q) - np.log(q))


def _chebyshev_profile(params: WalkParameters, j: NDArray, theta: NDArray, cos2phi: NDArray) -> NDArray:
    """p U_j^2 - cos(2 phi) U_{j-1}^2 + q U_{j-2}^2, rows j, columns m.

    At j = 0 the last term belongs to the absent state (0,L) and is dropped.
    """
    jj = j[:, None]
    th = theta[None, :]
    U = lambda k: chebyshev_u(np.maximum(k, -1), th)  # noqa: E731
    out = params.p * U(jj) ** 2 - cos2phi * U(jj - 1) ** 2
    out += params.q * np.where(jj >= 1, U(jj - 2) ** 2, 0.0)
    return out


def time_averaged_closed_form(params: WalkParameters, spec: InitialSpec) -> TimeAveragedDistribution:
    """
    Chebyshev closed form for a start at vertex 0 or a mixed start at 1..n.

    Vertex 0 start::

        pbar(j) = 2 pi0^2 g(j) + 2p/(n+1)^2 sum_m (sin th_m / sin phi_m)^4 F_j(m)

    Interior start i (chirality averaged)::

        pbar(j) = pi0^2 g(i) g(j) + 1/(n+1)^2 sum_m (sin th_m / sin phi_m)^4 F_j(m) F_i(m)

    with ``g(0) = 1``, ``g(j) = (p/q)^{j-1}/q``, ``pi0`` the stationary mass of
    vertex 0 and ``F_j = p U_j^2 - cos(2 phi) U_{j-1}^2 + q U_{j-2}^2``.
    Evaluated for j = 0..n; ``pbar(n+1)`` is one minus the rest. A start at
    n+1 is handled by mirroring (p <-> q, j -> n+1-j).
    """
    spec.validate(params)
    n, p = params.n, params.p
    i = spec.start_vertex
    if i == n + 1:
        raise ValueError(
            "closed form covers starts 0..n; for n+1 use the mirror symmetry "
            "(params.mirrored(), start 0) and reverse the result"
        )
    if 1 <= i <= n and spec.chirality_mode is not ChiralityMode.MIXED:
        raise ValueError("closed form for an interior start needs the mixed chirality")

    theta = np.arange(1, n + 1) * np.pi / (n + 1)
    cosphi = 2.0 * np.sqrt(p * params.q) * np.cos(theta)
    sin2phi = 1.0 - cosphi**2
    cos2phi = 2.0 * cosphi**2 - 1.0
    weight = (np.sin(theta) ** 2 / sin2phi) ** 2

    j = np.arange(0, n + 1)
    F = _chebyshev_profile(params, j, theta, cos2phi)
    log_pi0 = _log_pi0(params)
    if i == 0:
        first = np.exp(np.log(2.0) + 2 * log_pi0 + _log_geometric(params, j))
        second = 2.0 * p / (n + 1) ** 2 * (F @ weight)
    else:
        Fi = F[i]
        first = np.exp(2 * log_pi0 + _log_geometric(params, np.array(i)) + _log_geometric(params, j))
        second = (F @ (weight * Fi)) / (n + 1) ** 2
    masses = np.empty(n + 2)
    masses[: n + 1] = first + second
    masses[n + 1] = 1.0 - masses[: n + 1].sum()
    return TimeAveragedDistribution(masses, "closed-form", spec, params)


def time_averaged_cesaro(kernel: EvolutionKernel, spec: InitialSpec, T: int) -> TimeAveragedDistribution:
    """
    Finite-T average ``(1/T) sum_{t<T} P(X_t = x)``.

    ``est_err`` is the largest max-norm gap between the T average and the
    running averages at :data:`CESARO_CHECKPOINTS` + 1 evenly spaced times in
    [T//2, T] (so it is never below the plain T vs T//2 gap). NaN for T = 1.
    """
    if T < 1:
        raise ValueError("T must be positive")
    params = kernel.params
    half = T // 2
    checkpoints = np.unique(np.linspace(half, T, CESARO_CHECKPOINTS + 1).astype(np.int64))
    checkpoints = checkpoints[checkpoints > 0]
    acc = np.zeros(params.n + 2)
    snaps = np.zeros((checkpoints.size, params.n + 2))
    brs = branches(spec)
    for br in brs:
        full, part = _accumulate_positions(basis_state(params, spec, br), T, checkpoints, *_coin_args(kernel))
        acc += full
        snaps += part
    masses = acc / (T * len(brs))
    if half:
        running = snaps / (checkpoints[:, None] * len(brs))
        est_err = float(np.max(np.abs(running - masses)))
    else:
        est_err = float("nan")
    return TimeAveragedDistribution(masses, "cesaro", spec, params, steps=T, est_err=est_err)


def origin_mass_term(jacobi: JacobiSpectrum, spec: InitialSpec) -> NDArray[np.float64]:
    """
    Contribution of the eigenvalues +1 and -1 to the spectral sum.

    Equals ``kappa * pi_n(j)`` with ``kappa = 2 pi_n(0)`` for a start at 0,
    ``pi_n(i)`` for a mixed interior start and ``2 pi_n(n+1)`` for a start at n+1.
    """
    params = jacobi.params
    offsets = _start_offsets(params, spec)
    A, _ = lift_columns(params, jacobi.eigenvectors[:, [0, params.n + 1]])
    w = A**2
    return _fold_positions(w) @ w[offsets].mean(axis=0)


def time_averaged(params: WalkParameters, spec: InitialSpec, method: str = "spectral", steps: Optional[int] = None):
    """Dispatch to one of :data:`METHODS`; ``cesaro`` needs ``steps``."""
    if method == "spectral":
        return time_averaged_spectral(jacobi_spectrum(params), spec)
    if method == "closed-form":
        return time_averaged_closed_form(params, spec)
    if method == "cesaro":
        if steps is None:
            raise ValueError("the cesaro method needs a number of steps")
        return time_averaged_cesaro(evolution_kernel(params), spec, steps)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")

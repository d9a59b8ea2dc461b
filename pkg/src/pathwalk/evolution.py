"""
Coin, shift and the one-step evolution U = S C.

The interior coin is the reflection ``G = 2|phi><phi| - I`` with
``|phi> = sqrt(q)|L> + sqrt(p)|R>``; the boundary vertices keep their single
chirality. In the canonical basis order the coin acts on offset pairs
``(2j-1, 2j)`` and the shift swaps offset pairs ``(2k, 2k+1)``, so one step is
O(n) with no matrix in sight. Long trajectories run through a compiled loop.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numba
import numpy as np
from numpy.typing import NDArray

from .core import InitialSpec, WalkParameters, basis_state, branches, position_distribution

__all__ = [
    "DENSE_CAP",
    "EvolutionKernel",
    "apply_coin",
    "apply_shift",
    "coin_matrix",
    "evolution_kernel",
    "evolve",
    "kernel_throughput",
    "pmf_at_time",
    "step",
    "unitary_matrix",
]

DENSE_CAP = 512


def coin_matrix(params: WalkParameters) -> NDArray[np.float64]:
    """Interior coin ``[[q-p, 2 sqrt(pq)], [2 sqrt(pq), p-q]]`` acting on (L, R)."""
    p, q = params.p, params.q
    off = 2.0 * np.sqrt(p * q)
    return np.array([[q - p, off], [off, p - q]])


@dataclass(frozen=True)
class EvolutionKernel:
    params: WalkParameters
    coin: NDArray[np.float64]

    @property
    def dim(self) -> int:
        return self.params.dim


def evolution_kernel(params: WalkParameters) -> EvolutionKernel:
    return EvolutionKernel(params, coin_matrix(params))


def _as_state(kernel: EvolutionKernel, state) -> NDArray[np.complex128]:
    psi = np.asarray(state, dtype=np.complex128)
    if psi.shape != (kernel.dim,):
        raise ValueError(f"state must have shape ({kernel.dim},), got {psi.shape}")
    return psi


def apply_coin(kernel: EvolutionKernel, state) -> NDArray[np.complex128]:
    psi = _as_state(kernel, state)
    out = psi.copy()
    pairs = psi[1:-1].reshape(-1, 2)
    out[1:-1] = (pairs @ kernel.coin.T).ravel()
    return out


def apply_shift(kernel: EvolutionKernel, state) -> NDArray[np.complex128]:
    """(i,R) -> (i+1,L) and (i,L) -> (i-1,R); a pure permutation."""
    psi = _as_state(kernel, state)
    return psi.reshape(-1, 2)[:, ::-1].ravel().copy()


def step(kernel: EvolutionKernel, state) -> NDArray[np.complex128]:
    return apply_shift(kernel, apply_coin(kernel, state))


@numba.njit(cache=True)
def _step_into(src, dst, g00, g01, g11, n):
    dst[1] = src[0]
    dst[2 * n] = src[2 * n + 1]
    for j in range(1, n + 1):
        a = src[2 * j - 1]
        b = src[2 * j]
        dst[2 * j - 2] = g00 * a + g01 * b
        dst[2 * j + 1] = g01 * a + g11 * b


@numba.njit(cache=True)
def _evolve(psi, t, g00, g01, g11, n):
    cur = psi.copy()
    nxt = np.empty_like(cur)
    for _ in range(t):
        _step_into(cur, nxt, g00, g01, g11, n)
        cur, nxt = nxt, cur
    return cur


@numba.njit(cache=True)
def _accumulate_positions(psi, T, checkpoints, g00, g01, g11, n):
    """Sum of position distributions over t < T, plus the partial sums at each checkpoint."""
    cur = psi.copy()
    nxt = np.empty_like(cur)
    acc = np.zeros(n + 2)
    snaps = np.zeros((checkpoints.size, n + 2))
    c = 0
    for t in range(T):
        while c < checkpoints.size and checkpoints[c] == t:
            snaps[c] = acc
            c += 1
        acc[0] += cur[0].real ** 2 + cur[0].imag ** 2
        for x in range(1, n + 1):
            a = cur[2 * x - 1]
            b = cur[2 * x]
            acc[x] += a.real ** 2 + a.imag ** 2 + b.real ** 2 + b.imag ** 2
        z = cur[2 * n + 1]
        acc[n + 1] += z.real ** 2 + z.imag ** 2
        _step_into(cur, nxt, g00, g01, g11, n)
        cur, nxt = nxt, cur
    while c < checkpoints.size:
        snaps[c] = acc
        c += 1
    return acc, snaps


def _coin_args(kernel: EvolutionKernel):
    g = kernel.coin
    return g[0, 0], g[0, 1], g[1, 1], kernel.params.n


def evolve(kernel: EvolutionKernel, state, t: int) -> NDArray[np.complex128]:
    """Apply ``t`` steps; ``t = 0`` returns a copy of the input."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    psi = _as_state(kernel, state)
    return _evolve(psi, int(t), *_coin_args(kernel))


def pmf_at_time(kernel: EvolutionKernel, spec: InitialSpec, t: int) -> NDArray[np.float64]:
    """Position distribution at time ``t``, averaged over the spec's chirality branches."""
    params = kernel.params
    dists = [
        position_distribution(evolve(kernel, basis_state(params, spec, br), t))
        for br in branches(spec)
    ]
    return np.mean(dists, axis=0)


def unitary_matrix(kernel: EvolutionKernel, cap: int = DENSE_CAP) -> NDArray[np.complex128]:
    """Dense (2n+2) x (2n+2) matrix of one step; column k is ``step(e_k)``."""
    n = kernel.params.n
    if n > cap:
        raise ValueError(f"n={n} exceeds the dense cap of {cap}")
    eye = np.eye(kernel.dim, dtype=np.complex128)
    pairs = eye[1:-1].reshape(n, 2, -1)
    coined = eye.copy()
    coined[1:-1] = np.einsum("ab,jbk->jak", kernel.coin, pairs).reshape(2 * n, -1)
    return coined.reshape(n + 1, 2, -1)[:, ::-1, :].reshape(kernel.dim, -1)


def kernel_throughput(kernel: EvolutionKernel, steps: int = 100_000) -> dict:
    """Time the compiled step loop; returns steps/s and amplitude updates/s."""
    psi = np.zeros(kernel.dim, dtype=np.complex128)
    psi[0] = 1.0
    _evolve(psi, 1, *_coin_args(kernel))  # compile outside the timer
    t0 = time.perf_counter()
    out = _evolve(psi, steps, *_coin_args(kernel))
    elapsed = time.perf_counter() - t0
    return {
        "steps": steps,
        "seconds": elapsed,
        "steps_per_second": steps / elapsed,
        "amplitudes_per_second": steps * kernel.dim / elapsed,
        "norm_deviation": abs(np.linalg.norm(out) - 1.0),
    }

"""
Large-n behaviour of the time-averaged distribution.

Scaled by n, the time-averaged position started from a fixed vertex i tends
to the mixture ``c_i delta_0 + (1 - c_i) U(0, 1)``; when the start vertex
grows with n the atom disappears. This module gives the coefficients, the
mixture CDF, scaled empirical CDFs, Kolmogorov distances on a grid and the
density-of-states integral that carries the uniform mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from .core import WalkParameters, initial_spec
from .timeavg import TimeAveragedDistribution, time_averaged

__all__ = [
    "GrowingStartReport",
    "LimitMixture",
    "c_coefficient",
    "growing_start_check",
    "kolmogorov_distance",
    "ks_sweep",
    "scaled_cdf",
    "uniform_tail_integral",
]

QUAD_PANELS = 2**16


@dataclass(frozen=True)
class LimitMixture:
    """Atom of mass ``c`` at 0 plus ``(1 - c)`` times U(0, 1)."""

    c: float

    def __post_init__(self):
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"c must lie in [0, 1], got {self.c}")

    def cdf(self, a):
        a = np.asarray(a, dtype=float)
        out = np.where(a < 0.0, 0.0, np.where(a >= 1.0, 1.0, self.c + (1.0 - self.c) * a))
        return out[()] if out.ndim == 0 else out


def c_coefficient(params: WalkParameters, i: int) -> float:
    """Mass of the atom at 0 for a walk started at a fixed vertex ``i``."""
    p, q = params.p, params.q
    if i < 0:
        raise ValueError("start vertex must be nonnegative")
    if not p < q:
        return 0.0
    r = p / q
    if i == 0:
        return 1.0 - r
    return (1.0 - r) * r ** (i - 1) / (2.0 * q)


def _cutoffs(a, n: int):
    # round first so that a = k/g hitting an integer a*n is not floored down
    return np.floor(np.round(np.asarray(a, dtype=float) * n, 9)).astype(int)


def scaled_cdf(pbar: TimeAveragedDistribution, a):
    """``P(Xbar <= a n) = sum_{j <= floor(a n)} pbar(j)`` for ``a`` in [0, 1]."""
    a_arr = np.asarray(a, dtype=float)
    if np.any((a_arr < 0.0) | (a_arr > 1.0)):
        raise ValueError("a must lie in [0, 1]")
    cum = np.cumsum(pbar.masses)
    out = cum[_cutoffs(a_arr, pbar.params.n)]
    return out[()] if np.ndim(out) == 0 else out


def _grid(grid_size: int) -> np.ndarray:
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    return np.arange(1, grid_size) / grid_size


def kolmogorov_distance(pbar: TimeAveragedDistribution, mixture: LimitMixture, grid_size: int = 99) -> float:
    """
    ``max_a |F_n(a) - F(a)|`` over ``a = 1/g, ..., (g-1)/g``.

    ``a = 0`` is left out: the atom makes the comparison there depend on
    how the lattice meets the origin.
    """
    a = _grid(grid_size)
    return float(np.max(np.abs(scaled_cdf(pbar, a) - mixture.cdf(a))))


def _chebyshev_u_closed(j: int, k: np.ndarray) -> np.ndarray:
    """sin((j+1)k)/sin k on [0, pi] including the endpoint limits."""
    s = np.sin(k)
    safe = np.abs(s) > 1e-12
    out = np.empty_like(k)
    out[safe] = np.sin((j + 1) * k[safe]) / s[safe]
    out[~safe] = (j + 1) * np.where(k[~safe] < 1.0, 1.0, (-1.0) ** j)
    return out


def uniform_tail_integral(params: WalkParameters, i: int, panels: int = QUAD_PANELS) -> float:
    """
    Composite-Simpson value of the integral carrying the uniform mass.

    Start 0::

        2p / pi * int_0^pi sin^2 k / sin^2 phi(k) dk

    Start i >= 1::

        1 / pi * int_0^pi (p U_i^2 - cos 2phi U_{i-1}^2 + q U_{i-2}^2) sin^2 k / sin^2 phi(k) dk

    with ``cos phi(k) = 2 sqrt(pq) cos k`` and ``U_j = sin((j+1)k)/sin k``.
    Should equal ``1 - c_coefficient(params, i)``.
    """
    p, q = params.p, params.q
    k = np.linspace(0.0, np.pi, panels + 1)
    cos2 = 4.0 * p * q * np.cos(k) ** 2
    sin2k = np.sin(k) ** 2
    # 1 - 4pq cos^2 k, written without cancellation near k = 0, pi
    sin2phi = (p - q) ** 2 + 4.0 * p * q * sin2k
    # both vanish at the ends only when p == q, where the ratio is identically 1
    ratio = np.divide(sin2k, sin2phi, out=np.ones_like(k), where=sin2phi > 1e-300)
    if i == 0:
        f = 2.0 * p * ratio
    else:
        cos2phi = 2.0 * cos2 - 1.0
        f = p * _chebyshev_u_closed(i, k) ** 2 - cos2phi * _chebyshev_u_closed(i - 1, k) ** 2
        if i >= 2:
            f += q * _chebyshev_u_closed(i - 2, k) ** 2
        f *= ratio
    return float(simpson(f, x=k) / np.pi)


def ks_sweep(p: float, start_rule: Callable[[int], int], ns: Sequence[int], c: float, grid_size: int = 99) -> list[float]:
    """Kolmogorov distances to ``LimitMixture(c)`` for each n, start ``start_rule(n)``."""
    mixture = LimitMixture(c)
    out = []
    for n in ns:
        params = WalkParameters(n, p)
        pbar = time_averaged(params, initial_spec(params, start_rule(n)))
        out.append(kolmogorov_distance(pbar, mixture, grid_size))
    return out


@dataclass(frozen=True)
class GrowingStartReport:
    ns: tuple
    starts: tuple
    distances: tuple
    decreasing: bool

    @property
    def final(self) -> float:
        return self.distances[-1]


def growing_start_check(p: float, rule: Callable[[int], int], ns: Sequence[int], grid_size: int = 99) -> GrowingStartReport:
    """
    Kolmogorov distance to pure U(0, 1) when the start vertex grows with n.

    ``rule(n)`` must land in 1..n.
    """
    starts = tuple(int(rule(n)) for n in ns)
    for n, i in zip(ns, starts):
        if not 1 <= i <= n:
            raise ValueError(f"rule gave start {i} outside 1..{n}")
    dist = ks_sweep(p, rule, ns, 0.0, grid_size)
    decreasing = all(b < a for a, b in zip(dist, dist[1:]))
    return GrowingStartReport(tuple(ns), starts, tuple(dist), decreasing)

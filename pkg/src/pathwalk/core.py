"""
Model parameters and basis bookkeeping for the coined walk on the path P_{n+2}.

The walk lives on the 2n+2 admissible (vertex, chirality) pairs

    (0,R), (1,L), (1,R), ..., (n,L), (n,R), (n+1,L)

and this module fixes that ordering for every other part of the package.
With it, ``(v, L)`` sits at offset ``2v - 1`` and ``(v, R)`` at ``2v``, so the
shift operator only ever swaps the neighbouring offsets ``(2k, 2k+1)``.

States are plain ``complex128`` NumPy arrays of length ``2n + 2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "Chirality",
    "ChiralityMode",
    "ConsistencyError",
    "InadmissibleStateError",
    "InitialSpec",
    "WalkParameters",
    "basis_index",
    "basis_label",
    "basis_state",
    "branches",
    "initial_spec",
    "position_distribution",
]


class InadmissibleStateError(ValueError):
    """Raised for (vertex, chirality) pairs outside the walk's Hilbert space."""


class ConsistencyError(RuntimeError):
    """Raised when an internal numerical cross-check fails."""


class Chirality(str, enum.Enum):
    L = "L"
    R = "R"

    def flipped(self) -> "Chirality":
        return Chirality.R if self is Chirality.L else Chirality.L


class ChiralityMode(str, enum.Enum):
    FIXED_L = "L"
    FIXED_R = "R"
    MIXED = "mixed"


@dataclass(frozen=True)
class WalkParameters:
    """
    One instance of the walk.

    Parameters
    ----------
    n : int
        Number of interior vertices; the path has ``n + 2`` vertices.
    p : float
        Weight of the right-moving chirality in the interior coin,
        ``0 < p < 1``. The left weight is ``q = 1 - p``.
    """

    n: int
    p: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie strictly between 0 and 1, got {self.p}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", float(self.p))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def dim(self) -> int:
        """Dimension 2n+2 of the walk Hilbert space."""
        return 2 * self.n + 2

    @property
    def num_vertices(self) -> int:
        return self.n + 2

    @property
    def symmetric(self) -> bool:
        return self.p == self.q

    def mirrored(self) -> "WalkParameters":
        """Parameters of the reflected walk (j -> n+1-j, L <-> R), i.e. p <-> q."""
        return WalkParameters(self.n, self.q)


def _check_admissible(params: WalkParameters, vertex: int, chirality: Chirality):
    if not 0 <= vertex <= params.n + 1:
        raise InadmissibleStateError(
            f"vertex {vertex} outside 0..{params.n + 1}"
        )
    if vertex == 0 and chirality is Chirality.L:
        raise InadmissibleStateError("chirality L is not available at vertex 0")
    if vertex == params.n + 1 and chirality is Chirality.R:
        raise InadmissibleStateError(
            f"chirality R is not available at vertex {params.n + 1}"
        )


def basis_index(params: WalkParameters, vertex: int, chirality) -> int:
    """Offset of ``|vertex, chirality>`` in the canonical order."""
    chirality = Chirality(chirality)
    _check_admissible(params, vertex, chirality)
    return 2 * vertex - 1 if chirality is Chirality.L else 2 * vertex


def basis_label(params: WalkParameters, offset: int) -> tuple[int, Chirality]:
    """Inverse of :func:`basis_index`."""
    if not 0 <= offset < params.dim:
        raise IndexError(f"offset {offset} outside 0..{params.dim - 1}")
    if offset % 2 == 0:
        return offset // 2, Chirality.R
    return (offset + 1) // 2, Chirality.L


@dataclass(frozen=True)
class InitialSpec:
    """Starting vertex plus how its chirality is chosen."""

    start_vertex: int
    chirality_mode: ChiralityMode = ChiralityMode.MIXED

    def validate(self, params: WalkParameters) -> None:
        i = self.start_vertex
        if not 0 <= i <= params.n + 1:
            raise InadmissibleStateError(
                f"start vertex {i} outside 0..{params.n + 1}"
            )
        mode = ChiralityMode(self.chirality_mode)
        if i == 0 and mode is not ChiralityMode.FIXED_R:
            raise InadmissibleStateError("start vertex 0 requires chirality R")
        if i == params.n + 1 and mode is not ChiralityMode.FIXED_L:
            raise InadmissibleStateError(
                f"start vertex {i} requires chirality L"
            )

    def mirrored(self, params: WalkParameters) -> "InitialSpec":
        flip = {
            ChiralityMode.FIXED_L: ChiralityMode.FIXED_R,
            ChiralityMode.FIXED_R: ChiralityMode.FIXED_L,
            ChiralityMode.MIXED: ChiralityMode.MIXED,
        }
        return InitialSpec(params.n + 1 - self.start_vertex, flip[self.chirality_mode])


def initial_spec(params: WalkParameters, start: int, chirality="mixed") -> InitialSpec:
    """
    Build and validate an :class:`InitialSpec`.

    A ``"mixed"`` request at a boundary vertex is forced to the only available
    chirality (R at 0, L at n+1). An explicitly inadmissible fixed chirality
    is rejected.
    """
    mode = ChiralityMode(chirality)
    if mode is ChiralityMode.MIXED:
        if start == 0:
            mode = ChiralityMode.FIXED_R
        elif start == params.n + 1:
            mode = ChiralityMode.FIXED_L
    spec = InitialSpec(int(start), mode)
    spec.validate(params)
    return spec


def branches(spec: InitialSpec) -> tuple[Chirality, ...]:
    """Chirality branches that are averaged with equal weight."""
    mode = ChiralityMode(spec.chirality_mode)
    if mode is ChiralityMode.MIXED:
        return (Chirality.L, Chirality.R)
    return (Chirality.L,) if mode is ChiralityMode.FIXED_L else (Chirality.R,)


def basis_state(params: WalkParameters, spec: InitialSpec, branch) -> NDArray[np.complex128]:
    """Unit vector ``|start_vertex, branch>`` for one branch of ``spec``."""
    spec.validate(params)
    branch = Chirality(branch)
    if branch not in branches(spec):
        raise InadmissibleStateError(
            f"branch {branch.value} is not part of {spec.chirality_mode}"
        )
    psi = np.zeros(params.dim, dtype=np.complex128)
    psi[basis_index(params, spec.start_vertex, branch)] = 1.0
    return psi


def position_distribution(state: NDArray) -> NDArray[np.float64]:
    """
    Probability of each vertex 0..n+1 for a state in the canonical basis.

    Entry ``x`` is ``|psi(x,L)|^2 + |psi(x,R)|^2`` with the missing boundary
    chiralities omitted.
    """
    state = np.asarray(state)
    if state.ndim != 1 or state.size < 4 or state.size % 2:
        raise ValueError(f"malformed state of shape {state.shape}")
    return _fold_positions(np.abs(state) ** 2)


def _fold_positions(weights: NDArray) -> NDArray:
    """Sum per-basis weights (first axis) into per-vertex weights."""
    dim = weights.shape[0]
    out = np.empty((dim // 2 + 1,) + weights.shape[1:], dtype=weights.dtype)
    out[0] = weights[0]
    out[1:-1] = weights[1:-1:2] + weights[2:-1:2]
    out[-1] = weights[-1]
    return out

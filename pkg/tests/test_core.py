import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathwalk import (
    Chirality,
    ChiralityMode,
    InadmissibleStateError,
    InitialSpec,
    WalkParameters,
    basis_index,
    basis_label,
    basis_state,
    initial_spec,
    position_distribution,
)
from pathwalk.core import branches


def test_parameters_validate():
    with pytest.raises(ValueError):
        WalkParameters(0, 0.5)
    for p in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            WalkParameters(3, p)
    with pytest.raises(ValueError):
        WalkParameters(2.5, 0.3)
    params = WalkParameters(3, 0.3)
    assert params.q == pytest.approx(0.7)
    assert params.dim == 8
    assert params.num_vertices == 5
    assert params.mirrored().p == pytest.approx(0.7)


def test_basis_index_examples():
    params = WalkParameters(3, 0.5)
    assert basis_index(params, 0, "R") == 0
    assert basis_index(params, 1, "L") == 1
    assert basis_index(params, 4, "L") == 7


@pytest.mark.parametrize("vertex, chirality", [(0, "L"), (4, "R"), (5, "L"), (-1, "R")])
def test_basis_index_rejects_inadmissible(vertex, chirality):
    with pytest.raises(InadmissibleStateError):
        basis_index(WalkParameters(3, 0.5), vertex, chirality)


@given(st.integers(1, 64))
def test_basis_index_bijection(n):
    params = WalkParameters(n, 0.4)
    seen = set()
    for offset in range(params.dim):
        vertex, chirality = basis_label(params, offset)
        assert basis_index(params, vertex, chirality) == offset
        seen.add((vertex, chirality))
    assert len(seen) == params.dim


def test_basis_state_examples():
    params = WalkParameters(2, 0.5)
    psi = basis_state(params, initial_spec(params, 0), "R")
    assert psi[0] == 1 and np.linalg.norm(psi) == 1
    psi = basis_state(params, initial_spec(params, 3), "L")
    assert psi[-1] == 1 and np.count_nonzero(psi) == 1
    psi = basis_state(params, initial_spec(params, 1), "R")
    assert psi[2] == 1


def test_basis_state_rejects_foreign_branch():
    params = WalkParameters(2, 0.5)
    with pytest.raises(InadmissibleStateError):
        basis_state(params, initial_spec(params, 0), "L")
    with pytest.raises(InadmissibleStateError):
        basis_state(params, initial_spec(params, 1, "L"), "R")


def test_initial_spec_boundary_forcing():
    params = WalkParameters(3, 0.3)
    assert initial_spec(params, 0).chirality_mode is ChiralityMode.FIXED_R
    assert initial_spec(params, 4).chirality_mode is ChiralityMode.FIXED_L
    assert initial_spec(params, 2).chirality_mode is ChiralityMode.MIXED
    assert branches(initial_spec(params, 2)) == (Chirality.L, Chirality.R)
    with pytest.raises(InadmissibleStateError):
        initial_spec(params, 0, "L")
    with pytest.raises(InadmissibleStateError):
        initial_spec(params, 4, "R")
    with pytest.raises(InadmissibleStateError):
        initial_spec(params, 5)
    with pytest.raises(InadmissibleStateError):
        InitialSpec(0).validate(params)


def test_initial_spec_mirror():
    params = WalkParameters(3, 0.3)
    spec = initial_spec(params, 1, "L")
    assert spec.mirrored(params) == InitialSpec(3, ChiralityMode.FIXED_R)
    assert initial_spec(params, 0).mirrored(params) == initial_spec(params, 4)


def test_position_distribution_examples():
    params = WalkParameters(3, 0.5)
    psi = np.zeros(params.dim, dtype=complex)
    psi[0] = 1
    np.testing.assert_array_equal(position_distribution(psi), [1, 0, 0, 0, 0])

    psi = np.zeros(params.dim, dtype=complex)
    psi[[1, 2]] = 1 / np.sqrt(2)
    np.testing.assert_allclose(position_distribution(psi), [0, 1, 0, 0, 0], atol=1e-15)

    psi = np.zeros(params.dim, dtype=complex)
    psi[0] = 1 / np.sqrt(2)
    psi[basis_index(params, 2, "L")] = 1j / np.sqrt(2)
    np.testing.assert_allclose(position_distribution(psi), [0.5, 0, 0.5, 0, 0], atol=1e-15)


def test_position_distribution_rejects_malformed():
    with pytest.raises(ValueError):
        position_distribution(np.ones(5))
    with pytest.raises(ValueError):
        position_distribution(np.ones((2, 4)))


@settings(max_examples=50)
@given(st.integers(1, 40), st.integers(0, 2**31))
def test_position_distribution_normalized(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=2 * n + 2) + 1j * rng.normal(size=2 * n + 2)
    z /= np.linalg.norm(z)
    dist = position_distribution(z)
    assert dist.shape == (n + 2,)
    assert abs(dist.sum() - 1) < 1e-12

"""
Coined discrete-time quantum walk on the finite path P_{n+2}.

Time-evolution, the Jacobi/unitary spectra, time-averaged distributions
by three routes, and their large-n limit laws.
"""

from .core import (
    Chirality,
    ChiralityMode,
    ConsistencyError,
    InadmissibleStateError,
    InitialSpec,
    WalkParameters,
    basis_index,
    basis_label,
    basis_state,
    initial_spec,
    position_distribution,
)
from .evolution import (
    EvolutionKernel,
    apply_coin,
    apply_shift,
    evolution_kernel,
    evolve,
    pmf_at_time,
    step,
    unitary_matrix,
)
from .jacobi import (
    JacobiSpectrum,
    bisection_roots,
    char_poly_D,
    chebyshev_u,
    jacobi_eigenvalues,
    jacobi_eigenvector,
    jacobi_matrix,
    jacobi_spectrum,
    stationary_measure,
)
from .limits import (
    LimitMixture,
    c_coefficient,
    growing_start_check,
    kolmogorov_distance,
    scaled_cdf,
    uniform_tail_integral,
)
from .spectrum import UnitarySpectrum, eigenphases, eigenvector, full_eigensystem, lifted_pair
from .timeavg import (
    TimeAveragedDistribution,
    origin_mass_term,
    time_averaged,
    time_averaged_cesaro,
    time_averaged_closed_form,
    time_averaged_spectral,
)

__version__ = "0.1.0"

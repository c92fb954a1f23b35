"""Quantum modular multiplication as a superposition of quantized baker maps.

Submodules
----------
operators  : DFT, modular multiplication, BV and tilde baker matrices
states     : torus coherent states and Husimi grids
dynamics   : classical baker map and semiclassical error checks
spectral   : eigenphases, degeneracies and spacing ratios
formats    : CMAT / STATE / CSV file formats
"""

from ._backend import BACKEND
from .dynamics import (
    GoodRegionSpec,
    PhasePoint,
    SemiclassicalReport,
    classical_orbit,
    classical_step,
    convergence_scan,
    in_good_region,
    semiclassical_error,
    torus_distance,
)
from .errors import (
    DimensionMismatchError,
    FormatError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidParameterError,
    NonCoprimeError,
    NonUnitaryError,
    QBakerError,
    SpecInconsistencyError,
)
from .operators import (
    ModMultSpec,
    bv_baker,
    decomposition_residual,
    dft_block_identity_residual,
    general_tilde_baker,
    generalized_dft,
    modmult_full,
    modmult_reduced,
    modmult_via_dft,
    multiplicative_order,
    tilde_baker,
    unitarity_residual,
)
from .spectral import (
    SpectrumReport,
    cycle_structure,
    degeneracy_histogram,
    eigenphases,
    period_residual,
    spacing_ratios,
)
from .states import HusimiGrid, distance_up_to_phase, husimi, momentum_representation, torus_coherent_state

__version__ = "0.1.0"

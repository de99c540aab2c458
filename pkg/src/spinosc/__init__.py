"""Spectra and dynamics of a two-level system coupled to a quantum oscillator.

Three cross-validated treatments of the Hamiltonian
H = (omega_q/2) sigma_x + omega b'b + (g/2)(b' + b) sigma_z:

* ``exact``   -- diagonalization in a truncated spin (x) Fock basis,
* ``trwa``    -- transformed rotating-wave treatment in a displaced frame,
* ``rwa``     -- ordinary rotating-wave baseline.
"""

__version__ = "0.1.0"

from .core import (
    FixedPointError,
    ModelParams,
    TrwaParams,
    renormalized_coupling,
    solve_displacement,
)
from .exact import (
    EigensolverError,
    ParityReport,
    StateVector,
    TruncatedBasis,
    build_hamiltonian,
    eigendecompose,
    evolve_exact,
    evolve_state,
    initial_state,
    parity_check,
    parity_matrix,
    spectrum_exact,
)
from .results import Spectrum, TimeSeries
from .rwa import (
    RwaParams,
    energy_excited_rwa,
    energy_ground_rwa,
    p_rwa,
    rwa_params,
    spectrum_rwa,
)
from .trwa import (
    TrwaAmplitudes,
    amplitudes_trwa,
    energy_excited_trwa,
    energy_ground_trwa,
    p_trwa,
    spectrum_trwa,
)

__all__ = [
    "__version__",
    "ModelParams",
    "TrwaParams",
    "FixedPointError",
    "solve_displacement",
    "renormalized_coupling",
    "Spectrum",
    "TimeSeries",
    "TruncatedBasis",
    "StateVector",
    "ParityReport",
    "EigensolverError",
    "build_hamiltonian",
    "parity_matrix",
    "eigendecompose",
    "spectrum_exact",
    "initial_state",
    "evolve_state",
    "evolve_exact",
    "parity_check",
    "TrwaAmplitudes",
    "energy_ground_trwa",
    "energy_excited_trwa",
    "spectrum_trwa",
    "amplitudes_trwa",
    "p_trwa",
    "RwaParams",
    "rwa_params",
    "energy_ground_rwa",
    "energy_excited_rwa",
    "spectrum_rwa",
    "p_rwa",
]

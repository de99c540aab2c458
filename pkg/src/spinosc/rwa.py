"""Ordinary rotating-wave approximation: the undisplaced baseline.

Same closed-form structure as the transformed treatment but in the original
frame, i.e. with no displacement (``xi = 0``), no splitting reduction
(``eta = 1``) and the bare coupling ``g`` as the flip-flop strength.  Kept
as an independent implementation so the two routes can be cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModelParams
from .results import Spectrum, TimeSeries, assemble_levels

__all__ = [
    "RwaParams",
    "rwa_params",
    "energy_ground_rwa",
    "energy_excited_rwa",
    "spectrum_rwa",
    "p_rwa",
]

_PHI_FLOOR = 1e-14


@dataclass(frozen=True)
class RwaParams:
    """Derived constants of the rotating-wave Hamiltonian."""

    detuning: float  # omega_q - omega
    phi_0: float     # one-excitation Rabi frequency hypot(detuning, g)


def rwa_params(params: ModelParams) -> RwaParams:
    return RwaParams(
        detuning=params.omega_q - params.omega,
        phi_0=math.hypot(params.omega_q - params.omega, params.g),
    )


def energy_ground_rwa(params: ModelParams) -> float:
    """Ground level: the bare down-spin vacuum at -omega_q / 2."""
    return -0.5 * params.omega_q


def energy_excited_rwa(params: ModelParams, n: int) -> tuple[float, float]:
    """The n-th excited doublet (n >= 0), lower level first."""
    if n < 0:
        raise ValueError(f"doublet index must be non-negative, got {n}")
    base = (n + 0.5) * params.omega
    delta = params.omega_q - params.omega
    split = 0.5 * math.sqrt(delta * delta + params.g**2 * (n + 1.0))
    return base - split, base + split


def spectrum_rwa(params: ModelParams, k: int = 4) -> Spectrum:
    """Lowest ``k`` rotating-wave levels, sorted ascending."""
    levels = assemble_levels(
        energy_ground_rwa(params),
        lambda n: energy_excited_rwa(params, n),
        k,
    )
    return Spectrum(levels=levels, method="rwa")


def p_rwa(params: ModelParams, times: np.ndarray) -> TimeSeries:
    """Population difference P(t) from the spin-up vacuum state.

    Product of the slow Rabi envelope and the fast reference oscillation at
    ``(omega_q + omega) / 2``; bounded by 1 in magnitude for all parameters.
    """
    rp = rwa_params(params)
    times = np.asarray(times, dtype=float)
    half_t = 0.5 * times
    if rp.phi_0 < _PHI_FLOOR:
        slow_sin = half_t * rp.detuning  # removable 0/0: detuning is 0 too
    else:
        slow_sin = np.sin(rp.phi_0 * half_t) * (rp.detuning / rp.phi_0)
    fast = (params.omega_q + params.omega) * half_t
    p = np.cos(rp.phi_0 * half_t) * np.cos(fast) - slow_sin * np.sin(fast)
    return TimeSeries(times=times, values={"rwa": p})

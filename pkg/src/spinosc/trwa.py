"""Transformed rotating-wave treatment: closed-form spectrum and dynamics.

After displacing the oscillator (frame constants in
:class:`~spinosc.core.TrwaParams`) the Hamiltonian takes a number-conserving
form with dressed splitting ``eta * omega_q`` and flip-flop coupling
``g_prime``, plus a residual displacement of amplitude ``alpha`` acting on the
spin-up branch.  Dynamics from the spin-up vacuum then involves only five
basis amplitudes, written here in the interaction picture:

    c10 -- spin along +x sector, vacuum           (constant)
    c20, c11 -- one-excitation doublet            (Rabi frequency phi_0)
    c21, c12 -- two-excitation doublet            (Rabi frequency phi_1)

The population difference is reconstructed from cross terms between the two
spin sectors, which restores the fast reference oscillation at eta * omega_q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModelParams, TrwaParams, solve_displacement
from .results import Spectrum, TimeSeries, assemble_levels

__all__ = [
    "TrwaAmplitudes",
    "energy_ground_trwa",
    "energy_excited_trwa",
    "spectrum_trwa",
    "amplitudes_trwa",
    "p_trwa",
]

# Below this Rabi frequency sin(phi t/2)/phi is evaluated by its t/2 limit.
_PHI_FLOOR = 1e-14

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class TrwaAmplitudes:
    """Interaction-picture amplitudes of the five active basis states at time t."""

    t: float
    c10: complex
    c20: complex
    c11: complex
    c21: complex
    c12: complex


def _frame(params: ModelParams, frame: TrwaParams | None) -> TrwaParams:
    return solve_displacement(params) if frame is None else frame


def _polaron_shift(params: ModelParams, frame: TrwaParams) -> float:
    # Common downward shift of every level from the incomplete displacement.
    return -(params.g**2 / (4.0 * params.omega)) * frame.xi * (2.0 - frame.xi)


def energy_ground_trwa(params: ModelParams, frame: TrwaParams | None = None) -> float:
    """Ground level: dressed spin energy plus the displacement shift."""
    fr = _frame(params, frame)
    return -0.5 * fr.eta * params.omega_q + _polaron_shift(params, fr)


def energy_excited_trwa(
    params: ModelParams,
    n: int,
    frame: TrwaParams | None = None,
) -> tuple[float, float]:
    """The n-th excited doublet (n >= 0), lower level first.

    The doublet splits symmetrically about ``(n + 1/2) omega`` (plus the
    common shift) by the n-dependent Rabi frequency
    ``sqrt((omega - eta omega_q)^2 + g_prime^2 (n + 1))``.
    """
    if n < 0:
        raise ValueError(f"doublet index must be non-negative, got {n}")
    fr = _frame(params, frame)
    base = (n + 0.5) * params.omega + _polaron_shift(params, fr)
    delta = params.omega - fr.eta * params.omega_q
    split = 0.5 * math.sqrt(delta * delta + fr.g_prime**2 * (n + 1.0))
    return base - split, base + split


def spectrum_trwa(
    params: ModelParams,
    k: int = 4,
    frame: TrwaParams | None = None,
) -> Spectrum:
    """Lowest ``k`` closed-form levels, sorted ascending.

    Doublets are generated until no later doublet can undercut the k-th level;
    members of different doublets may interleave at strong coupling.
    """
    fr = _frame(params, frame)
    levels = assemble_levels(
        energy_ground_trwa(params, fr),
        lambda n: energy_excited_trwa(params, n, fr),
        k,
    )
    return Spectrum(levels=levels, method="trwa")


def _sin_over_phi(phi: float, half_t: np.ndarray) -> np.ndarray:
    """sin(phi * t / 2) / phi with the removable singularity filled at phi = 0."""
    if phi < _PHI_FLOOR:
        return half_t.copy()
    return np.sin(phi * half_t) / phi


def _amplitude_arrays(
    params: ModelParams,
    fr: TrwaParams,
    times: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    delta = fr.eta * params.omega_q - params.omega
    half_t = 0.5 * times
    cos0 = np.cos(fr.phi_0 * half_t)
    s0 = _sin_over_phi(fr.phi_0, half_t)
    cos1 = np.cos(fr.phi_1 * half_t)
    s1 = _sin_over_phi(fr.phi_1, half_t)
    phase = np.exp(1j * delta * half_t)

    c10 = np.full_like(phase, _INV_SQRT2)
    c20 = _INV_SQRT2 * (cos0 - 1j * (delta + fr.alpha * fr.g_prime) * s0) * phase
    c11 = _INV_SQRT2 * (fr.alpha * cos0 + 1j * (fr.alpha * delta - fr.g_prime) * s0) * phase.conj()
    c21 = fr.alpha * _INV_SQRT2 * (cos1 - 1j * delta * s1) * phase
    c12 = -1j * fr.alpha * fr.g_prime * s1 * phase.conj()
    return c10, c20, c11, c21, c12


def amplitudes_trwa(
    params: ModelParams,
    t: float,
    frame: TrwaParams | None = None,
) -> TrwaAmplitudes:
    """Closed-form amplitudes at a single time.

    At ``t = 0`` they reproduce the transformed initial state: the vacuum
    component ``1/sqrt(2)`` in each spin sector and a first-excited component
    ``alpha/sqrt(2)`` from the residual displacement.  The three doublet
    sub-norms (|c10|^2, |c20|^2+|c11|^2, |c21|^2+|c12|^2) are conserved.
    """
    fr = _frame(params, frame)
    ts = np.asarray([float(t)])
    c10, c20, c11, c21, c12 = _amplitude_arrays(params, fr, ts)
    return TrwaAmplitudes(
        t=float(t),
        c10=complex(c10[0]),
        c20=complex(c20[0]),
        c11=complex(c11[0]),
        c21=complex(c21[0]),
        c12=complex(c12[0]),
    )


def p_trwa(
    params: ModelParams,
    times: np.ndarray,
    frame: TrwaParams | None = None,
    normalize: bool = False,
) -> TimeSeries:
    """Population difference P(t) from the spin-up vacuum state.

    The raw signal starts at ``1 + alpha^2``: the transformed initial state
    leaks a weight ``alpha^2`` into the displaced one-excitation component.
    ``normalize=True`` rescales by ``1 + alpha^2`` so P(0) = 1 exactly.
    """
    fr = _frame(params, frame)
    times = np.asarray(times, dtype=float)
    c10, c20, c11, c21, c12 = _amplitude_arrays(params, fr, times)
    fast = np.exp(1j * fr.eta * params.omega_q * times)
    p = 2.0 * np.real((np.conj(c20) * c10 + np.conj(c21) * c11) * fast)
    if normalize:
        p = p / (1.0 + fr.alpha**2)
    return TimeSeries(times=times, values={"trwa": p})

"""Numerically exact treatment in a truncated spin (x) Fock product basis.

Basis ordering interleaves the two spin states within each Fock level:
index ``2 n + s`` holds oscillator number ``n`` and spin ``s`` (0 = up,
1 = down, referring to the sigma_z eigenvalue +1 / -1).  The initial state
for dynamics is spin up with the oscillator in its ground state, index 0,
and the reported signal is the population difference

    P(t) = <sigma_z(t)> = sum_n |psi_{n,up}|^2 - |psi_{n,down}|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import ModelParams
from .results import Spectrum, TimeSeries

__all__ = [
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
]

# Truncation probe used by spectrum_exact: the requested levels are compared
# against a basis enlarged by this many Fock states.
CONVERGENCE_PROBE = 20
CONVERGENCE_TOL = 1e-8


@dataclass(frozen=True)
class TruncatedBasis:
    """Spin (x) Fock basis keeping oscillator levels 0..n_max."""

    n_max: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_max, (int, np.integer)) or isinstance(self.n_max, bool):
            raise ValueError(f"n_max must be an integer, got {self.n_max!r}")
        if self.n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, n: int, spin: int) -> int:
        """Flat index of |n, spin> with spin 0 = up, 1 = down."""
        if not 0 <= n <= self.n_max:
            raise ValueError(f"Fock level {n} outside 0..{self.n_max}")
        if spin not in (0, 1):
            raise ValueError(f"spin must be 0 (up) or 1 (down), got {spin}")
        return 2 * n + spin


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over a truncated basis."""

    amplitudes: np.ndarray
    basis: TruncatedBasis

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(
                f"amplitudes have shape {amps.shape}, expected ({self.basis.dim},)"
            )
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def population_difference(self) -> float:
        """<sigma_z> of the spin: up weight minus down weight."""
        probs = np.abs(self.amplitudes) ** 2
        return float(np.sum(probs[0::2]) - np.sum(probs[1::2]))


class EigensolverError(RuntimeError):
    """Raised when the dense symmetric eigensolver fails to converge."""


def build_hamiltonian(params: ModelParams, n_max: int) -> np.ndarray:
    """Dense symmetric Hamiltonian in the interleaved truncated basis.

    The matrix is assembled as ``upper + upper.T + diagonal`` so it is
    symmetric bitwise, not merely up to rounding.
    """
    basis = TruncatedBasis(n_max)
    dim = basis.dim
    n = np.arange(n_max + 1)

    upper = np.zeros((dim, dim))
    # spin flip within each Fock level: (omega_q/2) sigma_x
    upper[2 * n, 2 * n + 1] = 0.5 * params.omega_q
    # spin-conserving Fock coupling: (g/2) sqrt(n+1), sign from sigma_z
    hop = 0.5 * params.g * np.sqrt(n[:-1] + 1.0)
    upper[2 * n[:-1], 2 * n[:-1] + 2] = hop
    upper[2 * n[:-1] + 1, 2 * n[:-1] + 3] = -hop

    h = upper + upper.T
    diag = np.repeat(params.omega * n, 2)
    h[np.diag_indices(dim)] += diag
    return h


def parity_matrix(n_max: int) -> np.ndarray:
    """Excitation parity sigma_x (-1)^(b'b); commutes with the Hamiltonian."""
    basis = TruncatedBasis(n_max)
    p = np.zeros((basis.dim, basis.dim))
    n = np.arange(n_max + 1)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    p[2 * n, 2 * n + 1] = sign
    p[2 * n + 1, 2 * n] = sign
    return p


def eigendecompose(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.

    Raises
    ------
    ValueError
        If ``h`` is not a square, bitwise-symmetric real matrix.
    EigensolverError
        If the underlying LAPACK routine does not converge.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if not np.array_equal(h, h.T):
        raise ValueError("matrix is not symmetric")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    try:
        w, v = scipy.linalg.eigh(h)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise EigensolverError(f"symmetric eigensolver failed: {exc}") from exc
    return w, v


def spectrum_exact(params: ModelParams, n_max: int, k: int = 4) -> Spectrum:
    """Lowest ``k`` eigenvalues at truncation ``n_max``, with a convergence probe.

    The same levels are recomputed with ``n_max + 20`` Fock states; the
    spectrum is flagged converged when the two agree to 1e-8.  Degenerate
    levels count once per eigenvalue copy (the lowest-k list can contain
    repeats).
    """
    basis = TruncatedBasis(n_max)
    if not 1 <= k <= basis.dim:
        raise ValueError(f"k must be in 1..{basis.dim}, got {k}")
    w = eigendecompose(build_hamiltonian(params, n_max))[0][:k]
    w_probe = eigendecompose(build_hamiltonian(params, n_max + CONVERGENCE_PROBE))[0][:k]
    converged = bool(np.max(np.abs(w - w_probe)) < CONVERGENCE_TOL)
    return Spectrum(levels=w, method="exact", n_max=n_max, converged=converged)


def initial_state(basis: TruncatedBasis) -> StateVector:
    """Spin up, oscillator vacuum: the reference state for all dynamics runs."""
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index(0, 0)] = 1.0
    return StateVector(amplitudes=amps, basis=basis)


def evolve_state(
    params: ModelParams,
    n_max: int,
    times: np.ndarray,
    psi0: StateVector | None = None,
) -> np.ndarray:
    """Propagate under the truncated Hamiltonian by spectral decomposition.

    Returns the amplitude matrix of shape ``(len(times), dim)``; row ``j`` is
    the state at ``times[j]``.  Unitary by construction, so norms are
    conserved to rounding.
    """
    basis = TruncatedBasis(n_max)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    if psi0 is None:
        psi0 = initial_state(basis)
    elif psi0.basis.n_max != n_max:
        raise ValueError("psi0 lives in a different truncation")

    w, v = eigendecompose(build_hamiltonian(params, n_max))
    coeff = v.T @ psi0.amplitudes
    phases = np.exp(-1j * np.outer(times, w))
    return (phases * coeff) @ v.T


def evolve_exact(params: ModelParams, n_max: int, times: np.ndarray) -> TimeSeries:
    """Population difference P(t) from the spin-up vacuum state."""
    amps = evolve_state(params, n_max, times)
    probs = np.abs(amps) ** 2
    p = np.sum(probs[:, 0::2], axis=1) - np.sum(probs[:, 1::2], axis=1)
    return TimeSeries(times=times, values={"exact": p})


@dataclass(frozen=True)
class ParityReport:
    """Excitation-parity bookkeeping for the lowest eigenstates.

    ``parity[i]`` is ``<v_i| Pi |v_i>`` and is only meaningful on its own when
    ``isolated[i]`` is true; inside a degeneracy cluster only the summed value
    ``cluster_parity`` (the subspace trace, same number repeated for every
    member) is basis-independent.
    """

    levels: np.ndarray
    parity: np.ndarray
    isolated: np.ndarray
    cluster_parity: np.ndarray


def parity_check(
    params: ModelParams,
    n_max: int,
    k: int = 8,
    degeneracy_tol: float = 1e-10,
) -> ParityReport:
    """Parity expectation values of the lowest ``k`` exact eigenstates."""
    basis = TruncatedBasis(n_max)
    if not 1 <= k <= basis.dim:
        raise ValueError(f"k must be in 1..{basis.dim}, got {k}")
    w, v = eigendecompose(build_hamiltonian(params, n_max))
    # Cluster on a slightly wider window so a degenerate partner just past k
    # is not mistaken for an isolated level.
    kk = min(k + 4, basis.dim)
    w = w[:kk]
    v = v[:, :kk]
    pv = parity_matrix(n_max) @ v
    per_state = np.einsum("ij,ij->j", v, pv)

    isolated = np.ones(kk, dtype=bool)
    cluster = np.array(per_state)
    start = 0
    for stop in range(1, kk + 1):
        if stop < kk and abs(w[stop] - w[stop - 1]) < degeneracy_tol:
            continue
        if stop - start > 1:
            isolated[start:stop] = False
            cluster[start:stop] = np.sum(per_state[start:stop])
        start = stop
    return ParityReport(
        levels=w[:k],
        parity=per_state[:k],
        isolated=isolated[:k],
        cluster_parity=cluster[:k],
    )

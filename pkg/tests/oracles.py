"""Independent reference implementations used only by the tests.

Everything here is deliberately built along a different route from the
package: block basis ordering instead of interleaved, numpy.linalg instead of
scipy.linalg, bisection instead of Picard iteration, and numerical ODE
integration instead of the closed-form trigonometric solution.  Agreement
between the two routes is what the cross-checks certify.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp


def block_hamiltonian(omega_q: float, omega: float, g: float, n_max: int) -> np.ndarray:
    """Spin-oscillator Hamiltonian with the spin-up Fock block first."""
    nf = n_max + 1
    h = np.zeros((2 * nf, 2 * nf))
    n = np.arange(nf)
    h[n, n] = omega * n
    h[nf + n, nf + n] = omega * n
    for j in range(nf):
        h[j, nf + j] = omega_q / 2.0
        h[nf + j, j] = omega_q / 2.0
    for j in range(nf - 1):
        v = 0.5 * g * math.sqrt(j + 1)
        h[j, j + 1] = v
        h[j + 1, j] = v
        h[nf + j, nf + j + 1] = -v
        h[nf + j + 1, nf + j] = -v
    return h


def block_parity(n_max: int) -> np.ndarray:
    nf = n_max + 1
    p = np.zeros((2 * nf, 2 * nf))
    for j in range(nf):
        p[j, nf + j] = (-1.0) ** j
        p[nf + j, j] = (-1.0) ** j
    return p


def exact_levels(omega_q: float, omega: float, g: float, n_max: int, k: int) -> np.ndarray:
    return np.linalg.eigvalsh(block_hamiltonian(omega_q, omega, g, n_max))[:k]


def p_exact_block(
    omega_q: float, omega: float, g: float, n_max: int, times: np.ndarray
) -> np.ndarray:
    """<sigma_z>(t) from |up, 0> via the block-ordered eigenbasis."""
    nf = n_max + 1
    e, v = np.linalg.eigh(block_hamiltonian(omega_q, omega, g, n_max))
    psi0 = np.zeros(2 * nf)
    psi0[0] = 1.0
    c = v.T @ psi0
    sz = np.concatenate([np.ones(nf), -np.ones(nf)])
    psi_t = v @ (c[:, None] * np.exp(-1j * np.outer(e, times)))
    return np.sum(sz[:, None] * np.abs(psi_t) ** 2, axis=0)


def bisect_displacement(omega_q: float, omega: float, g: float) -> tuple[float, float]:
    """Displacement fixed point by plain bisection on xi - F(xi)."""
    if omega_q == 0.0:
        xi = 1.0
    else:
        lo, hi = 1e-12, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            eta = math.exp(-(g * g * mid * mid) / (2.0 * omega * omega))
            if mid - omega / (omega + eta * omega_q) < 0.0:
                lo = mid
            else:
                hi = mid
        xi = 0.5 * (lo + hi)
    eta = math.exp(-(g * g * xi * xi) / (2.0 * omega * omega))
    return xi, eta


def trwa_constants(omega_q: float, omega: float, g: float):
    """(xi, eta, alpha, g_prime, delta, phi_0, phi_1) from the bisection root."""
    xi, eta = bisect_displacement(omega_q, omega, g)
    alpha = g * xi / (2.0 * omega)
    gp = 2.0 * g * eta * omega_q / (omega + eta * omega_q)
    delta = eta * omega_q - omega
    phi0 = math.hypot(delta, gp)
    phi1 = math.sqrt(delta * delta + 2.0 * gp * gp)
    return xi, eta, alpha, gp, delta, phi0, phi1


def ode_amplitudes(omega_q: float, omega: float, g: float, t_grid: np.ndarray) -> np.ndarray:
    """Interaction-picture amplitudes by direct numerical integration.

    The one-excitation pair couples with strength g'/2, the two-excitation
    pair with the sqrt(2)-enhanced strength: adding a second quantum brings
    the two-boson matrix element with it.  Returns an array of shape (5, nt)
    ordered (c10, c20, c11, c21, c12).
    """
    _, _, alpha, gp, delta, _, _ = trwa_constants(omega_q, omega, g)

    def rhs(t: float, y: np.ndarray):
        c10, c20, c11, c21, c12 = y
        ep = np.exp(1j * delta * t)
        em = np.exp(-1j * delta * t)
        return [
            0.0,
            -1j * (gp / 2.0) * ep * c11,
            -1j * (gp / 2.0) * em * c20,
            -1j * (gp / 2.0) * math.sqrt(2.0) * ep * c12,
            -1j * (gp / 2.0) * math.sqrt(2.0) * em * c21,
        ]

    r2 = 1.0 / math.sqrt(2.0)
    y0 = np.array([r2, r2, alpha * r2, alpha * r2, 0.0], dtype=complex)
    sol = solve_ivp(
        rhs,
        (float(t_grid[0]), float(t_grid[-1])),
        y0,
        t_eval=t_grid,
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    assert sol.success
    return sol.y


def rotate_to_lab(omega_q: float, omega: float, g: float, t_grid: np.ndarray, y: np.ndarray) -> np.ndarray:
    """P(t) from interaction-picture amplitudes (same cross-term reconstruction)."""
    _, eta, _, _, _, _, _ = trwa_constants(omega_q, omega, g)
    c10, c20, c11, c21, _ = y
    return 2.0 * np.real((np.conj(c20) * c10 + np.conj(c21) * c11) * np.exp(1j * eta * omega_q * t_grid))


def rwa_block_hamiltonian(omega_q: float, omega: float, g: float, n_max: int) -> np.ndarray:
    """Number-conserving rotating-wave Hamiltonian in the spin-energy basis.

    Index n holds the lower spin level |s1, n>, index nf + n the upper
    |s2, n>; the only coupling is |s2, n> <-> |s1, n+1> with (g/2) sqrt(n+1).
    """
    nf = n_max + 1
    h = np.zeros((2 * nf, 2 * nf))
    n = np.arange(nf)
    h[n, n] = omega * n - 0.5 * omega_q
    h[nf + n, nf + n] = omega * n + 0.5 * omega_q
    for j in range(nf - 1):
        v = 0.5 * g * math.sqrt(j + 1)
        h[nf + j, j + 1] = v
        h[j + 1, nf + j] = v
    return h


def rwa_levels_matrix(omega_q: float, omega: float, g: float, n_max: int, k: int) -> np.ndarray:
    return np.linalg.eigvalsh(rwa_block_hamiltonian(omega_q, omega, g, n_max))[:k]


def p_rwa_matrix(
    omega_q: float, omega: float, g: float, n_max: int, times: np.ndarray
) -> np.ndarray:
    """<sigma_z>(t) under the rotating-wave Hamiltonian from |up, 0>.

    In the spin-energy basis the starting state is (|s1,0> + |s2,0>)/sqrt(2)
    and sigma_z is the off-diagonal spin operator |s1><s2| + |s2><s1|.
    """
    nf = n_max + 1
    e, v = np.linalg.eigh(rwa_block_hamiltonian(omega_q, omega, g, n_max))
    psi0 = np.zeros(2 * nf)
    psi0[0] = 1.0 / math.sqrt(2.0)
    psi0[nf] = 1.0 / math.sqrt(2.0)
    c = v.T @ psi0
    psi_t = v @ (c[:, None] * np.exp(-1j * np.outer(e, times)))
    upper = psi_t[:nf, :]
    lower = psi_t[nf:, :]
    return 2.0 * np.real(np.sum(np.conj(upper) * lower, axis=0))

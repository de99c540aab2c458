"""Model parameters and the self-consistent displacement of the transformed frame.

The model is a two-level system (splitting ``omega_q``) coupled with strength
``g`` to a single oscillator mode of frequency ``omega``:

    H = (omega_q / 2) sigma_x + omega b'b + (g / 2)(b' + b) sigma_z

The transformed rotating-wave treatment displaces the oscillator by an amount
controlled by a variational parameter ``xi`` that must satisfy a fixed-point
condition together with the dressed-splitting reduction factor ``eta``:

    eta = exp(-g^2 xi^2 / (2 omega^2)),      xi = omega / (omega + eta omega_q)

This module solves that pair self-consistently and packages the derived
frame constants used by the spectrum and dynamics routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ModelParams",
    "TrwaParams",
    "FixedPointError",
    "solve_displacement",
    "renormalized_coupling",
]


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the spin-oscillator Hamiltonian."""

    omega_q: float  # two-level splitting (>= 0; 0 gives a displaced oscillator)
    omega: float    # oscillator frequency (> 0, sets the energy scale)
    g: float        # spin-oscillator coupling (>= 0)

    def __post_init__(self) -> None:
        for name in ("omega_q", "omega", "g"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.omega_q < 0.0:
            raise ValueError(f"omega_q must be non-negative, got {self.omega_q}")
        if self.g < 0.0:
            raise ValueError(f"g must be non-negative, got {self.g}")


@dataclass(frozen=True)
class TrwaParams:
    """Converged transformed-frame constants for one parameter point.

    Plain record: it stores whatever it is given.  Instances produced by
    :func:`solve_displacement` satisfy the self-consistency pair to within
    ``residual``; hand-built instances (e.g. the ``eta = 1`` limit) need not.
    """

    xi: float        # displacement fraction, in (0, 1]
    eta: float       # dressed-splitting reduction factor, in (0, 1]
    alpha: float     # residual displacement amplitude g*xi/(2*omega)
    g_prime: float   # effective flip-flop coupling 2*g*eta*omega_q/(omega + eta*omega_q)
    phi_0: float     # one-excitation Rabi frequency hypot(eta*omega_q - omega, g_prime)
    phi_1: float     # two-excitation Rabi frequency sqrt(delta^2 + 2*g_prime^2)
    residual: float  # |xi - omega/(omega + eta*omega_q)| achieved by the solver


class FixedPointError(RuntimeError):
    """Raised when the displacement fixed point cannot be located.

    Attributes
    ----------
    residual : float
        Best self-consistency residual reached before giving up.
    """

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(message)
        self.residual = residual


def _derived(params: ModelParams, xi: float, eta: float, residual: float) -> TrwaParams:
    """Assemble the derived frame constants from a converged (xi, eta) pair."""
    delta = eta * params.omega_q - params.omega
    g_prime = 2.0 * params.g * eta * params.omega_q / (params.omega + eta * params.omega_q)
    return TrwaParams(
        xi=xi,
        eta=eta,
        alpha=params.g * xi / (2.0 * params.omega),
        g_prime=g_prime,
        phi_0=math.hypot(delta, g_prime),
        phi_1=math.sqrt(delta * delta + 2.0 * g_prime * g_prime),
        residual=residual,
    )


def _eta_of(xi: float, params: ModelParams) -> float:
    t = params.g * xi / params.omega
    return math.exp(-0.5 * t * t)


def _map(xi: float, params: ModelParams) -> tuple[float, float]:
    """One application of the self-consistency map; returns (F(xi), eta(xi))."""
    eta = _eta_of(xi, params)
    return params.omega / (params.omega + eta * params.omega_q), eta


def _bisect(params: ModelParams, lo: float, hi: float, tol: float) -> tuple[float, float, float]:
    # G(xi) = xi - F(xi) is negative at lo and positive at hi by construction;
    # F is continuous, so a root lies in (lo, hi).
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid, eta = _map(mid, params)
        gap = mid - f_mid
        if abs(gap) < tol:
            return mid, eta, abs(gap)
        if gap < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-17:
            break
    mid = 0.5 * (lo + hi)
    f_mid, eta = _map(mid, params)
    return mid, eta, abs(mid - f_mid)


def solve_displacement(
    params: ModelParams,
    tol: float = 1e-12,
    max_iter: int = 500,
) -> TrwaParams:
    """Solve the coupled pair (eta, xi) self-consistently.

    Runs the fixed-point iteration ``xi <- omega / (omega + eta(xi) omega_q)``
    from the bare starting point ``xi0 = omega / (omega + omega_q)``.  The map
    is a contraction on (0, 1] for the parameter ranges of interest; if the
    iterates ever start oscillating the solver falls back to bisection on
    ``xi - F(xi)``, which brackets a root on (0, 1] whenever ``omega_q > 0``.

    Parameters
    ----------
    params : ModelParams
        Model parameters.  ``omega_q = 0`` short-circuits to the analytic
        solution ``xi = 1`` (full displacement).
    tol : float
        Accept when ``|xi - F(xi)| < tol``.
    max_iter : int
        Iteration budget before raising :class:`FixedPointError`.

    Returns
    -------
    TrwaParams
        Converged frame constants.  ``eta`` is computed from the returned
        ``xi``, so the exponential relation holds to machine precision.

    Raises
    ------
    ValueError
        If ``tol`` or ``max_iter`` is non-positive.
    FixedPointError
        If the budget is exhausted without meeting ``tol``; carries the best
        residual reached.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")

    if params.omega_q == 0.0:
        # eta drops out of the map: xi = 1 exactly.
        return _derived(params, 1.0, _eta_of(1.0, params), 0.0)

    xi = params.omega / (params.omega + params.omega_q)
    prev_step = 0.0
    residual = math.inf
    for _ in range(max_iter):
        f_xi, eta = _map(xi, params)
        residual = abs(f_xi - xi)
        if residual < tol:
            return _derived(params, xi, eta, residual)
        step = f_xi - xi
        if step * prev_step < 0.0:
            # Oscillating iterates: the bracket [min, max] of the last two
            # points straddles the root.  Hand over to bisection.
            lo, hi = min(xi, f_xi), max(xi, f_xi)
            xi_b, eta_b, res_b = _bisect(params, lo, hi, tol)
            if res_b < tol:
                return _derived(params, xi_b, eta_b, res_b)
            raise FixedPointError(
                f"bisection stalled at residual {res_b:.3e} (tol {tol:.3e}) "
                f"for omega_q={params.omega_q}, omega={params.omega}, g={params.g}",
                res_b,
            )
        prev_step = step
        xi = f_xi
    raise FixedPointError(
        f"no fixed point within {max_iter} iterations "
        f"(best residual {residual:.3e}, tol {tol:.3e}) "
        f"for omega_q={params.omega_q}, omega={params.omega}, g={params.g}",
        residual,
    )


def renormalized_coupling(params: ModelParams, frame: TrwaParams) -> float:
    """Effective flip-flop coupling in the transformed frame.

    Equals ``2 g eta omega_q / (omega + eta omega_q)``; with a converged
    ``frame`` this coincides with ``g xi eta omega_q * 2 / omega`` up to the
    fixed-point residual.
    """
    return 2.0 * params.g * frame.eta * params.omega_q / (params.omega + frame.eta * params.omega_q)

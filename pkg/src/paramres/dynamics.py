"""Time evolution of the Gaussian wavefunction through the drive window.

Substituting ``Psi = A exp(-B xi**2)`` into the driven Schrodinger equation
gives ``dA/dtau = -i B A`` and ``dB/dtau = -2i B**2 + i g / 2``, integrated
here as four real equations.  A is never renormalised: norm drift is a
diagnostic and raises ``UnitarityViolation`` past ``config.norm_tol``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import integrate
from .core import DriveParams, GaussianState, SimConfig, g_eval
from .errors import InvalidParameter, UnitarityViolation
from .spectral import energy_expectation


@dataclass(frozen=True)
class TrajectorySample:
    tau: float
    state: GaussianState
    g: float
    norm_residual: float
    energy: float


def rhs(state: GaussianState, g: float) -> tuple[float, float, float, float]:
    """Time derivatives ``(dA_R, dA_I, dB_R, dB_I)`` at drive value ``g``."""
    a_re, a_im, b_re, b_im = state.a_re, state.a_im, state.b_re, state.b_im
    return (
        a_re * b_im + a_im * b_re,
        -(a_re * b_re - a_im * b_im),
        4.0 * b_re * b_im,
        0.5 * g - 2.0 * (b_re * b_re - b_im * b_im),
    )


def _drive_vec(params: DriveParams) -> np.ndarray:
    return integrate.drive_vector(params.h, params.omega, params.tau_final)


def _to_state(y, tau, config: SimConfig) -> GaussianState:
    state = GaussianState(float(y[0]), float(y[1]), float(y[2]), float(y[3]), float(tau))
    if state.norm_residual > config.norm_tol:
        raise UnitarityViolation(
            f"norm residual {state.norm_residual:.3e} exceeds norm_tol={config.norm_tol:g} "
            f"at tau={tau:.6g}; tighten the integrator tolerances")
    return state


def propagate(state: GaussianState, params: DriveParams, tau: float,
              config: SimConfig | None = None) -> GaussianState:
    """Integrate from ``state.tau`` to ``tau`` (either direction)."""
    config = config or SimConfig()
    sol = integrate.solve_adaptive(
        integrate.GAUSSIAN, _drive_vec(params), state.as_array(), [tau], t0=state.tau,
        rtol=config.rel_tol, atol=config.abs_tol, max_step=config.max_step(params))
    return _to_state(sol.y[-1], tau, config)


def evolve(start: GaussianState, params: DriveParams, config: SimConfig | None = None) -> GaussianState:
    """State at the end of the drive window, ``tau_final(params)``."""
    if start.tau != 0.0:
        raise InvalidParameter(f"evolution starts at tau = 0, got tau={start.tau}")
    return propagate(start, params, params.tau_final, config)


def evolve_traced(start: GaussianState, params: DriveParams, config: SimConfig | None = None,
                  sample_count: int = 100) -> list[TrajectorySample]:
    """Evolve and record ``sample_count`` equally spaced samples on ``[0, tau_final]``.

    The integrator lands exactly on each sample time, so the last sample
    agrees with :func:`evolve` to integrator tolerance.
    """
    if sample_count < 2:
        raise InvalidParameter("sample_count must be >= 2")
    if start.tau != 0.0:
        raise InvalidParameter(f"evolution starts at tau = 0, got tau={start.tau}")
    config = config or SimConfig()
    taus = np.linspace(0.0, params.tau_final, sample_count)
    sol = integrate.solve_adaptive(
        integrate.GAUSSIAN, _drive_vec(params), start.as_array(), taus, t0=0.0,
        rtol=config.rel_tol, atol=config.abs_tol, max_step=config.max_step(params))
    g = g_eval(params, taus)
    samples = []
    for tau, y, gv in zip(taus, sol.y, g):
        state = _to_state(y, tau, config)
        samples.append(TrajectorySample(float(tau), state, float(gv), state.norm_residual,
                                        energy_expectation(state)))
    return samples


def evolve_fixed_step(start: GaussianState, params: DriveParams, steps: int) -> GaussianState:
    """Reference evolution with ``steps`` equal classical RK4 steps.

    No unitarity guard: coarse step counts are used deliberately in
    convergence studies.
    """
    y = integrate.solve_fixed_rk4(integrate.GAUSSIAN, _drive_vec(params), start.as_array(),
                                  start.tau, params.tau_final, steps)
    return GaussianState(*map(float, y), tau=params.tau_final)

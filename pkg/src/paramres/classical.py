"""Classical parametric oscillator ``x'' + g(tau) x = 0`` as an independent oracle.

The Gaussian width obeys a Riccati equation that linearises under
``B = -(i/2) u'/u`` into the classical equation for complex ``u`` with
``u(0) = 1, u'(0) = i``.  Along such a solution the Wronskian
``Im(conj(u) u') = 1``, hence ``B_R = 1 / (2|u|**2)`` and

    <E> = (|u|**2 + |u'|**2) / 4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import integrate
from .core import DriveParams, SimConfig
from .errors import UndefinedRatio

# Strict inequality |r| < 1/2; r = +-0.5 counts as outside.  The true edge of
# the instability tongue moves with h, see floquet_growth.
PR_BOUNDARY = 0.5


@dataclass(frozen=True)
class ClassicalSolution:
    """Complex solution ``u`` and its derivative at time ``tau``."""

    u_re: float
    u_im: float
    udot_re: float
    udot_im: float
    tau: float

    @property
    def u(self) -> complex:
        return complex(self.u_re, self.u_im)

    @property
    def udot(self) -> complex:
        return complex(self.udot_re, self.udot_im)

    @property
    def wronskian(self) -> float:
        return (self.u.conjugate() * self.udot).imag

    @property
    def width(self) -> complex:
        """Gaussian width ``B = -(i/2) u'/u``."""
        return -0.5j * self.udot / self.u

    @property
    def energy(self) -> float:
        return 0.25 * (abs(self.u) ** 2 + abs(self.udot) ** 2)


def pr_condition(params: DriveParams) -> bool:
    """Classical resonance test ``|eps_bar / h| < 1/2``."""
    if params.h == 0:
        raise UndefinedRatio("resonance condition needs h > 0")
    return abs(params.eps_bar / params.h) < PR_BOUNDARY


def _solve(params: DriveParams, y0, taus, config: SimConfig, tau_end=None):
    tau_end = params.tau_final if tau_end is None else tau_end
    vec = integrate.drive_vector(params.h, params.omega, tau_end)
    return integrate.solve_adaptive(integrate.LINEAR, vec, y0, taus, t0=0.0,
                                    rtol=config.rel_tol, atol=config.abs_tol,
                                    max_step=config.max_step(params))


def classical_trajectory(params: DriveParams, x0: float, v0: float, config: SimConfig | None = None,
                         sample_count: int = 200):
    """``(tau, x, v)`` arrays on an even grid over the drive window."""
    config = config or SimConfig()
    taus = np.linspace(0.0, params.tau_final, max(int(sample_count), 2))
    sol = _solve(params, [x0, v0], taus, config)
    return taus, sol.y[:, 0].copy(), sol.y[:, 1].copy()


def classical_evolve(params: DriveParams, x0: float, v0: float,
                     config: SimConfig | None = None) -> tuple[float, float]:
    """``(x, v)`` at the end of the drive window."""
    config = config or SimConfig()
    sol = _solve(params, [x0, v0], [params.tau_final], config)
    return float(sol.y[-1, 0]), float(sol.y[-1, 1])


def complex_solution(params: DriveParams, config: SimConfig | None = None,
                     taus=None) -> list[ClassicalSolution]:
    """``u`` with ``u(0)=1, u'(0)=i`` sampled at ``taus`` (default: tau_final only)."""
    config = config or SimConfig()
    taus = [params.tau_final] if taus is None else taus
    # real and imaginary parts are independent real solutions
    sol = _solve(params, [1.0, 0.0, 0.0, 1.0], taus, config)
    return [ClassicalSolution(float(y[0]), float(y[2]), float(y[1]), float(y[3]), float(t))
            for t, y in zip(sol.t, sol.y)]


def riccati_oracle(params: DriveParams, config: SimConfig | None = None) -> complex:
    """Gaussian width ``B(tau_final)`` via the linear classical equation."""
    return complex_solution(params, config)[-1].width


def monodromy(params: DriveParams, config: SimConfig | None = None) -> np.ndarray:
    """Transfer matrix of ``(x, v)`` over one drive period of the periodic drive."""
    config = config or SimConfig()
    sol = _solve(params, [1.0, 0.0, 0.0, 1.0], [params.period], config, tau_end=math.inf)
    x1, v1, x2, v2 = sol.y[-1]
    return np.array([[x1, x2], [v1, v2]])


def floquet_growth(params: DriveParams, config: SimConfig | None = None) -> float:
    """Spectral radius of the monodromy matrix; > 1 means parametric growth."""
    return float(np.max(np.abs(np.linalg.eigvals(monodromy(params, config)))))

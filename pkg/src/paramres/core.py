"""Drive parameters, simulation settings and the initial ground state.

Everything here is dimensionless with hbar = m = omega_0 = 1: positions are
``xi``, times are ``tau = omega_0 t`` and energies are in units of
``hbar omega_0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, UndefinedRatio

#: Ground-state amplitude pi**(-1/4) for the unit-measure normalisation.
N0 = math.pi ** -0.25


@dataclass(frozen=True)
class DriveParams:
    """Drive ``g(tau) = 1 + h sin((2 + eps_bar) tau)`` on ``0 < tau < nu pi / (2 + eps_bar)``.

    ``nu`` counts drive half-cycles, so the drive phase at switch-off is
    ``nu * pi`` and the potential is continuous at both window edges.
    """

    h: float
    eps_bar: float
    nu: int

    def __post_init__(self):
        h, eps_bar = float(self.h), float(self.eps_bar)
        if not (math.isfinite(h) and math.isfinite(eps_bar)):
            raise InvalidParameter(f"non-finite drive parameter h={h!r}, eps_bar={eps_bar!r}")
        if not 0.0 <= h < 1.0:
            raise InvalidParameter(f"drive amplitude must satisfy 0 <= h < 1, got {h}")
        if isinstance(self.nu, bool) or int(self.nu) != self.nu or self.nu < 1:
            raise InvalidParameter(f"nu must be a positive integer, got {self.nu!r}")
        if 2.0 + eps_bar <= 0.0:
            raise InvalidParameter(f"need 2 + eps_bar > 0, got eps_bar={eps_bar}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "eps_bar", eps_bar)
        object.__setattr__(self, "nu", int(self.nu))

    @classmethod
    def from_ratio(cls, h: float, r: float, nu: int) -> DriveParams:
        """Build from ``r = eps_bar / h``; requires ``h > 0``."""
        if h == 0:
            raise UndefinedRatio("r = eps_bar/h is undefined for h = 0")
        return cls(h=h, eps_bar=r * h, nu=nu)

    @property
    def r(self) -> float:
        if self.h == 0:
            raise UndefinedRatio("r = eps_bar/h is undefined for h = 0")
        return self.eps_bar / self.h

    @property
    def omega(self) -> float:
        """Drive angular frequency ``2 + eps_bar``."""
        return 2.0 + self.eps_bar

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def tau_final(self) -> float:
        return tau_final(self)

    def as_dict(self) -> dict:
        d = {"h": self.h, "eps_bar": self.eps_bar, "nu": self.nu, "tau_final": self.tau_final}
        d["r"] = self.r if self.h > 0 else None
        return d


@dataclass(frozen=True)
class GaussianState:
    """Wavefunction ``A exp(-B xi**2)`` at time ``tau``."""

    a_re: float
    a_im: float
    b_re: float
    b_im: float
    tau: float = 0.0

    def __post_init__(self):
        vals = (self.a_re, self.a_im, self.b_re, self.b_im, self.tau)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameter(f"non-finite Gaussian state {vals!r}")
        if self.b_re <= 0.0:
            raise InvalidParameter(f"b_re must be positive for a normalisable state, got {self.b_re}")

    @classmethod
    def from_complex(cls, a: complex, b: complex, tau: float = 0.0) -> GaussianState:
        return cls(float(a.real), float(a.imag), float(b.real), float(b.imag), float(tau))

    @property
    def A(self) -> complex:
        return complex(self.a_re, self.a_im)

    @property
    def B(self) -> complex:
        return complex(self.b_re, self.b_im)

    @property
    def norm(self) -> float:
        """``integral |Psi|**2 dxi = |A|**2 sqrt(pi / (2 B_R))``."""
        return (self.a_re ** 2 + self.a_im ** 2) * math.sqrt(math.pi / (2.0 * self.b_re))

    @property
    def norm_residual(self) -> float:
        return abs(self.norm - 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.a_re, self.a_im, self.b_re, self.b_im])


@dataclass(frozen=True)
class SimConfig:
    """Numerical settings shared by integration, decomposition and quadrature.

    ``n_max`` is the starting truncation of the spectral decomposition; it is
    doubled while the uncaptured probability exceeds ``tail_tol``, up to
    ``n_max_cap``.
    """

    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_step_fraction: float = 1.0 / 50.0
    n_max: int = 200
    n_max_cap: int = 20000
    tail_tol: float = 1e-7
    quadrature_tol: float = 1e-13
    norm_tol: float = 1e-6

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "max_step_fraction", "tail_tol", "quadrature_tol", "norm_tol"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameter(f"{name} must be positive and finite, got {value!r}")
        for name in ("n_max", "n_max_cap"):
            value = getattr(self, name)
            if int(value) != value or value < 2 or value % 2:
                raise InvalidParameter(f"{name} must be an even integer >= 2, got {value!r}")
        if self.n_max_cap < self.n_max:
            raise InvalidParameter("n_max_cap must be >= n_max")

    def max_step(self, params: DriveParams) -> float:
        return self.max_step_fraction * params.period


def g_eval(params: DriveParams, tau):
    """Dimensionless drive ``g(tau)``; accepts scalars or arrays."""
    t = np.asarray(tau, dtype=float)
    inside = (t > 0.0) & (t < params.tau_final)
    g = np.where(inside, 1.0 + params.h * np.sin(params.omega * t), 1.0)
    return float(g) if g.ndim == 0 else g


def tau_final(params: DriveParams) -> float:
    return params.nu * math.pi / params.omega


def ground_state() -> GaussianState:
    return GaussianState(a_re=N0, a_im=0.0, b_re=0.5, b_im=0.0, tau=0.0)

"""Projection of a Gaussian state onto the unperturbed oscillator eigenstates.

For ``Psi = A exp(-B xi**2)`` and ``a = B + 1/2`` the even overlaps follow
from ``int H_2k(xi) exp(-a xi**2) dxi = sqrt(pi/a) ((1-a)/a)**k (2k)!/k!``,
which gives

    p_0 = |A|**2 sqrt(pi) / |a|,    p_{n+2} / p_n = (n+1)/(n+2) * q,
    q = |(1 - a) / a|**2 < 1   whenever B_R > 0.

Odd overlaps vanish by parity.  The quadrature route evaluates the overlap
integral directly and serves as an independent check of the closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import N0, GaussianState, SimConfig
from .errors import InvalidParameter, QuadratureNonConvergence


def hermite_fn(n: int, xi):
    """Normalised eigenfunction ``psi_n(xi) = N_n H_n(xi) exp(-xi**2/2)``.

    Uses the three-term recurrence for the normalised functions,
    ``psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1}``, which
    never forms factorials or raw Hermite polynomials.
    """
    if n < 0 or int(n) != n:
        raise InvalidParameter(f"eigenstate index must be a non-negative integer, got {n!r}")
    x = np.asarray(xi, dtype=float)
    prev = np.zeros_like(x)
    cur = N0 * np.exp(-0.5 * x * x)
    for k in range(int(n)):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
    return float(cur) if cur.ndim == 0 else cur


def energy_expectation(state: GaussianState) -> float:
    """``<H_0>`` with ``H_0 = p**2/2 + xi**2/2``: ``(4|B|**2 + 1) / (8 B_R)``."""
    b2 = state.b_re ** 2 + state.b_im ** 2
    return (4.0 * b2 + 1.0) / (8.0 * state.b_re)


def level_ratio(state: GaussianState) -> float:
    """Geometric factor ``q = |(1-a)/a|**2`` between successive even levels."""
    a = state.B + 0.5
    return abs((1.0 - a) / a) ** 2


def _p0(state: GaussianState) -> float:
    a = state.B + 0.5
    return (state.a_re ** 2 + state.a_im ** 2) * math.sqrt(math.pi) / abs(a)


def pn_closed_even(state: GaussianState, n: int) -> float:
    """Closed-form ``p_n`` for even ``n``, by the ratio recurrence."""
    if n < 0 or n % 2:
        raise InvalidParameter(f"closed form needs an even index >= 0, got {n!r}")
    q = level_ratio(state)
    p = _p0(state)
    for k in range(0, n, 2):
        p *= (k + 1) / (k + 2) * q
    return p


def even_probabilities(state: GaussianState, n_max: int) -> np.ndarray:
    """``[p_0, p_2, ..., p_{n_max}]`` from the closed form."""
    k = np.arange(n_max // 2)
    factors = (2 * k + 1) / (2 * k + 2) * level_ratio(state)
    return _p0(state) * np.concatenate(([1.0], np.cumprod(factors)))


def quadrature_half_width(state: GaussianState) -> float:
    return max(8.0, 8.0 / math.sqrt(2.0 * min(state.b_re, 0.5)))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)
_MAX_PANELS = 1 << 16


def _composite_gauss(f, L, panels):
    edges = np.linspace(-L, L, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return np.sum(w * f(x))


def overlap_quadrature(state: GaussianState, n: int, config: SimConfig | None = None) -> complex:
    """``<psi_n | Psi>`` by composite Gauss-Legendre quadrature on ``[-L, L]``.

    The panel count doubles until two successive estimates agree to
    ``config.quadrature_tol``; the node set is symmetric, so odd overlaps
    cancel to rounding.
    """
    config = config or SimConfig()
    L = quadrature_half_width(state)
    A, B = state.A, state.B

    def integrand(x):
        return hermite_fn(n, x) * (A * np.exp(-B * x * x))

    panels = 2 * int(math.ceil(L))
    prev = _composite_gauss(integrand, L, panels)
    while panels < _MAX_PANELS:
        panels *= 2
        cur = _composite_gauss(integrand, L, panels)
        if abs(cur - prev) <= config.quadrature_tol:
            return complex(cur)
        prev = cur
    raise QuadratureNonConvergence(
        f"overlap with n={n} not converged to {config.quadrature_tol:g} "
        f"with {panels} panels (last change {abs(cur - prev):.3e})")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Even-level probabilities ``p[k] = p_{2k}`` plus bookkeeping.

    ``tail_bound`` is the geometric upper bound on the probability above
    ``n_max``; ``truncated`` is set when the decomposition hit its cap with
    ``tail_mass`` still above ``tail_tol``.
    """

    p: np.ndarray
    tail_mass: float
    tail_bound: float
    energy_spectral: float
    energy_analytic: float
    energy_tail_bound: float
    ratio: float
    truncated: bool

    @property
    def n(self) -> np.ndarray:
        return 2 * np.arange(self.p.size)

    @property
    def n_max(self) -> int:
        return 2 * (self.p.size - 1)

    def pn(self, n: int) -> float:
        """``p_n`` for any ``n`` covered by the decomposition (0 for odd n)."""
        if n < 0 or n > self.n_max:
            raise IndexError(f"n={n} outside decomposition range [0, {self.n_max}]")
        return 0.0 if n % 2 else float(self.p[n // 2])

    def as_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "tail_mass": self.tail_mass,
            "tail_bound": self.tail_bound,
            "energy_spectral": self.energy_spectral,
            "energy_analytic": self.energy_analytic,
            "energy_tail_bound": self.energy_tail_bound,
            "ratio": self.ratio,
            "truncated": self.truncated,
        }


def _tail_bounds(p_last: float, n_last: int, q: float) -> tuple[float, float]:
    if q >= 1.0:
        return math.inf, math.inf
    g = q / (1.0 - q)
    return p_last * g, p_last * ((n_last + 0.5) * g + 2.0 * g / (1.0 - q))


def decomposition_from_probabilities(p, *, energy_analytic=math.nan, ratio=math.nan,
                                     truncated=False) -> SpectralDecomposition:
    """Wrap externally computed even-level probabilities (tests, CLI input)."""
    p = np.asarray(p, dtype=float)
    n = 2 * np.arange(p.size)
    tail_bound, energy_tail = (_tail_bounds(p[-1], n[-1], ratio) if math.isfinite(ratio)
                               else (math.nan, math.nan))
    return SpectralDecomposition(
        p=p, tail_mass=float(1.0 - p.sum()), tail_bound=tail_bound,
        energy_spectral=float(np.dot(p, n + 0.5)), energy_analytic=energy_analytic,
        energy_tail_bound=energy_tail, ratio=ratio, truncated=truncated)


def decompose(state: GaussianState, config: SimConfig | None = None) -> SpectralDecomposition:
    """Closed-form decomposition, doubling ``n_max`` until the tail is small."""
    config = config or SimConfig()
    n_max = config.n_max
    while True:
        p = even_probabilities(state, n_max)
        tail = 1.0 - float(p.sum())
        if tail <= config.tail_tol or n_max >= config.n_max_cap:
            break
        n_max = min(2 * n_max, config.n_max_cap)
    q = level_ratio(state)
    return decomposition_from_probabilities(
        p, energy_analytic=energy_expectation(state), ratio=q,
        truncated=tail > config.tail_tol)

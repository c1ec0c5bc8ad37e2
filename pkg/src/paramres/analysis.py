"""Regime characterisation of the excitation spectrum.

Inside the resonance region the even-level populations follow a power law
``p_n ~ n**beta``; outside they decay exponentially, ``p_n ~ exp(alpha n)``.
Both are fitted by unweighted least squares in log space.  Sweeps over
``r = eps_bar / h`` locate the transition through the ``p_0 = 1/2`` crossing.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classical import pr_condition
from .core import DriveParams, SimConfig, ground_state
from .dynamics import evolve
from .errors import (DegenerateFit, InsufficientPoints, InvalidParameter, NoCrossing,
                     ParamResError)
from .spectral import SpectralDecomposition, decompose

POWER_LAW = "power_law"
EXPONENTIAL = "exponential"

POSITIVITY_FLOOR = 1e-300
FIT_FLOOR = 1e-12
FIT_N_CAP = 40


@dataclass(frozen=True)
class FitResult:
    model: str
    slope: float
    intercept: float
    r_squared: float
    n_range: tuple[int, int]
    points_used: int

    def as_dict(self) -> dict:
        return {"model": self.model, "slope": self.slope, "intercept": self.intercept,
                "r_squared": self.r_squared, "n_range": list(self.n_range),
                "points_used": self.points_used}


def default_fit_range(spec: SpectralDecomposition) -> tuple[int, int]:
    """Even n from 2 up to the last level above ``FIT_FLOOR``, capped at ``FIT_N_CAP``."""
    n, p = spec.n, spec.p
    ok = (n >= 2) & (n <= FIT_N_CAP) & (p > FIT_FLOOR)
    if not ok.any():
        return 2, 2
    # stop at the first level that drops below the floor
    last = 2
    for ni, pi in zip(n[1:], p[1:]):
        if ni > FIT_N_CAP or pi <= FIT_FLOOR:
            break
        last = int(ni)
    return 2, last


def _ols(x, y):
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx == 0.0:
        raise DegenerateFit("regressor has zero variance")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    ss_res = np.sum((y - (slope * x + intercept)) ** 2)
    ss_tot = np.sum((y - ym) ** 2)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(min(max(r2, 0.0), 1.0))


def _window(spec: SpectralDecomposition, n_range):
    lo, hi = default_fit_range(spec) if n_range is None else n_range
    lo = max(int(lo), 2)
    lo += lo % 2
    n, p = spec.n, spec.p
    sel = (n >= lo) & (n <= hi)
    n, p = n[sel], p[sel]
    if n.size < 3:
        raise InsufficientPoints(f"need >= 3 even levels in [{lo}, {hi}], have {n.size}")
    if np.any(p <= POSITIVITY_FLOOR):
        raise InsufficientPoints("probabilities below the positivity floor inside the fit window")
    return n, p


def fit_powerlaw(spec: SpectralDecomposition, n_range=None) -> FitResult:
    """Slope beta of ``ln(p_n / p_0)`` against ``ln n`` over even ``n >= 2``."""
    n, p = _window(spec, n_range)
    if spec.p[0] <= POSITIVITY_FLOOR:
        raise InsufficientPoints("p_0 below the positivity floor")
    slope, intercept, r2 = _ols(np.log(n), np.log(p / spec.p[0]))
    return FitResult(POWER_LAW, slope, intercept, r2, (int(n[0]), int(n[-1])), int(n.size))


def fit_exponential(spec: SpectralDecomposition, n_range=None) -> FitResult:
    """Slope alpha of ``ln p_n`` against ``n`` over even ``n >= 2``."""
    n, p = _window(spec, n_range)
    slope, intercept, r2 = _ols(n.astype(float), np.log(p))
    return FitResult(EXPONENTIAL, slope, intercept, r2, (int(n[0]), int(n[-1])), int(n.size))


@dataclass(frozen=True)
class SweepRow:
    r: float
    h: float
    nu: int
    eps_bar: float = math.nan
    p0: float = math.nan
    p2: float = math.nan
    p4: float = math.nan
    p6: float = math.nan
    energy: float = math.nan
    regime: str = ""
    fit_model: str = ""
    fit_slope: float = math.nan
    fit_r_squared: float = math.nan
    truncated: bool = False
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


SWEEP_COLUMNS = ("r", "h", "nu", "eps_bar", "p0", "p2", "p4", "p6", "energy", "regime",
                 "fit_model", "fit_slope", "fit_r_squared", "truncated", "error")


@dataclass(frozen=True)
class SweepResult:
    h: float
    nu: int
    rows: tuple[SweepRow, ...]
    config: SimConfig = field(default_factory=SimConfig)

    @property
    def r(self) -> np.ndarray:
        return self.column("r")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows], dtype=float)

    def ok_rows(self) -> list[SweepRow]:
        return [row for row in self.rows if row.ok]


def sweep_point(h: float, nu: int, r: float, config: SimConfig) -> SweepRow:
    """One evolved-and-decomposed grid point; failures become an error row."""
    try:
        if not math.isfinite(r):
            raise InvalidParameter(f"non-finite r={r!r}")
        params = DriveParams.from_ratio(h, r, nu)
        state = evolve(ground_state(), params, config)
        spec = decompose(state, config)
    except ParamResError as exc:
        return SweepRow(r=r, h=h, nu=nu, error=f"{type(exc).__name__}: {exc}")
    inside = pr_condition(params)
    fitter = fit_powerlaw if inside else fit_exponential
    try:
        fit = fitter(spec)
        model, slope, r2 = fit.model, fit.slope, fit.r_squared
    except ParamResError:
        model = POWER_LAW if inside else EXPONENTIAL
        slope, r2 = math.nan, math.nan
    p = [spec.pn(n) if n <= spec.n_max else 0.0 for n in (0, 2, 4, 6)]
    return SweepRow(r=r, h=h, nu=nu, eps_bar=params.eps_bar, p0=p[0], p2=p[1], p4=p[2], p6=p[3],
                    energy=spec.energy_analytic, regime="inside" if inside else "outside",
                    fit_model=model, fit_slope=slope, fit_r_squared=r2, truncated=spec.truncated)


def sweep(h: float, nu: int, r_grid, config: SimConfig | None = None, threads: int = 1) -> SweepResult:
    """Evolve the ground state for every ``r`` in ``r_grid``.

    Rows come back sorted by ``r`` regardless of ``threads``; per-point
    failures are recorded in the row's ``error`` field.
    """
    config = config or SimConfig()
    grid = [float(r) for r in np.atleast_1d(np.asarray(r_grid, dtype=float))]
    if not grid:
        raise InvalidParameter("r_grid must not be empty")
    grid.sort(key=lambda r: (math.isnan(r), r))

    def run(r):
        return sweep_point(h, nu, r, config)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run, grid))
    else:
        rows = [run(r) for r in grid]
    return SweepResult(h=h, nu=nu, rows=tuple(rows), config=config)


def _outward(sweep_result: SweepResult, sign: int):
    rows = [row for row in sweep_result.ok_rows() if (row.r >= 0 if sign > 0 else row.r <= 0)]
    rows.sort(key=lambda row: abs(row.r))
    if not rows:
        return np.array([]), np.array([])
    r = np.array([row.r for row in rows])
    p0 = np.array([row.p0 for row in rows])
    # start from the deepest point of the resonance on this side
    k = int(np.argmin(p0))
    return r[k:], p0[k:]


def _first_upcrossing(r, p0, level, start=0):
    for i in range(start, len(r) - 1):
        if p0[i] < level <= p0[i + 1]:
            t = (level - p0[i]) / (p0[i + 1] - p0[i])
            return i, float(r[i] + t * (r[i + 1] - r[i]))
    return None, None


def detect_transition(sweep_result: SweepResult, level: float = 0.5) -> tuple[float, float]:
    """``(r_minus, r_plus)`` where ``p_0`` first rises through ``level``.

    Each side is scanned outward from its ``p_0`` minimum; crossings are
    located by linear interpolation between adjacent grid rows.
    """
    out = []
    for sign in (-1, 1):
        r, p0 = _outward(sweep_result, sign)
        _, rc = _first_upcrossing(r, p0, level)
        if rc is None:
            raise NoCrossing(f"p_0 never crosses {level} on the {'negative' if sign < 0 else 'positive'} side")
        out.append(rc)
    return out[0], out[1]


def transition_width(sweep_result: SweepResult, lower: float = 0.1, upper: float = 0.9,
                     sign: int = 1) -> float:
    """Sharpness: ``|r|`` distance between the first ``lower`` and ``upper`` crossings of p_0."""
    r, p0 = _outward(sweep_result, sign)
    i, r_lo = _first_upcrossing(r, p0, lower)
    if r_lo is None:
        raise NoCrossing(f"p_0 never crosses {lower}")
    _, r_hi = _first_upcrossing(r, p0, upper, start=i)
    if r_hi is None:
        raise NoCrossing(f"p_0 never crosses {upper}")
    return abs(r_hi - r_lo)


def relative_spread(values) -> float:
    """``(max - min) / |mean|``."""
    v = np.asarray(values, dtype=float)
    return float((v.max() - v.min()) / abs(v.mean()))

"""Runge-Kutta integrators for the two ODE systems used in the package.

``GAUSSIAN``
    the four real equations for the amplitude ``A`` and width ``B`` of the
    Gaussian wavefunction, state ``[A_R, A_I, B_R, B_I]``.
``LINEAR``
    ``x'' + g(tau) x = 0`` for any number of independent solutions stacked
    as ``[x_1, v_1, x_2, v_2, ...]``.

Both share the windowed drive.  The kernels are compiled with numba and
release the GIL, so independent integrations can run on a thread pool.
The drive is passed as ``[h, omega, tau_end]``; ``tau_end = inf`` gives an
unwindowed periodic drive.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import IntegrationFailure

GAUSSIAN = 0
LINEAR = 1

# B_R below this makes the Gaussian numerically unnormalisable.
B_RE_FLOOR = 1e-12
# Steps shorter than this fraction of |t| count as underflow.  Time is
# carried as a compensated pair, so steps far below ulp(t) stay exact.
_MIN_STEP_FRACTION = 1e-24

_OK, _STEP_UNDERFLOW, _NONFINITE, _WIDTH_COLLAPSE = 0, 1, 2, 3

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, :1] = [1 / 5]
_A[2, :2] = [3 / 40, 9 / 40]
_A[3, :3] = [44 / 45, -56 / 15, 32 / 9]
_A[4, :4] = [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]
_A[5, :5] = [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]
_A[6, :6] = [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@njit(cache=True, nogil=True)
def drive(tau, h, omega, tau_end):
    if 0.0 < tau < tau_end:
        return 1.0 + h * math.sin(omega * tau)
    return 1.0


@njit(cache=True, nogil=True)
def _rhs(system, tau, y, p, out):
    g = drive(tau, p[0], p[1], p[2])
    if system == 0:
        a_re, a_im, b_re, b_im = y[0], y[1], y[2], y[3]
        out[0] = a_re * b_im + a_im * b_re
        out[1] = -(a_re * b_re - a_im * b_im)
        out[2] = 4.0 * b_re * b_im
        out[3] = 0.5 * g - 2.0 * (b_re * b_re - b_im * b_im)
    else:
        for k in range(0, y.size, 2):
            out[k] = y[k + 1]
            out[k + 1] = -g * y[k]


@njit(cache=True, nogil=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True, nogil=True)
def _dopri54(system, p, y0, t0, t_out, rtol, atol, max_step, first_step):
    n = y0.size
    m = t_out.size
    out = np.empty((m, n))
    K = np.empty((7, n))
    ys = np.empty(n)
    y = y0.copy()
    # deep in resonance the width spikes over intervals near ulp(t); keep
    # the integration time as t + t_lo so such steps are still resolved
    t = t0
    t_lo = 0.0
    direction = 1.0
    if t_out[m - 1] < t0:
        direction = -1.0
    h = min(first_step, max_step)
    accepted = 0
    rejected = 0
    last_rejected = False
    _rhs(system, t, y, p, K[0])
    for j in range(m):
        target = t_out[j]
        while direction * (target - t) > 0.0:
            span = abs((target - t) - t_lo)
            landing = h >= span
            hs = span if landing else h
            dt = direction * hs
            for s in range(1, 7):
                for i in range(n):
                    acc = 0.0
                    for q in range(s):
                        acc += _A[s, q] * K[q, i]
                    ys[i] = y[i] + dt * acc
                _rhs(system, t + (t_lo + _C[s] * dt), ys, p, K[s])
            en = 0.0
            for i in range(n):
                e = 0.0
                for q in range(7):
                    e += _E[q] * K[q, i]
                sc = atol + rtol * max(abs(y[i]), abs(ys[i]))
                en += (dt * e / sc) ** 2
            en = math.sqrt(en / n)
            if en <= 1.0:
                if landing:
                    t, t_lo = target, 0.0
                else:
                    t, t_lo = _two_sum(t, t_lo + dt)
                for i in range(n):
                    y[i] = ys[i]
                    K[0, i] = K[6, i]
                    if not math.isfinite(y[i]):
                        return _NONFINITE, out, t, accepted, rejected
                accepted += 1
                if system == 0 and y[2] < B_RE_FLOOR:
                    return _WIDTH_COLLAPSE, out, t, accepted, rejected
                fac = 5.0 if en == 0.0 else min(5.0, max(0.2, 0.9 * en ** -0.2))
                if last_rejected:
                    fac = min(fac, 1.0)
                last_rejected = False
                hn = min(hs * fac, max_step)
                h = max(h, hn) if landing else hn
            else:
                if not math.isfinite(en):
                    fac = 0.2
                else:
                    fac = max(0.2, 0.9 * en ** -0.2)
                h = hs * fac
                rejected += 1
                last_rejected = True
                if h < _MIN_STEP_FRACTION * max(1.0, abs(t)):
                    return _STEP_UNDERFLOW, out, t, accepted, rejected
        for i in range(n):
            out[j, i] = y[i]
    return _OK, out, t, accepted, rejected


@njit(cache=True, nogil=True)
def _rk4(system, p, y0, t0, t1, steps):
    n = y0.size
    y = y0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    dt = (t1 - t0) / steps
    for s in range(steps):
        t = t0 + s * dt
        _rhs(system, t, y, p, k1)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * dt * k1[i]
        _rhs(system, t + 0.5 * dt, tmp, p, k2)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * dt * k2[i]
        _rhs(system, t + 0.5 * dt, tmp, p, k3)
        for i in range(n):
            tmp[i] = y[i] + dt * k3[i]
        _rhs(system, t + dt, tmp, p, k4)
        for i in range(n):
            y[i] += dt * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0
    return y


class Solution(NamedTuple):
    t: np.ndarray
    y: np.ndarray
    accepted: int
    rejected: int


_FAILURES = {
    _STEP_UNDERFLOW: "step size underflow",
    _NONFINITE: "non-finite state",
    _WIDTH_COLLAPSE: f"width B_R fell below {B_RE_FLOOR:g}; state numerically unnormalisable",
}


def drive_vector(h: float, omega: float, tau_end: float) -> np.ndarray:
    return np.array([h, omega, tau_end], dtype=float)


def solve_adaptive(system, drive_vec, y0, t_out, *, t0=0.0, rtol=1e-12, atol=1e-14,
                   max_step=np.inf, first_step=1e-3) -> Solution:
    """Integrate with Dormand-Prince 5(4), landing exactly on every ``t_out``.

    ``t_out`` must be monotone in the direction of integration; entries equal
    to ``t0`` simply record the initial state.  Raises ``IntegrationFailure``
    on step-size underflow, non-finite values or (for ``GAUSSIAN``) a
    collapsing width.
    """
    t_out = np.atleast_1d(np.asarray(t_out, dtype=float))
    y0 = np.ascontiguousarray(y0, dtype=float)
    if t_out.size == 0:
        raise ValueError("t_out must not be empty")
    steps = np.diff(np.concatenate(([t0], t_out)))
    if not (np.all(steps >= 0) or np.all(steps <= 0)):
        raise ValueError("output times must be monotone in the direction of integration")
    status, y, t_end, accepted, rejected = _dopri54(
        system, np.asarray(drive_vec, dtype=float), y0, float(t0), t_out,
        float(rtol), float(atol), float(max_step), float(first_step))
    if status != _OK:
        raise IntegrationFailure(f"{_FAILURES[status]} at tau={t_end:.6g}")
    return Solution(t_out, y, int(accepted), int(rejected))


def solve_fixed_rk4(system, drive_vec, y0, t0, t1, steps: int) -> np.ndarray:
    """Classical 4th-order Runge-Kutta with ``steps`` equal steps."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    y = _rk4(system, np.asarray(drive_vec, dtype=float),
             np.ascontiguousarray(y0, dtype=float), float(t0), float(t1), int(steps))
    if not np.all(np.isfinite(y)):
        raise IntegrationFailure("non-finite state in fixed-step integration")
    return y

"""Acceptance criteria, one recorded line each (see the terminal summary).

Runtimes are measured after a one-off warm-up call so that JIT
compilation is not charged to the first criterion that happens to run.
"""
import time

import numpy as np
import pytest

from paramres import (DriveParams, SimConfig, classical_evolve, complex_solution, decompose,
                      detect_transition, energy_expectation, evolve, evolve_fixed_step,
                      evolve_traced, fit_exponential, fit_powerlaw, floquet_growth, ground_state,
                      overlap_quadrature, pn_closed_even, pr_condition, riccati_oracle, sweep,
                      transition_width)
from paramres.analysis import relative_spread
from paramres.core import GaussianState
from paramres.cli import main as cli_main

R_GRID = np.linspace(-1.0, 1.0, 201)


@pytest.fixture(scope="module", autouse=True)
def warm_up():
    evolve(ground_state(), DriveParams(0.1, 0.0, 1))
    complex_solution(DriveParams(0.1, 0.0, 1))


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def sweep300():
    return timed(sweep, 0.03, 300, R_GRID, SimConfig(), threads=4)


@pytest.fixture(scope="module")
def sweep1000():
    return sweep(0.03, 1000, R_GRID, SimConfig(), threads=4)


def row_at(result, r):
    return min(result.rows, key=lambda row: abs(row.r - r))


def test_c1_stationary_ground_state(criterion):
    p = DriveParams(0.0, 0.0, 100)
    state, dt = timed(evolve, ground_state(), p)
    p0 = pn_closed_even(state, 0)
    e = energy_expectation(state)
    ok = abs(p0 - 1) <= 1e-8 and abs(e - 0.5) <= 1e-8 and abs(state.B - 0.5) <= 1e-8 and dt < 1.0
    criterion("1", "stationary ground state", ok,
              f"|p0-1|={abs(p0 - 1):.1e} |E-0.5|={abs(e - 0.5):.1e} |B-0.5|={abs(state.B - 0.5):.1e} "
              f"t={dt:.3f}s")
    assert ok


@pytest.mark.parametrize("r", [0.1, 0.6])
def test_c2_unitarity(criterion, r):
    p = DriveParams.from_ratio(0.03, r, 1000)
    samples, dt = timed(evolve_traced, ground_state(), p, sample_count=4000)
    worst = max(x.norm_residual for x in samples)
    ok = worst <= 1e-7 and dt < 10.0
    criterion(f"2/{r}", f"unitarity r={r} nu=1000", ok, f"max residual={worst:.2e} t={dt:.2f}s")
    assert ok


def test_c3_oracle_equivalence(criterion):
    worst_b = worst_e = 0.0
    for h in (0.01, 0.03, 0.1):
        for r in (0.0, 0.2, 0.8):
            p = DriveParams.from_ratio(h, r, 50)
            state = evolve(ground_state(), p)
            worst_b = max(worst_b, abs(state.B - riccati_oracle(p)))
            u = complex_solution(p)[-1]
            worst_e = max(worst_e, abs(energy_expectation(state) - u.energy))
    ok = worst_b <= 1e-6 and worst_e <= 1e-6
    criterion("3", "dynamics vs classical oracle", ok, f"max|dB|={worst_b:.1e} max|dE|={worst_e:.1e}")
    assert ok


def test_c4_spectral_goldens(criterion):
    b = 2.0
    s = GaussianState.from_complex((2 * b / np.pi) ** 0.25, b)
    p0, p2, e = pn_closed_even(s, 0), pn_closed_even(s, 2), energy_expectation(s)
    golden = abs(p0 - 0.8) <= 1e-12 and abs(p2 - 0.144) <= 1e-12 and abs(e - 1.0625) <= 1e-12
    worst = 0.0
    for state in (s, evolve(ground_state(), DriveParams.from_ratio(0.1, 0.2, 50)),
                  evolve(ground_state(), DriveParams.from_ratio(0.03, 0.6, 300))):
        for n in range(0, 41, 2):
            pc = pn_closed_even(state, n)
            worst = max(worst, abs(abs(overlap_quadrature(state, n)) ** 2 - pc) / pc)
    ok = golden and worst <= 1e-8
    criterion("4", "squeezed goldens and closed form vs quadrature", ok,
              f"p0={p0:.15g} p2={p2:.15g} E={e:.15g} worst rel={worst:.1e}")
    assert ok


def test_c5_parity(criterion):
    worst = 0.0
    for h, r, nu in [(0.03, 0.1, 300), (0.03, 0.6, 300), (0.1, 0.2, 50)]:
        state = evolve(ground_state(), DriveParams.from_ratio(h, r, nu))
        worst = max(worst, *(abs(overlap_quadrature(state, n)) ** 2 for n in (1, 3, 5, 7)))
    ok = worst <= 1e-12
    criterion("5", "odd-level overlaps vanish", ok, f"max |c_odd|^2={worst:.1e}")
    assert ok


def test_c6_probability_conservation(criterion):
    out = decompose(evolve(ground_state(), DriveParams.from_ratio(0.03, 0.6, 300)))
    covered = out.p.sum() + out.tail_bound
    state = evolve(ground_state(), DriveParams.from_ratio(0.03, 0.1, 300))
    free = decompose(state)
    capped = decompose(state, SimConfig(n_max_cap=1000))
    flag_ok = (not free.truncated and free.n_max < SimConfig().n_max_cap
               and capped.truncated and capped.n_max == 1000)
    ok = covered >= 1 - 1e-6 and flag_ok
    criterion("6", "probability conservation and truncation flag", ok,
              f"sum+tail(r=.6)={covered:.12f} free n_max={free.n_max} tail={free.tail_mass:.1e} "
              f"capped tail={capped.tail_mass:.3f} flag={capped.truncated}")
    assert ok


def test_c7a_outside_ground_state(criterion, sweep300):
    res, _ = sweep300
    vals = {r: row_at(res, r).p0 for r in (-0.9, 0.9)}
    ok = all(v >= 0.99 for v in vals.values())
    criterion("7a", "p0(+-0.9) >= 0.99", ok, f"p0(-0.9)={vals[-0.9]:.6f} p0(0.9)={vals[0.9]:.6f}")
    assert ok


def test_c7b_inside_depletion(criterion, sweep300):
    res, _ = sweep300
    vals = {r: row_at(res, r).p0 for r in (-0.1, 0.1)}
    ok = all(v <= 0.1 for v in vals.values())
    criterion("7b", "p0(+-0.1) <= 0.1", ok, f"p0(-0.1)={vals[-0.1]:.6f} p0(0.1)={vals[0.1]:.6f}")
    assert ok


def test_c7c_energy_contrast(criterion, sweep300):
    res, _ = sweep300
    ratio = row_at(res, 0.1).energy / row_at(res, 0.9).energy
    ok = ratio >= 100
    criterion("7c", "E(0.1)/E(0.9) >= 100", ok, f"ratio={ratio:.1f}")
    assert ok


def test_c7d_transition_location(criterion, sweep300):
    res, _ = sweep300
    r_minus, r_plus = detect_transition(res)
    ok = 0.4 <= abs(r_minus) <= 0.6 and 0.4 <= abs(r_plus) <= 0.6
    criterion("7d", "|r*| in [0.4, 0.6]", ok, f"r-={r_minus:.4f} r+={r_plus:.4f}")
    assert ok


def test_c7e_sharpness(criterion, sweep300, sweep1000):
    res, _ = sweep300
    w300 = [transition_width(res, sign=s) for s in (-1, 1)]
    w1000 = [transition_width(sweep1000, sign=s) for s in (-1, 1)]
    ok = all(a < b for a, b in zip(w1000, w300))
    criterion("7e", "10-90 width shrinks from nu=300 to nu=1000", ok,
              f"nu=300 {w300[0]:.3f}/{w300[1]:.3f} nu=1000 {w1000[0]:.3f}/{w1000[1]:.3f}")
    assert ok


def test_c7f_sweep_runtime(criterion, sweep300):
    res, dt = sweep300
    ok = dt < 120 and len(res.rows) == 201 and not any(row.error for row in res.rows)
    criterion("7f", "201-point sweep under 2 min", ok, f"t={dt:.1f}s")
    assert ok


def spectrum(r):
    return decompose(evolve(ground_state(), DriveParams.from_ratio(0.03, r, 300)))


def test_c8_regime_fits(criterion):
    inside = spectrum(0.1)
    pw_in, ex_in = fit_powerlaw(inside, (2, 40)), fit_exponential(inside, (2, 40))
    ok = pw_in.r_squared >= 0.98 and -1 < pw_in.slope < 0 and pw_in.r_squared > ex_in.r_squared
    detail = [f"r=0.1 beta={pw_in.slope:.4f} r2p={pw_in.r_squared:.4f} r2e={ex_in.r_squared:.4f}"]
    for r in (0.6, 0.9):
        spec = spectrum(r)
        ex = fit_exponential(spec)
        ok &= ex.r_squared >= 0.98 and ex.slope < 0
        detail.append(f"r={r} alpha={ex.slope:.4f} r2e={ex.r_squared:.5f}")
        if r == 0.9:
            ok &= ex.r_squared > fit_powerlaw(spec).r_squared
    criterion("8", "power law inside, exponential outside", ok, " ".join(detail))
    assert ok


def test_c9_beta_insensitivity(criterion):
    betas = [fit_powerlaw(spectrum(r), (2, 40)).slope for r in (0.1, 0.2, 0.3, 0.4)]
    spread = relative_spread(betas)
    ok = spread <= 0.2
    criterion("9", "beta spread over r=0.1..0.4 <= 20%", ok,
              "beta=" + ",".join(f"{b:.4f}" for b in betas) + f" (max-min)/|mean|={spread:.3f}")
    assert ok


def test_c10_classical(criterion):
    zero = classical_evolve(DriveParams(0.1, 0.0, 50), 0.0, 0.0) == (0.0, 0.0)
    growth = {r: floquet_growth(DriveParams.from_ratio(0.1, r, 1))
              for r in (0.0, 0.25, -0.25, 0.75, -0.75, 0.9, -0.9)}
    unstable = all(growth[r] > 1 for r in (0.0, 0.25, -0.25))
    stable = all(growth[r] <= 1 + 1e-6 for r in (0.75, -0.75, 0.9, -0.9))
    pr = all(pr_condition(DriveParams(h, e, 1)) == (abs(e) < h / 2)
             for h in (0.01, 0.03, 0.1, 0.5) for e in np.linspace(-h, h, 41))
    ok = zero and unstable and stable and pr
    criterion("10", "classical zero solution, Floquet growth, resonance test", ok,
              f"zero={zero} growth(0)={growth[0.0]:.6f} growth(0.9)={growth[0.9]:.12f} pr={pr}")
    assert ok


def test_c11a_fixed_step_order(criterion):
    p = DriveParams.from_ratio(0.1, 0.2, 20)
    ref = evolve(ground_state(), p, SimConfig(rel_tol=1e-13, abs_tol=1e-15)).B
    e1, e2 = (abs(evolve_fixed_step(ground_state(), p, n).B - ref) for n in (400, 800))
    ok = abs(e1 / e2 - 16) <= 3
    criterion("11a", "RK4 error ratio 16 +- 3", ok, f"ratio={e1 / e2:.2f}")
    assert ok


def test_c11b_thread_determinism(criterion, tmp_path):
    blobs = []
    for threads in (1, 4, 8):
        out = tmp_path / str(threads)
        assert cli_main(["sweep", "--h", "0.03", "--nu", "300", "--r-steps", "41",
                         "--threads", str(threads), "--out", str(out)]) == 0
        blobs.append({f.name: f.read_bytes() for f in out.iterdir() if f.name != "manifest.json"})
    ok = blobs[0] == blobs[1] == blobs[2]
    criterion("11b", "sweep outputs byte-identical at 1/4/8 threads", ok, f"files={len(blobs[0])}")
    assert ok

"""Command-line front end: ``paramres {evolve,spectrum,sweep,classical,fit}``.

Settings resolve as command-line flag > ``--config`` file > built-in
default, and the resolved set is echoed into ``manifest.json``.
Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import configparser
import dataclasses
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis, classical, dynamics, output, spectral
from .core import DriveParams, SimConfig, ground_state
from .errors import InvalidParameter, NumericalFailure, ParamResError, UndefinedRatio

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

TRACE_HEADER = ("tau", "a_re", "a_im", "b_re", "b_im", "g", "norm_residual", "energy")

# dest name -> (type, default); None default means "required unless given elsewhere"
_SETTINGS = {
    "h": (float, None),
    "eps_bar": (float, None),
    "r": (float, None),
    "nu": (int, None),
    "n_max": (int, SimConfig.n_max),
    "abs_tol": (float, SimConfig.abs_tol),
    "rel_tol": (float, SimConfig.rel_tol),
    "out": (str, "."),
    "threads": (int, 1),
    "trace": (str, None),
    "x0": (float, 1e-6),
    "v0": (float, 0.0),
    "samples": (int, 200),
    "r_min": (float, -1.0),
    "r_max": (float, 1.0),
    "r_steps": (int, 201),
    "spectrum": (str, None),
    "model": (str, "auto"),
    "n_lo": (int, None),
    "n_hi": (int, None),
}


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser):
    p.add_argument("--h", type=float, help="drive amplitude, 0 <= h < 1")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--eps-bar", type=float, help="detuning eps/omega_0")
    g.add_argument("--r", type=float, help="detuning ratio eps_bar/h")
    p.add_argument("--nu", type=int, help="number of drive half-cycles")
    p.add_argument("--n-max", type=int, help="initial spectral truncation (even)")
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--out", metavar="DIR", help="output directory (default: .)")
    p.add_argument("--config", metavar="FILE", help="key = value settings file")
    p.add_argument("--threads", type=int, metavar="N")
    p.add_argument("--trace", metavar="FILE", help="trajectory CSV (evolve)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paramres", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("evolve", "evolve the ground state through the drive window"),
                        ("spectrum", "eigenstate probabilities of the evolved state"),
                        ("sweep", "scan r = eps_bar/h at fixed h and nu"),
                        ("classical", "classical oscillator, Floquet growth and oracle check"),
                        ("fit", "power-law and exponential fits of a spectrum")]:
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name == "sweep":
            p.add_argument("--r-min", type=float)
            p.add_argument("--r-max", type=float)
            p.add_argument("--r-steps", type=int, help="number of grid points")
        if name == "classical":
            p.add_argument("--x0", type=float)
            p.add_argument("--v0", type=float)
            p.add_argument("--samples", type=int, help="trajectory samples")
        if name == "fit":
            p.add_argument("--spectrum", metavar="CSV", help="n,p_n file instead of a simulation")
            p.add_argument("--model", choices=("auto", "power_law", "exponential", "both"))
            p.add_argument("--n-lo", type=int)
            p.add_argument("--n-hi", type=int)
    return parser


def _read_config(path) -> dict:
    cp = configparser.ConfigParser()
    cp.read_string("[paramres]\n" + Path(path).read_text())
    settings = {}
    for key, raw in cp["paramres"].items():
        dest = key.replace("-", "_")
        if dest not in _SETTINGS:
            raise UsageError(f"unknown config key {key!r} in {path}")
        kind = _SETTINGS[dest][0]
        try:
            settings[dest] = kind(raw)
        except ValueError:
            raise UsageError(f"bad value for {key!r} in {path}: {raw!r}") from None
    return settings


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags into one settings dict."""
    settings = {k: default for k, (_, default) in _SETTINGS.items()}
    if args.config:
        settings.update(_read_config(args.config))
    for key in _SETTINGS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if args.eps_bar is not None:
        settings["r"] = None
    elif args.r is not None:
        settings["eps_bar"] = None
    if settings["eps_bar"] is not None and settings["r"] is not None:
        raise UsageError("give either eps-bar or r, not both")
    return settings


def _params(s: dict, r=None) -> DriveParams:
    if s["h"] is None or s["nu"] is None:
        raise UsageError("--h and --nu are required")
    if r is not None:
        return DriveParams.from_ratio(s["h"], r, s["nu"])
    if s["r"] is not None:
        return DriveParams.from_ratio(s["h"], s["r"], s["nu"])
    return DriveParams(s["h"], s["eps_bar"] or 0.0, s["nu"])


def _config(s: dict) -> SimConfig:
    return SimConfig(abs_tol=s["abs_tol"], rel_tol=s["rel_tol"], n_max=s["n_max"],
                     n_max_cap=max(SimConfig.n_max_cap, s["n_max"]))


def _state_payload(params, state) -> dict:
    return {"parameters": params.as_dict(), "tau_final": params.tau_final,
            "A": [state.a_re, state.a_im], "B": [state.b_re, state.b_im],
            "energy": spectral.energy_expectation(state), "norm_residual": state.norm_residual}


def cmd_evolve(s: dict, out: Path) -> list[Path]:
    params, config = _params(s), _config(s)
    files = []
    if s["trace"]:
        samples = dynamics.evolve_traced(ground_state(), params, config, max(s["samples"], 2))
        state = samples[-1].state
        rows = [(x.tau, x.state.a_re, x.state.a_im, x.state.b_re, x.state.b_im, x.g,
                 x.norm_residual, x.energy) for x in samples]
        files.append(output.write_csv(s["trace"], TRACE_HEADER, rows))
    else:
        state = dynamics.evolve(ground_state(), params, config)
    payload = _state_payload(params, state)
    payload["p0"] = spectral.pn_closed_even(state, 0)
    files.insert(0, output.write_json(out / "state.json", payload))
    return files


def _spectrum_files(spec, out: Path, extra: dict) -> list[Path]:
    n, p = spec.n, spec.p
    files = [output.write_csv(out / "spectrum.csv", ("n", "p_n"), zip(n.tolist(), p.tolist()))]
    files.append(output.write_json(out / "spectrum.json", {**extra, **spec.as_dict()}))
    files.append(output.write_plot_data(out / "pn_vs_n.dat", "n", "p_n", n, p))
    keep = (n >= 2) & (p > 0)
    with np.errstate(divide="ignore"):
        files.append(output.write_plot_data(out / "log_ratio_vs_log_n.dat", "ln(n)", "ln(p_n/p_0)",
                                            np.log(n[keep]), np.log(p[keep] / p[0])))
        files.append(output.write_plot_data(out / "log_pn_vs_n.dat", "n", "ln(p_n)",
                                            n[p > 0], np.log(p[p > 0])))
    return files


def cmd_spectrum(s: dict, out: Path) -> list[Path]:
    params, config = _params(s), _config(s)
    state = dynamics.evolve(ground_state(), params, config)
    spec = spectral.decompose(state, config)
    return _spectrum_files(spec, out, {"parameters": params.as_dict()})


def cmd_sweep(s: dict, out: Path) -> list[Path]:
    if s["h"] is None or s["nu"] is None:
        raise UsageError("--h and --nu are required")
    if s["r_steps"] < 1:
        raise UsageError("--r-steps must be >= 1")
    config = _config(s)
    grid = np.linspace(s["r_min"], s["r_max"], s["r_steps"])
    result = analysis.sweep(s["h"], s["nu"], grid, config, threads=max(1, s["threads"]))
    rows = [tuple(getattr(row, c) for c in analysis.SWEEP_COLUMNS) for row in result.rows]
    files = [output.write_csv(out / "sweep.csv", analysis.SWEEP_COLUMNS, rows)]
    ok = result.ok_rows()
    r = np.array([row.r for row in ok])
    columns = {"p0": "p_0", "p2": "p_2", "p4": "p_4", "p6": "p_6", "energy": "<E>",
               "fit_slope": "fit_slope"}
    for attr, label in columns.items():
        ys = [getattr(row, attr) for row in ok]
        files.append(output.write_plot_data(out / f"{attr}_vs_r.dat", "r", label, r, ys,
                                            comment=f"h={s['h']} nu={s['nu']}"))
    for n in (2, 4, 6):
        ys = [getattr(row, f"p{n}") / row.p0 if row.p0 > 0 else math.nan for row in ok]
        files.append(output.write_plot_data(out / f"ratio_p{n}_p0_vs_r.dat", "r", f"p_{n}/p_0", r, ys,
                                            comment=f"h={s['h']} nu={s['nu']}"))
    summary = {"h": s["h"], "nu": s["nu"], "points": len(result.rows),
               "errors": len(result.rows) - len(ok)}
    try:
        summary["transition"] = list(analysis.detect_transition(result))
    except ParamResError as exc:
        summary["transition"] = None
        summary["transition_error"] = str(exc)
    widths = {}
    for sign, key in ((-1, "negative"), (1, "positive")):
        try:
            widths[key] = analysis.transition_width(result, sign=sign)
        except ParamResError:
            widths[key] = None
    summary["width_10_90"] = widths
    files.append(output.write_json(out / "sweep.json", summary))
    return files


def cmd_classical(s: dict, out: Path) -> list[Path]:
    params, config = _params(s), _config(s)
    taus, x, v = classical.classical_trajectory(params, s["x0"], s["v0"], config, s["samples"])
    files = [output.write_csv(out / "classical_trajectory.csv", ("tau", "x", "v"),
                              zip(taus.tolist(), x.tolist(), v.tolist()))]
    u = classical.complex_solution(params, config)[-1]
    state = dynamics.evolve(ground_state(), params, config)
    try:
        pr = classical.pr_condition(params)
    except UndefinedRatio:
        pr = None
    payload = {
        "parameters": params.as_dict(),
        "x_final": float(x[-1]), "v_final": float(v[-1]),
        "floquet_growth": classical.floquet_growth(params, config),
        "pr_condition": pr,
        "oracle_b_diff": abs(state.B - u.width),
        "wronskian_drift": abs(u.wronskian - 1.0),
        "energy_classical": u.energy,
        "energy_quantum": spectral.energy_expectation(state),
    }
    files.append(output.write_json(out / "classical.json", payload))
    return files


def _read_spectrum(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    n, p = data[:, 0].astype(int), data[:, 1]
    if np.any(n % 2) or not np.array_equal(n, 2 * np.arange(n.size)):
        raise UsageError(f"{path}: expected consecutive even n starting at 0")
    return spectral.decomposition_from_probabilities(p)


def cmd_fit(s: dict, out: Path) -> list[Path]:
    if s["spectrum"]:
        spec = _read_spectrum(s["spectrum"])
        inside = None
        extra = {"source": s["spectrum"]}
    else:
        params, config = _params(s), _config(s)
        spec = spectral.decompose(dynamics.evolve(ground_state(), params, config), config)
        inside = classical.pr_condition(params) if params.h > 0 else None
        extra = {"parameters": params.as_dict()}
    n_range = None
    if s["n_lo"] is not None or s["n_hi"] is not None:
        lo, hi = analysis.default_fit_range(spec)
        n_range = (s["n_lo"] if s["n_lo"] is not None else lo, s["n_hi"] if s["n_hi"] is not None else hi)
    model = s["model"]
    fits = {}
    if model in ("power_law", "both") or (model == "auto" and inside is not False):
        fits["power_law"] = analysis.fit_powerlaw(spec, n_range).as_dict()
    if model in ("exponential", "both") or (model == "auto" and inside is not True):
        fits["exponential"] = analysis.fit_exponential(spec, n_range).as_dict()
    return [output.write_json(out / "fit.json", {**extra, "pr_condition": inside, "fits": fits})]


COMMANDS = {"evolve": cmd_evolve, "spectrum": cmd_spectrum, "sweep": cmd_sweep,
            "classical": cmd_classical, "fit": cmd_fit}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        settings = resolve(args)
        out = Path(settings["out"])
        out.mkdir(parents=True, exist_ok=True)
        files = COMMANDS[args.command](settings, out)
        config = dataclasses.asdict(_config(settings))
        output.write_manifest(out / "manifest.json", args.command, settings, config,
                              time.perf_counter() - start, files)
    except (UsageError, InvalidParameter) as exc:
        print(f"paramres {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"paramres {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"paramres {args.command}: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

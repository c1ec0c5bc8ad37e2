"""Byte-stable writers for CSV, JSON, plot data and run manifests.

Floats are written with 17 significant digits so every double round-trips.
Formatting goes through ``format`` and never through the locale.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
from pathlib import Path

from . import __version__


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def write_plot_data(path, xlabel: str, ylabel: str, xs, ys, comment: str = "") -> Path:
    """Two whitespace-separated columns under a '#' header."""
    path = Path(path)
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"# {xlabel} {ylabel}")
    lines += [f"{fmt(float(x))} {fmt(float(y))}" for x, y in zip(xs, ys)]
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def write_json(path, payload) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_clean(payload), indent=2, sort_keys=True) + "\n", encoding="ascii")
    return path


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, command: str, parameters: dict, config: dict, duration: float,
                   outputs) -> Path:
    """Run manifest with a content digest for every output file."""
    digests = {os.fspath(p): sha256(p) for p in outputs}
    payload = {
        "tool": "paramres",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "config": config,
        "duration_s": duration,
        "outputs": digests,
    }
    return write_json(path, payload)

"""Deterministic output files: binary field dumps, CSV tables, run manifests.

Field dumps are a JSON header next to a raw little-endian float64 payload
(row-major; spectral payloads interleave real and imaginary parts).  CSV
floats are written with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import __version__
from .spectral_field import GridSpec, RealField, SpectralField

CSV_SCHEMA_VERSION = 1


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path: Union[str, Path], header: Sequence[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_field_dump(
    json_path: Union[str, Path],
    field: Union[RealField, SpectralField],
    seed: Optional[int] = None,
    alpha: Optional[float] = None,
) -> None:
    json_path = Path(json_path)
    bin_path = json_path.with_suffix(".bin")
    if isinstance(field, RealField):
        kind = "real"
        payload = np.ascontiguousarray(field.values, dtype="<f8")
    else:
        kind = "spectral"
        n = field.grid.n
        payload = np.empty(2 * n * n, dtype="<f8")
        payload[0::2] = field.coeffs.real.ravel()
        payload[1::2] = field.coeffs.imag.ravel()
    header = {"n": field.grid.n, "kind": kind, "seed": seed, "alpha": alpha}
    json_path.write_text(json.dumps(header, sort_keys=True) + "\n")
    bin_path.write_bytes(payload.tobytes())


def read_field_dump(json_path: Union[str, Path]) -> Union[RealField, SpectralField]:
    json_path = Path(json_path)
    header = json.loads(json_path.read_text())
    n = int(header["n"])
    grid = GridSpec(n)
    raw = np.frombuffer(json_path.with_suffix(".bin").read_bytes(), dtype="<f8")
    if header["kind"] == "real":
        if raw.size != n * n:
            raise ValueError("field payload size does not match header")
        return RealField(grid, raw.reshape(n, n))
    if header["kind"] == "spectral":
        if raw.size != 2 * n * n:
            raise ValueError("spectral payload size does not match header")
        coeffs = raw[0::2] + 1j * raw[1::2]
        return SpectralField(grid, coeffs.reshape(n, n))
    raise ValueError(f"unknown field kind {header['kind']!r}")


def write_manifest(
    outdir: Union[str, Path],
    command: str,
    config_echo: dict,
    master_seed: int,
    wall_time_s: float,
) -> None:
    manifest = {
        "command": command,
        "config_echo": config_echo,
        "master_seed": int(master_seed),
        "tool_version": __version__,
        "csv_schema_version": CSV_SCHEMA_VERSION,
        "wall_time_s": wall_time_s,
    }
    path = Path(outdir) / "manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


class Stopwatch:
    def __init__(self) -> None:
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

"""On-disk formats: raw complex field files, binary PGM images, and CSV
tables.  Every write is atomic (temp file then rename)."""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .modes import ComplexField, GridSpec

FIELD_FORMAT_VERSION = 1


def _atomic_write_bytes(path: str, data: bytes):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".evf-tmp-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text(path: str, text: str):
    _atomic_write_bytes(path, text.encode())


def save_field(path: str, field: ComplexField, energy_ev: float,
               field_t: float, note: str = ""):
    """Write a field file: one JSON header line, then the raw payload.

    The payload is little-endian float64 (re, im) pairs, row-major,
    16 * n^2 bytes exactly.
    """
    header = {
        "format_version": FIELD_FORMAT_VERSION,
        "grid": {"n": field.grid.samples_per_side,
                 "side_m": field.grid.physical_side_length},
        "z_m": field.z_position,
        "energy_eV": energy_ev,
        "field_T": field_t,
        "note": note,
    }
    payload = np.ascontiguousarray(field.amplitudes, dtype="<c16").tobytes()
    _atomic_write_bytes(path, json.dumps(header).encode() + b"\n" + payload)


def load_field(path: str):
    """Read a field file; returns (ComplexField, header dict)."""
    with open(path, "rb") as handle:
        blob = handle.read()
    newline = blob.find(b"\n")
    if newline < 0:
        raise ValueError(f"{path}: missing header terminator")
    header = json.loads(blob[:newline])
    if header.get("format_version") != FIELD_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format_version "
                         f"{header.get('format_version')!r}")
    n = header["grid"]["n"]
    payload = blob[newline + 1:]
    expected = 16 * n * n
    if len(payload) != expected:
        raise ValueError(f"{path}: payload is {len(payload)} bytes, "
                         f"expected {expected}")
    amps = np.frombuffer(payload, dtype="<c16").reshape(n, n).copy()
    grid = GridSpec(n, header["grid"]["side_m"])
    return ComplexField(grid, header["z_m"], amps), header


def write_pgm(path: str, gray: np.ndarray):
    """Binary PGM (P5, maxval 255) from a uint8 array."""
    gray = np.ascontiguousarray(gray, dtype=np.uint8)
    if gray.ndim != 2:
        raise ValueError("PGM output needs a 2-D array")
    header = f"P5\n{gray.shape[1]} {gray.shape[0]}\n255\n".encode()
    _atomic_write_bytes(path, header + gray.tobytes())


def write_mask_pgm(path: str, values: np.ndarray):
    """Binary mask as 0/255 pixels."""
    write_pgm(path, values.astype(np.uint8) * 255)


def write_intensity_pgm(path: str, intensity: np.ndarray) -> float:
    """Intensity frame with per-frame max normalisation.

    The peak value is recorded in a '<path>.json' sidecar so frames remain
    quantitatively comparable; returns the peak.
    """
    peak = float(intensity.max())
    if peak > 0:
        scaled = np.rint(255.0 * intensity / peak)
    else:
        scaled = np.zeros_like(intensity)
    write_pgm(path, scaled.astype(np.uint8))
    write_text(path + ".json", json.dumps({"max_intensity": peak}) + "\n")
    return peak


def format_csv(comment: str, columns, rows) -> str:
    """CSV with a '#' comment line naming columns and units."""
    lines = [f"# {comment}" if comment else "#", ",".join(columns)]
    for row in rows:
        lines.append(",".join(f"{value:.12e}" for value in row))
    return "\n".join(lines) + "\n"

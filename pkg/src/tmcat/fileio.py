"""Deterministic file formats for run artifacts.

CSV uses '.' decimals and 17 significant digits (round-trip exact for
doubles), PGM is binary P5 with big-endian 16-bit samples above 8 bits,
JSON is sorted-key with no timestamps, so identical inputs always produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError


def format_number(value) -> str:
    """Locale-independent cell formatting; floats keep full precision."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value) + 0.0, ".17g")


def write_csv(path, headers: list[str], rows) -> None:
    """Write rows of numbers (or strings) under frozen column headers."""
    lines = [",".join(headers)]
    for row in rows:
        lines.append(
            ",".join(v if isinstance(v, str) else format_number(v) for v in row)
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_pgm(path, counts: np.ndarray, max_value: int) -> None:
    """Binary P5 image; 2-byte big-endian samples when max_value > 255."""
    counts = np.asarray(counts)
    if counts.ndim != 2:
        raise ValidationError("PGM needs a 2-D array")
    if counts.min() < 0 or counts.max() > max_value:
        raise ValidationError("PGM samples fall outside [0, max_value]")
    if not 0 < max_value < 65536:
        raise ValidationError(f"PGM max value must be in [1, 65535], got {max_value}")
    header = f"P5\n{counts.shape[1]} {counts.shape[0]}\n{max_value}\n".encode("ascii")
    dtype = ">u2" if max_value > 255 else "u1"
    Path(path).write_bytes(header + counts.astype(dtype).tobytes())


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Read a binary P5 image back to (counts, max_value)."""
    data = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P5":
        raise ValidationError(f"not a binary PGM file: magic {fields[0]!r}")
    width, height, max_value = (int(f) for f in fields[1:4])
    pos += 1  # single whitespace byte after maxval
    dtype = ">u2" if max_value > 255 else "u1"
    counts = np.frombuffer(data, dtype=dtype, count=width * height, offset=pos)
    return counts.reshape(height, width).astype(np.uint16), max_value


def write_scaled_pgm(path, values: np.ndarray) -> dict:
    """Affine-map real values onto 16-bit gray and report the scaling.

    Returns the sidecar payload: value_min/value_max recover the data via
    value = value_min + code / 65535 * (value_max - value_min).
    """
    values = np.asarray(values, dtype=float)
    vmin = float(values.min())
    vmax = float(values.max())
    span = vmax - vmin
    if span <= 0.0:
        codes = np.zeros(values.shape, dtype=np.uint16)
    else:
        codes = np.floor((values - vmin) / span * 65535.0 + 0.5).astype(np.uint16)
    write_pgm(path, codes, 65535)
    return {"value_min": vmin, "value_max": vmax, "levels": 65535}

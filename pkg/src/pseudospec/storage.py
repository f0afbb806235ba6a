"""CSV emission and the binary checkpoint format.

All CSV numbers are written as decimals with 17 significant digits, enough to
round-trip any float64 exactly, so identical runs produce byte-identical
artifacts.

Checkpoint layout (little-endian throughout):

    magic   4 bytes  b"SPL3"
    version u32
    dims    3 x u64  samples per dimension
    period  3 x f64
    t       f64
    step    u64
    payload 3 contiguous C-order f64 arrays (vorticity components)

Reading a checkpoint validates magic, version, and payload length, and
reproduces the written arrays bit for bit.
"""

from __future__ import annotations

import csv
import hashlib
import struct
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .diagnostics import ContourLine, DiagnosticRecord
from .errors import IntegrityError
from .spectral import Field, Space, SpectralGrid

CHECKPOINT_MAGIC = b"SPL3"
CHECKPOINT_VERSION = 1
_HEADER = struct.Struct("<4sI3Q3ddQ")

DIAGNOSTIC_COLUMNS = (
    "t",
    "max_vorticity",
    "max_velocity",
    "energy",
    "enstrophy",
    "stretching_inf",
    "dt_used",
)


def format_number(v) -> str:
    """17-significant-digit decimal for floats; integers verbatim."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return f"{float(v):.17g}"


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else format_number(c) for c in row])


def write_burgers_errors(path: Path | str, rows: Iterable[tuple[float, int, str, float, float]]) -> None:
    write_csv(path, ("t", "N", "filter", "l_inf", "l_1"), rows)


def write_pointwise(path: Path | str, x: np.ndarray, error: np.ndarray) -> None:
    write_csv(path, ("x", "error"), zip(x, error))


def write_spectrum(path: Path | str, k: np.ndarray, modulus: np.ndarray, oracle_modulus: np.ndarray) -> None:
    write_csv(path, ("k", "modulus", "oracle_modulus"), zip(k, modulus, oracle_modulus))


def write_filter_profile(path: Path | str, x: np.ndarray, rho_sharp: np.ndarray, rho_smooth: np.ndarray) -> None:
    write_csv(path, ("x", "rho_sharp", "rho_smooth"), zip(x, rho_sharp, rho_smooth))


def write_shell_spectrum(path: Path | str, values: np.ndarray, label: str) -> None:
    write_csv(path, ("k", label), enumerate(values))


def write_contours(path: Path | str, lines: Sequence[ContourLine]) -> None:
    def rows():
        for pid, line in enumerate(lines):
            for x, y in line.vertices:
                yield (line.level, pid, x, y)

    write_csv(path, ("level", "polyline", "x", "y"), rows())


class DiagnosticsWriter:
    """Streaming CSV sink for DiagnosticRecord rows with the pinned column order."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._fh: IO[str] = open(self.path, "w", newline="")
        self._writer = csv.writer(self._fh)
        self._writer.writerow(DIAGNOSTIC_COLUMNS)

    def __call__(self, record: DiagnosticRecord) -> None:
        self._writer.writerow(
            format_number(getattr(record, name)) for name in DIAGNOSTIC_COLUMNS
        )
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "DiagnosticsWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def write_diagnostics(path: Path | str, records: Iterable[DiagnosticRecord]) -> None:
    with DiagnosticsWriter(path) as sink:
        for r in records:
            sink(r)


def write_checkpoint(path: Path | str, t: float, step_count: int, omega: Field) -> None:
    if omega.space is not Space.PHYSICAL or omega.components != 3 or omega.grid.ndim != 3:
        raise ValueError("checkpoints hold a physical 3-component field on a 3-d grid")
    grid = omega.grid
    header = _HEADER.pack(
        CHECKPOINT_MAGIC, CHECKPOINT_VERSION, *grid.dims, *grid.period, float(t), int(step_count)
    )
    with open(path, "wb") as fh:
        fh.write(header)
        for c in range(3):
            fh.write(np.ascontiguousarray(omega.data[c], dtype="<f8").tobytes())


def read_checkpoint(path: Path | str) -> tuple[float, int, Field]:
    """Load (t, step_count, vorticity field); validates structure strictly.

    Raises:
        IntegrityError: on bad magic, unsupported version, malformed grid
            metadata, or truncated/oversized payload.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise IntegrityError(f"checkpoint {path} is shorter than its header")
    magic, version, n0, n1, n2, p0, p1, p2, t, step = _HEADER.unpack_from(raw)
    if magic != CHECKPOINT_MAGIC:
        raise IntegrityError(f"checkpoint {path} has bad magic {magic!r}")
    if version != CHECKPOINT_VERSION:
        raise IntegrityError(f"checkpoint {path} has unsupported version {version}")
    try:
        grid = SpectralGrid((n0, n1, n2), (p0, p1, p2))
    except ValueError as e:
        raise IntegrityError(f"checkpoint {path} has invalid grid metadata: {e}") from None
    count = 3 * n0 * n1 * n2
    expected = _HEADER.size + 8 * count
    if len(raw) != expected:
        raise IntegrityError(
            f"checkpoint {path} payload has {len(raw)} bytes, expected {expected}"
        )
    data = np.frombuffer(raw, dtype="<f8", count=count, offset=_HEADER.size)
    omega = Field(grid, Space.PHYSICAL, data.reshape((3, n0, n1, n2)).copy())
    return float(t), int(step), omega


def sha256_file(path: Path | str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()

"""Checkpoint format, CSV writers, number formatting, hashing.

Checkpoint corruption cases patch raw bytes at the documented header offsets,
so these tests double as a specification of the on-disk layout.
"""

import csv
import dataclasses
import struct

import numpy as np
import pytest

from pseudospec import (
    DIAGNOSTIC_COLUMNS,
    DiagnosticRecord,
    DiagnosticsWriter,
    Field,
    IntegrityError,
    Space,
    SpectralGrid,
    read_checkpoint,
    sha256_file,
    write_checkpoint,
    write_diagnostics,
)
from pseudospec.diagnostics import ContourLine
from pseudospec.storage import (
    CHECKPOINT_MAGIC,
    format_number,
    write_burgers_errors,
    write_contours,
    write_csv,
    write_filter_profile,
    write_pointwise,
    write_shell_spectrum,
    write_spectrum,
)

# sha256 of the three bytes "abc", a published reference value
SHA256_ABC = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def tube_like_field(seed=5, dims=(8, 8, 16)):
    rng = np.random.default_rng(seed)
    g = SpectralGrid(dims, (2.0 * np.pi, 2.0 * np.pi, 4.0 * np.pi))
    return Field(g, Space.PHYSICAL, rng.standard_normal((3,) + dims))


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestCheckpoint:
    def test_round_trip_is_bit_exact(self, tmp_path):
        w = tube_like_field()
        path = tmp_path / "c.bin"
        write_checkpoint(path, 1.25, 37, w)
        t, step, back = read_checkpoint(path)
        assert t == 1.25
        assert step == 37
        assert back.grid.dims == w.grid.dims
        assert back.grid.period == w.grid.period
        assert back.space is Space.PHYSICAL
        assert np.array_equal(back.data, w.data)

    def test_writes_are_deterministic(self, tmp_path):
        w = tube_like_field()
        a, b = tmp_path / "a.bin", tmp_path / "b.bin"
        write_checkpoint(a, 0.5, 4, w)
        write_checkpoint(b, 0.5, 4, w)
        assert a.read_bytes() == b.read_bytes()

    def test_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "c.bin"
        write_checkpoint(path, 0.0, 0, tube_like_field())
        raw = bytearray(path.read_bytes())
        raw[:4] = b"XXXX"
        path.write_bytes(raw)
        with pytest.raises(IntegrityError):
            read_checkpoint(path)

    def test_rejects_unknown_version(self, tmp_path):
        path = tmp_path / "c.bin"
        write_checkpoint(path, 0.0, 0, tube_like_field())
        raw = bytearray(path.read_bytes())
        struct.pack_into("<I", raw, 4, 99)
        path.write_bytes(raw)
        with pytest.raises(IntegrityError):
            read_checkpoint(path)

    def test_rejects_invalid_grid_metadata(self, tmp_path):
        path = tmp_path / "c.bin"
        write_checkpoint(path, 0.0, 0, tube_like_field())
        raw = bytearray(path.read_bytes())
        # dims[0] sits right after magic + version; 3 is odd and below minimum
        struct.pack_into("<Q", raw, 8, 3)
        path.write_bytes(raw)
        with pytest.raises(IntegrityError):
            read_checkpoint(path)

    def test_rejects_truncated_payload(self, tmp_path):
        path = tmp_path / "c.bin"
        write_checkpoint(path, 0.0, 0, tube_like_field())
        raw = path.read_bytes()
        path.write_bytes(raw[:-8])
        with pytest.raises(IntegrityError):
            read_checkpoint(path)

    def test_rejects_trailing_garbage(self, tmp_path):
        path = tmp_path / "c.bin"
        write_checkpoint(path, 0.0, 0, tube_like_field())
        path.write_bytes(path.read_bytes() + b"\x00" * 8)
        with pytest.raises(IntegrityError):
            read_checkpoint(path)

    def test_rejects_header_only_file(self, tmp_path):
        path = tmp_path / "c.bin"
        path.write_bytes(CHECKPOINT_MAGIC)
        with pytest.raises(IntegrityError):
            read_checkpoint(path)

    def test_write_validates_field_shape(self, tmp_path):
        g2 = SpectralGrid((8, 8), (2.0 * np.pi,) * 2)
        flat = Field(g2, Space.PHYSICAL, np.zeros((8, 8)))
        with pytest.raises(ValueError):
            write_checkpoint(tmp_path / "c.bin", 0.0, 0, flat)
        w = tube_like_field()
        from pseudospec import forward_transform

        with pytest.raises(ValueError):
            write_checkpoint(tmp_path / "c.bin", 0.0, 0, forward_transform(w))


class TestFormatNumber:
    @pytest.mark.parametrize(
        "v",
        [np.pi, 1.0 / 3.0, 1e-300, 1e300, 2.5, -0.0, 0.26629895443525275],
    )
    def test_floats_round_trip_exactly(self, v):
        assert float(format_number(v)) == v

    def test_integers_stay_verbatim(self):
        assert format_number(1024) == "1024"
        assert format_number(np.int64(-3)) == "-3"

    def test_float_valued_floats_keep_decimal_form(self):
        assert format_number(1.0) == "1"
        assert format_number(0.5) == "0.5"


class TestCsvWriters:
    def test_write_csv_formats_numbers_and_passes_strings(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(path, ("a", "b", "c"), [(1.0 / 3.0, 7, "sharp23")])
        rows = read_rows(path)
        assert rows[0] == ["a", "b", "c"]
        assert rows[1][0] == "0.33333333333333331"
        assert rows[1][1] == "7"
        assert rows[1][2] == "sharp23"

    def test_burgers_errors_schema(self, tmp_path):
        path = tmp_path / "errors.csv"
        write_burgers_errors(path, [(0.9, 1024, "smooth36", 1e-3, 1e-4)])
        rows = read_rows(path)
        assert rows[0] == ["t", "N", "filter", "l_inf", "l_1"]
        assert rows[1] == ["0.90000000000000002", "1024", "smooth36", "0.001", "0.0001"]

    def test_pointwise_and_spectrum_schemas(self, tmp_path):
        x = np.array([0.0, 0.5])
        write_pointwise(tmp_path / "p.csv", x, np.array([1e-3, 2e-3]))
        rows = read_rows(tmp_path / "p.csv")
        assert rows[0] == ["x", "error"]
        assert len(rows) == 3
        write_spectrum(tmp_path / "s.csv", np.arange(2), x, x)
        rows = read_rows(tmp_path / "s.csv")
        assert rows[0] == ["k", "modulus", "oracle_modulus"]
        assert rows[1][0] == "0"

    def test_filter_profile_schema(self, tmp_path):
        x = np.array([0.0, 1.0])
        write_filter_profile(tmp_path / "f.csv", x, np.array([1.0, 0.0]), np.array([1.0, 0.5]))
        rows = read_rows(tmp_path / "f.csv")
        assert rows[0] == ["x", "rho_sharp", "rho_smooth"]
        assert rows[1] == ["0", "1", "1"]
        assert rows[2] == ["1", "0", "0.5"]

    def test_shell_spectrum_rows_are_indexed(self, tmp_path):
        write_shell_spectrum(tmp_path / "e.csv", np.array([1.0, 0.25]), "E")
        rows = read_rows(tmp_path / "e.csv")
        assert rows[0] == ["k", "E"]
        assert rows[1] == ["0", "1"]
        assert rows[2] == ["1", "0.25"]

    def test_contours_flatten_to_tagged_polylines(self, tmp_path):
        lines = [
            ContourLine(0.5, np.array([[0.0, 1.0], [1.0, 2.0]])),
            ContourLine(0.25, np.array([[3.0, 4.0]])),
        ]
        write_contours(tmp_path / "c.csv", lines)
        rows = read_rows(tmp_path / "c.csv")
        assert rows[0] == ["level", "polyline", "x", "y"]
        assert [r[1] for r in rows[1:]] == ["0", "0", "1"]
        assert rows[1][:2] == ["0.5", "0"]
        assert rows[3] == ["0.25", "1", "3", "4"]


class TestDiagnosticsWriter:
    def records(self):
        return [
            DiagnosticRecord(0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 0.1),
            DiagnosticRecord(0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 0.2),
        ]

    def test_columns_match_record_fields(self):
        names = tuple(f.name for f in dataclasses.fields(DiagnosticRecord))
        assert names == DIAGNOSTIC_COLUMNS

    def test_streaming_and_batch_writers_agree(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        with DiagnosticsWriter(a) as sink:
            for r in self.records():
                sink(r)
        write_diagnostics(b, self.records())
        assert a.read_bytes() == b.read_bytes()
        rows = read_rows(a)
        assert rows[0] == list(DIAGNOSTIC_COLUMNS)
        assert rows[1] == ["0", "1", "2", "3", "4", "5", "0.10000000000000001"]
        assert len(rows) == 3


class TestHashing:
    def test_sha256_file_reference_value(self, tmp_path):
        path = tmp_path / "abc.txt"
        path.write_bytes(b"abc")
        assert sha256_file(path) == SHA256_ABC

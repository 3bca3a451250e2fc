"""Tests for CSV and JSON emission."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from pulsecontrol.dynamics.pulses import Normalization, PulseSchedule
from pulsecontrol.dynamics.trace import trace
from pulsecontrol.errors import ConfigError
from pulsecontrol.export import (
    read_frame_csv,
    read_scan_summary,
    read_trace,
    write_frame_csv,
    write_json,
    write_modes,
    write_scan_result,
    write_trace,
)
from pulsecontrol.reservoir.coupling import ModeSet
from pulsecontrol.scanners.tau_scanner import ScanResult


class TestCsv:
    def test_twelve_significant_digits(self, tmp_path: Path) -> None:
        """Floats are written with twelve significant digits."""
        path = write_frame_csv(pd.DataFrame({"x": [1.0 / 3.0]}), tmp_path / "x.csv")
        assert path.read_text(encoding="utf-8") == "x\n0.333333333333\n"

    def test_creates_parent_directories(self, tmp_path: Path) -> None:
        """Missing parents are created and no temporary file is left behind."""
        path = write_frame_csv(pd.DataFrame({"x": [1.0]}), tmp_path / "a" / "b" / "x.csv")
        assert path.exists()
        assert not list(path.parent.glob(".x.csv.*"))

    def test_trailer_lines_are_comments(self, tmp_path: Path) -> None:
        """Trailer lines become comments that readers skip."""
        path = write_frame_csv(pd.DataFrame({"x": [1.0, 2.0]}), tmp_path / "x.csv", trailer=["note=1"])
        assert path.read_text(encoding="utf-8").endswith("# note=1\n")
        assert read_frame_csv(path)["x"].tolist() == [1.0, 2.0]

    def test_unreadable_table(self, tmp_path: Path) -> None:
        """A missing table raises ConfigError."""
        with pytest.raises(ConfigError):
            read_frame_csv(tmp_path / "absent.csv")

    def test_trace_round_trip(self, tmp_path: Path) -> None:
        """A written trace reads back with the requested normalization."""
        modes = ModeSet.from_pairs([(0.9, 0.05), (1.1, 0.05)])
        original = trace(modes, np.linspace(0.0, 10.0, 21), PulseSchedule.uniform(2, 3.0))
        restored = read_trace(write_trace(original, tmp_path / "trace.csv"), Normalization.PAPER_LITERAL)
        assert len(restored) == 21
        assert np.allclose(restored.c_physical, original.c_physical, rtol=1e-11)
        assert restored.normalization is Normalization.PAPER_LITERAL

    def test_modes_table(self, tmp_path: Path) -> None:
        """Mode tables carry physical frequencies and squared couplings."""
        path = write_modes(ModeSet.single(1.0, 0.25, omega_p=2.0), tmp_path / "modes.csv")
        assert path.read_text(encoding="utf-8") == "omega_k,h_k_sq\n2,0.25\n"


class TestScanExport:
    def test_summary_line_round_trip(self, tmp_path: Path) -> None:
        """The scan CSV ends with a best_tau summary that parses back."""
        result = ScanResult(rows=[(6.0, 0.1), (6.3, 0.5), (6.6, 0.2)], best_tau=6.2831853, best_value=0.4888)
        path = write_scan_result(result, tmp_path / "scan.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "tau_s_scaled,metric_value"
        assert lines[-1] == "# best_tau=6.2831853,best_value=0.4888"
        assert read_scan_summary(path) == (6.2831853, 0.4888)

    def test_missing_summary(self, tmp_path: Path) -> None:
        """A scan CSV without its summary line is rejected."""
        path = write_frame_csv(pd.DataFrame({"tau_s_scaled": [1.0], "metric_value": [0.5]}), tmp_path / "scan.csv")
        with pytest.raises(ConfigError):
            read_scan_summary(path)


class TestJson:
    def test_sorted_and_indented(self, tmp_path: Path) -> None:
        """JSON reports use sorted keys and two-space indentation."""
        path = write_json({"b": 1, "a": {"d": 2, "c": 3}}, tmp_path / "report.json")
        text = path.read_text(encoding="utf-8")
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("}\n")
        assert json.loads(text) == {"a": {"c": 3, "d": 2}, "b": 1}
        assert '\n  "a": {' in text

    def test_overwrite_is_atomic(self, tmp_path: Path) -> None:
        """Rewriting a report replaces it without leftovers."""
        path = tmp_path / "report.json"
        write_json({"run": 1}, path)
        write_json({"run": 2}, path)
        assert json.loads(path.read_text(encoding="utf-8")) == {"run": 2}
        assert [p.name for p in tmp_path.iterdir()] == ["report.json"]

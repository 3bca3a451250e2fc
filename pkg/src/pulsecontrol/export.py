"""CSV and JSON emission for traces, oracle runs, scans and reports."""
from __future__ import annotations

import json
import os
import re
import tempfile
from pathlib import Path
from typing import Any, Iterable, Mapping, Tuple

import pandas as pd
from loguru import logger

from pulsecontrol.dynamics.pulses import Normalization
from pulsecontrol.dynamics.trace import Trace
from pulsecontrol.errors import ConfigError
from pulsecontrol.reservoir.coupling import ModeSet
from pulsecontrol.scanners.tau_scanner import ScanResult

FLOAT_FORMAT = "%.12g"
_SUMMARY_RE = re.compile(r"^#\s*best_tau=([^,]+),best_value=(\S+)\s*$")


def _atomic_write(path: Path, text: str) -> Path:
    """Write ``text`` next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_frame_csv(frame: pd.DataFrame, path: Path, trailer: Iterable[str] = ()) -> Path:
    """Write ``frame`` with 12 significant digits; ``trailer`` lines become ``#`` comments."""
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    for line in trailer:
        text += f"# {line}\n"
    written = _atomic_write(path, text)
    logger.debug("Wrote table | path={path} rows={rows}", path=str(written), rows=len(frame), component="export")
    return written


def read_frame_csv(path: Path) -> pd.DataFrame:
    """Read a table written by :func:`write_frame_csv`, skipping ``#`` lines.

    Raises:
        ConfigError: If the file is missing or not parseable.
    """
    try:
        return pd.read_csv(path, comment="#")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ConfigError(f"Cannot read table {path}: {exc}") from exc


def write_json(payload: Mapping[str, Any], path: Path) -> Path:
    """Atomically write ``payload`` as indented JSON with sorted keys.

    Args:
        payload: JSON-serializable mapping.
        path: Destination file; parent directories are created.

    Returns:
        The written path.
    """
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    return _atomic_write(path, text)


def write_trace(trace: Trace, path: Path) -> Path:
    return write_frame_csv(trace.to_frame(), path)


def read_trace(path: Path, normalization: Normalization = Normalization.PHYSICAL) -> Trace:
    """Rebuild a :class:`Trace` from a ``trace.csv`` file."""
    return Trace.from_frame(read_frame_csv(path), normalization)


def write_modes(modes: ModeSet, path: Path) -> Path:
    return write_frame_csv(modes.to_frame(), path)


def write_scan_result(result: ScanResult, path: Path) -> Path:
    return write_frame_csv(result.to_frame(), path, trailer=[result.summary_line()])


def read_scan_summary(path: Path) -> Tuple[float, float]:
    """Return (best_tau, best_value) from the summary comment of a scan CSV."""
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        match = _SUMMARY_RE.match(line)
        if match:
            return float(match.group(1)), float(match.group(2))
    raise ConfigError(f"{path}: no best_tau/best_value summary line")


__all__ = [
    "FLOAT_FORMAT",
    "write_frame_csv",
    "read_frame_csv",
    "write_json",
    "write_trace",
    "read_trace",
    "write_modes",
    "write_scan_result",
    "read_scan_summary",
]

"""Execution helpers behind the CLI subcommands."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

import pandas as pd
from loguru import logger

from pulsecontrol.analytics.measures import MeasureReport, load_density_matrix, measure_report
from pulsecontrol.config import RunConfig
from pulsecontrol.dynamics.trace import Trace, trace
from pulsecontrol.errors import ConfigError
from pulsecontrol.export import write_frame_csv, write_json, write_scan_result
from pulsecontrol.oracle.fock import ComparisonReport, ReducedTrace, compare, evolve
from pulsecontrol.scanners.tau_scanner import ScanResult, scan_tau


def _emit_table(frame: pd.DataFrame, config: RunConfig, stem: str, extra: Dict[str, Any] | None = None) -> Path:
    """Write ``frame`` under the output directory in the configured format."""
    if config.output.format == "json":
        payload: Dict[str, Any] = {"columns": list(frame.columns), "rows": frame.to_dict(orient="records")}
        payload.update(extra or {})
        return write_json(payload, config.output_dir / f"{stem}.json")
    return write_frame_csv(frame, config.output_dir / f"{stem}.csv")


def simulate(config: RunConfig) -> Trace:
    """Closed-form trace for the configured reservoir, schedule and grid."""
    return trace(
        config.modes(),
        config.t_grid(),
        config.pulse_schedule(),
        normalization=config.normalization_enum,
        modes2=config.modes2(),
    )


def run_simulate(config: RunConfig) -> Path:
    """Write the analytic trace and print final/min/mean concurrence."""
    result = simulate(config)
    path = _emit_table(result.to_frame(), config, "trace")
    summary = result.summary()
    logger.info(
        "Simulation finished | samples={n} path={path}",
        n=len(result),
        path=str(path),
        component="runner",
    )
    print(
        f"final_c={summary['final_c']:.12g} min_c={summary['min_c']:.12g} "
        f"mean_c={summary['mean_c']:.12g} normalization={result.normalization.value}"
    )
    return path


def _require_oracle(config: RunConfig) -> None:
    """Raise ConfigError unless ``oracle.enabled`` is set."""
    if not config.oracle.enabled:
        raise ConfigError("oracle.enabled: must be true to run the Fock-space oracle")


def run_oracle(config: RunConfig) -> Path:
    """Run the Fock-space oracle and write its reduced-state table.

    Args:
        config: Run configuration; ``oracle.enabled`` must be true and
            ``discretization.K`` small enough for the oracle.

    Returns:
        Path of the written ``oracle.csv`` (or ``oracle.json``).

    Raises:
        ConfigError: If the oracle is disabled.
        TruncationOverflow: If the top Fock level leaks past the threshold.
    """
    _require_oracle(config)
    reduced = evolve(config.oracle_config())
    path = _emit_table(reduced.to_frame(), config, "oracle")
    print(
        f"samples={len(reduced)} min_c={float(reduced.concurrences.min()):.12g} "
        f"max_leak={reduced.max_leak:.3e}"
    )
    return path


def run_compare(config: RunConfig, self_compare: bool = False) -> ComparisonReport:
    """Compare the analytic trace with the oracle (or with itself).

    The JSON report is written before a tolerance failure is raised.
    """
    analytic = simulate(config)
    if self_compare:
        reduced = ReducedTrace.from_analytic(analytic)
    else:
        _require_oracle(config)
        reduced = evolve(config.oracle_config())
    report = compare(
        analytic,
        reduced,
        tolerance=config.compare.tolerance,
        relative_floor=config.compare.relative_floor,
    )
    path = write_json(report.to_dict(), config.output_dir / "compare.json")
    logger.info("Comparison report written | path={path}", path=str(path), component="runner")
    print(report.summary_line())
    report.raise_for_tolerance()
    return report


def run_scan(config: RunConfig) -> ScanResult:
    """Scan the pulse interval and write the metric table.

    Args:
        config: Run configuration; the ``scan`` section defines the grid,
            metric and refinement.

    Returns:
        The scan result, already written to ``scan.csv`` with its
        ``best_tau`` summary line (or to ``scan.json``).
    """
    spec = config.scan_spec()
    result = scan_tau(config.modes(), spec, modes2=config.modes2())
    if config.output.format == "json":
        _emit_table(
            result.to_frame(),
            config,
            "scan",
            extra={"best_tau": result.best_tau, "best_value": result.best_value},
        )
    else:
        write_scan_result(result, config.output_dir / "scan.csv")
    print(result.summary_line())
    return result


def run_measures(matrix_path: Path, output_dir: Path) -> MeasureReport:
    """Entanglement measures of a density matrix read from disk.

    Args:
        matrix_path: Text file of 32 numbers, or YAML/JSON with ``real`` and
            ``imag`` 4x4 lists.
        output_dir: Directory that receives ``measures.json``.

    Returns:
        The report that was written and printed.
    """
    report = measure_report(load_density_matrix(matrix_path))
    write_json(report.to_dict(), Path(output_dir) / "measures.json")
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return report


__all__ = [
    "simulate",
    "run_simulate",
    "run_oracle",
    "run_compare",
    "run_scan",
    "run_measures",
]

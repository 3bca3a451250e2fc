"""Run configuration: YAML recipes, flag overrides and domain-object builders.

Every time and frequency is scaled: frequencies in units of ``omega_p`` and
times in units of 1/``omega_p``.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
import typing
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np
import yaml

from pulsecontrol.dynamics.pulses import Normalization, PulseSchedule, ScheduleKind
from pulsecontrol.dynamics.trace import time_grid
from pulsecontrol.errors import ConfigError, PulseControlError
from pulsecontrol.oracle.fock import OracleConfig, Topology
from pulsecontrol.reservoir.coupling import CouplingFunction, CouplingShape, ModeSet, discretize
from pulsecontrol.scanners.tau_scanner import PulseCountRule, ScanMetric, ScanSpec


@dataclass(slots=True)
class CouplingSection:
    shape: str = CouplingShape.GAUSSIAN.value
    s: float = 5.0
    omega_p: float = 1.0
    gamma_p: float = 0.1


@dataclass(slots=True)
class DiscretizationSection:
    K: int = 1000
    support_halfwidth: float = 6.0


@dataclass(slots=True)
class ScheduleSection:
    """Pulse train; ``fill_horizon`` sets N = floor(t_max_scaled / tau_s_scaled)."""

    kind: str = ScheduleKind.UNIFORM.value
    N: int = 0
    tau_s_scaled: Optional[float] = None
    times: List[float] = field(default_factory=list)
    fill_horizon: bool = False


@dataclass(slots=True)
class GridSection:
    t_max_scaled: float = 30.0
    samples: int = 601


@dataclass(slots=True)
class OracleSection:
    enabled: bool = False
    fock_dim: int = 40
    heisenberg_J: float = 0.0
    omega0: float = 10.0
    leak_threshold: float = 1e-8
    max_dimension: int = 20_000


@dataclass(slots=True)
class ScanSection:
    tau_min: float = math.pi / 10.0
    tau_max: float = 3.0 * math.pi
    grid_points: int = 60
    metric: str = ScanMetric.TIME_AVERAGED_C.value
    horizon: float = 30.0
    n_rule: str = PulseCountRule.FILL_HORIZON.value
    n_fixed: int = 0
    samples: int = 601
    max_workers: int = 1
    refine: bool = False


@dataclass(slots=True)
class CompareSection:
    tolerance: float = 1e-6
    relative_floor: float = 1e-9


@dataclass(slots=True)
class OutputSection:
    """``path`` is the output directory; file names follow the command."""

    path: str = "results"
    format: str = "csv"


@dataclass(slots=True)
class ConsoleLogSection:
    level: str = "INFO"


@dataclass(slots=True)
class FileLogSection:
    level: str = "DEBUG"
    rotation: str = "1 week"
    retention: str = "90 days"


@dataclass(slots=True)
class LoggingSection:
    console: ConsoleLogSection = field(default_factory=ConsoleLogSection)
    file: FileLogSection = field(default_factory=FileLogSection)


@dataclass(slots=True)
class RunConfig:
    """One reproducible run. ``coupling2`` gives the second qubit its own
    reservoir in the NonCommon topology (defaults to ``coupling``)."""

    coupling: CouplingSection = field(default_factory=CouplingSection)
    coupling2: Optional[CouplingSection] = None
    discretization: DiscretizationSection = field(default_factory=DiscretizationSection)
    schedule: ScheduleSection = field(default_factory=ScheduleSection)
    topology: str = Topology.COMMON.value
    normalization: str = Normalization.PHYSICAL.value
    grid: GridSection = field(default_factory=GridSection)
    oracle: OracleSection = field(default_factory=OracleSection)
    scan: ScanSection = field(default_factory=ScanSection)
    compare: CompareSection = field(default_factory=CompareSection)
    output: OutputSection = field(default_factory=OutputSection)
    logging: LoggingSection = field(default_factory=LoggingSection)
    log_dir: str = "./logs"

    @property
    def topology_enum(self) -> Topology:
        return Topology(self.topology)

    @property
    def normalization_enum(self) -> Normalization:
        return Normalization(self.normalization)

    @property
    def output_dir(self) -> Path:
        return Path(self.output.path)

    def coupling_function(self, second: bool = False) -> CouplingFunction:
        section = self.coupling2 if second and self.coupling2 is not None else self.coupling
        return CouplingFunction(CouplingShape(section.shape), section.s, section.omega_p, section.gamma_p)

    def modes(self) -> ModeSet:
        return discretize(self.coupling_function(), self.discretization.K, self.discretization.support_halfwidth)

    def modes2(self) -> Optional[ModeSet]:
        """Second-qubit reservoir for NonCommon runs, ``None`` for Common ones."""
        if self.topology_enum is Topology.COMMON:
            return None
        return discretize(
            self.coupling_function(second=True), self.discretization.K, self.discretization.support_halfwidth
        )

    def pulse_schedule(self) -> PulseSchedule:
        sched = self.schedule
        if ScheduleKind(sched.kind) is ScheduleKind.EXPLICIT:
            return PulseSchedule.explicit(sched.times)
        if sched.fill_horizon:
            if sched.tau_s_scaled is None:
                raise ConfigError("schedule.tau_s_scaled: required when schedule.fill_horizon is true")
            return PulseSchedule.fill_horizon(sched.tau_s_scaled, self.grid.t_max_scaled)
        if sched.N == 0:
            return PulseSchedule.none()
        if sched.tau_s_scaled is None:
            raise ConfigError("schedule.tau_s_scaled: required when schedule.N > 0")
        return PulseSchedule.uniform(sched.N, sched.tau_s_scaled)

    def t_grid(self) -> np.ndarray:
        return time_grid(self.grid.t_max_scaled, self.grid.samples)

    def oracle_config(self) -> OracleConfig:
        """Oracle inputs; the mode set comes from ``discretization`` (K <= 3)."""
        topology = self.topology_enum
        second = None
        if topology is Topology.NON_COMMON and self.coupling2 is not None:
            second = self.modes2()
        return OracleConfig(
            modes=self.modes(),
            t_grid=self.t_grid(),
            schedule=self.pulse_schedule(),
            fock_dim=self.oracle.fock_dim,
            topology=topology,
            heisenberg_J=self.oracle.heisenberg_J,
            omega0=self.oracle.omega0,
            modes2=second,
            leak_threshold=self.oracle.leak_threshold,
            max_dimension=self.oracle.max_dimension,
        )

    def scan_spec(self) -> ScanSpec:
        scan = self.scan
        return ScanSpec(
            tau_range=(scan.tau_min, scan.tau_max),
            grid_points=scan.grid_points,
            metric=ScanMetric(scan.metric),
            horizon=scan.horizon,
            n_rule=PulseCountRule(scan.n_rule),
            n_fixed=scan.n_fixed,
            samples=scan.samples,
            max_workers=scan.max_workers,
            refine=scan.refine,
        )

    def logging_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self.logging)


_ENUM_KEYS = {
    "coupling.shape": CouplingShape,
    "coupling2.shape": CouplingShape,
    "schedule.kind": ScheduleKind,
    "topology": Topology,
    "normalization": Normalization,
    "scan.metric": ScanMetric,
    "scan.n_rule": PulseCountRule,
}
_OUTPUT_FORMATS = ("csv", "json")


def _unwrap_optional(hint: Any) -> Any:
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    if typing.get_origin(hint) is typing.Union and len(args) == 1:
        return args[0]
    return hint


def _coerce(value: Any, hint: Any, path: str) -> Any:
    optional = type(None) in typing.get_args(hint)
    hint = _unwrap_optional(hint)
    if value is None:
        if optional:
            return None
        raise ConfigError(f"{path}: value is required")
    if dataclasses.is_dataclass(hint):
        return _build_section(hint, value, path)
    if typing.get_origin(hint) in (list, List):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{path}: expected a list, got {type(value).__name__}")
        (item_hint,) = typing.get_args(hint)
        return [_coerce(item, item_hint, f"{path}[{i}]") for i, item in enumerate(value)]
    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected true/false, got {value!r}")
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return int(value)
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if hint is str:
        if not isinstance(value, (str, int, float)) or isinstance(value, bool):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return str(value)
    return value


def _build_section(cls: type, data: Any, path: str) -> Any:
    if not isinstance(data, Mapping):
        where = path or "<root>"
        raise ConfigError(f"{where}: expected a mapping, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        prefix = f"{path}." if path else ""
        raise ConfigError(f"Unknown configuration key(s): {', '.join(prefix + str(k) for k in unknown)}")
    kwargs = {}
    for name, value in data.items():
        key_path = f"{path}.{name}" if path else name
        kwargs[name] = _coerce(value, hints[name], key_path)
    return cls(**kwargs)


def _validate(config: RunConfig) -> None:
    for key, enum_cls in _ENUM_KEYS.items():
        section, _, attr = key.rpartition(".")
        holder = getattr(config, section) if section else config
        if holder is None:
            continue
        value = getattr(holder, attr)
        try:
            enum_cls(value)
        except ValueError:
            choices = ", ".join(member.value for member in enum_cls)
            raise ConfigError(f"{key}: {value!r} is not one of {choices}") from None
    if config.output.format not in _OUTPUT_FORMATS:
        raise ConfigError(f"output.format: {config.output.format!r} is not one of {', '.join(_OUTPUT_FORMATS)}")
    if config.grid.samples < 1:
        raise ConfigError(f"grid.samples: must be >= 1, got {config.grid.samples}")
    if config.grid.t_max_scaled < 0.0:
        raise ConfigError(f"grid.t_max_scaled: must be >= 0, got {config.grid.t_max_scaled}")
    if config.grid.t_max_scaled == 0.0 and config.grid.samples > 1:
        raise ConfigError(
            f"grid.t_max_scaled: must be > 0 when grid.samples is {config.grid.samples}"
        )
    if not config.compare.tolerance > 0.0:
        raise ConfigError(f"compare.tolerance: must be positive, got {config.compare.tolerance}")

    # Range checks owned by the domain objects, reported against their section.
    builders = (
        ("coupling", lambda: config.coupling_function()),
        ("coupling2", lambda: config.coupling_function(second=True)),
        ("schedule", config.pulse_schedule),
        ("scan", config.scan_spec),
    )
    for section, build in builders:
        try:
            build()
        except ConfigError:
            raise
        except PulseControlError as exc:
            raise ConfigError(f"{section}: {exc}") from exc


def _parse_override(item: str) -> tuple:
    key, sep, raw = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"Override {item!r} must look like key.path=value")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{key}: cannot parse override value {raw!r}: {exc}") from exc
    return key, value


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """Apply ``key.path=value`` assignments to the raw configuration mapping."""
    for item in overrides:
        key, value = _parse_override(item)
        parts = key.split(".")
        node = data
        for depth, part in enumerate(parts[:-1]):
            child = node.get(part)
            if child is None:
                child = node[part] = {}
            elif not isinstance(child, dict):
                raise ConfigError(f"{'.'.join(parts[: depth + 1])}: cannot set a sub-key on a scalar")
            node = child
        node[parts[-1]] = value
    return data


def load_run_config(path: Optional[Path], overrides: Sequence[str] = ()) -> RunConfig:
    """Read, override and validate a run configuration.

    ``path`` may be ``None`` to start from defaults.

    Raises:
        ConfigError: On unreadable or malformed YAML, unknown keys (reported by
            dotted path), wrong types or out-of-range values.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"Cannot read configuration {path}: {exc}") from exc
        try:
            loaded = yaml.safe_load(content)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            where = f" line {mark.line + 1}, column {mark.column + 1}" if mark is not None else ""
            raise ConfigError(f"{path}:{where} invalid YAML: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        data = loaded
    data = apply_overrides(data, overrides)
    try:
        config = _build_section(RunConfig, data, "")
        _validate(config)
    except ConfigError as exc:
        if path is not None:
            raise ConfigError(f"{path}: {exc}") from exc
        raise
    return config


__all__ = [
    "RunConfig",
    "CouplingSection",
    "DiscretizationSection",
    "ScheduleSection",
    "GridSection",
    "OracleSection",
    "ScanSection",
    "CompareSection",
    "OutputSection",
    "LoggingSection",
    "apply_overrides",
    "load_run_config",
]

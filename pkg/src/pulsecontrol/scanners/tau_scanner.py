"""Pulse-interval scanner for synchronized pulse control."""
from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from scipy.optimize import minimize_scalar

from pulsecontrol.dynamics.pulses import PulseSchedule, alpha_power
from pulsecontrol.dynamics.trace import time_grid
from pulsecontrol.errors import DomainError, NoBracket
from pulsecontrol.logging_utils import log_context
from pulsecontrol.reservoir.coupling import ModeSet

REFINE_WIDTH = 1e-4
SCAN_COLUMNS = ("tau_s_scaled", "metric_value")

MetricFn = Callable[[float], float]


class ScanMetric(str, Enum):
    """Scalar figures of merit for a pulse interval."""

    TIME_AVERAGED_C = "TimeAveragedC"
    MIN_C = "MinC"
    C_AT_HORIZON = "CAtHorizon"


class PulseCountRule(str, Enum):
    """How many pulses each scanned schedule carries."""

    FIXED = "Fixed"
    FILL_HORIZON = "FillHorizon"


@dataclass(slots=True)
class ScanSpec:
    """Uniform grid over tau_s in scaled time, plus the metric definition."""

    tau_range: Tuple[float, float]
    grid_points: int = 50
    metric: ScanMetric = ScanMetric.TIME_AVERAGED_C
    horizon: float = 30.0
    n_rule: PulseCountRule = PulseCountRule.FILL_HORIZON
    n_fixed: int = 0
    samples: int = 601
    max_workers: int = 1
    refine: bool = False

    def __post_init__(self) -> None:
        self.metric = ScanMetric(self.metric)
        self.n_rule = PulseCountRule(self.n_rule)
        lo, hi = (float(v) for v in self.tau_range)
        if not (0.0 < lo < hi) or not math.isfinite(hi):
            raise DomainError(f"tau_range must satisfy 0 < lo < hi, got ({lo}, {hi})")
        self.tau_range = (lo, hi)
        if int(self.grid_points) != self.grid_points or self.grid_points < 2:
            raise DomainError(f"grid_points must be an integer >= 2, got {self.grid_points}")
        if not self.horizon > 0.0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        if int(self.n_fixed) != self.n_fixed or self.n_fixed < 0:
            raise DomainError(f"n_fixed must be a non-negative integer, got {self.n_fixed}")
        if int(self.samples) != self.samples or self.samples < 2:
            raise DomainError(f"samples must be an integer >= 2, got {self.samples}")
        if int(self.max_workers) != self.max_workers or self.max_workers < 1:
            raise DomainError(f"max_workers must be a positive integer, got {self.max_workers}")

    def taus(self) -> np.ndarray:
        lo, hi = self.tau_range
        return np.linspace(lo, hi, int(self.grid_points))

    def schedule_for(self, tau_s: float) -> PulseSchedule:
        if self.n_rule is PulseCountRule.FILL_HORIZON:
            return PulseSchedule.fill_horizon(tau_s, self.horizon)
        return PulseSchedule.uniform(self.n_fixed, tau_s)


@dataclass(slots=True)
class ScanResult:
    """Metric values on the tau grid and the best interval found."""

    rows: List[Tuple[float, float]] = field(default_factory=list)
    best_tau: float = float("nan")
    best_value: float = float("nan")
    refined: bool = False

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=list(SCAN_COLUMNS))

    def summary_line(self) -> str:
        return f"best_tau={self.best_tau:.12g},best_value={self.best_value:.12g}"


class TauScanner:
    """Evaluates a scan metric over pulse intervals for one reservoir setup.

    With ``modes2`` the qubits see separate reservoirs; ``metric_fn``
    replaces the dynamics-based metric entirely (used for synthetic checks).
    """

    def __init__(
        self,
        modes: ModeSet,
        modes2: Optional[ModeSet] = None,
        metric_fn: Optional[MetricFn] = None,
    ) -> None:
        self.modes = modes
        self.modes2 = modes2
        self.metric_fn = metric_fn

    def evaluate(self, spec: ScanSpec, tau_s: float) -> float:
        """Metric value of the uniform train with interval ``tau_s``, clipped to [0, 1]."""
        if self.metric_fn is not None:
            return float(self.metric_fn(tau_s))
        sched = spec.schedule_for(tau_s)
        if spec.metric is ScanMetric.C_AT_HORIZON:
            times = np.array([float(spec.horizon)])
        else:
            times = time_grid(spec.horizon, spec.samples)
        if self.modes2 is None:
            gamma = 2.0 * alpha_power(self.modes, times, sched)
        else:
            gamma = 0.5 * (alpha_power(self.modes, times, sched) + alpha_power(self.modes2, times, sched))
        values = np.exp(-np.maximum(gamma, 0.0))
        if spec.metric is ScanMetric.MIN_C:
            value = float(values.min())
        elif spec.metric is ScanMetric.TIME_AVERAGED_C:
            value = float(values.mean())
        else:
            value = float(values[-1])
        return min(max(value, 0.0), 1.0)

    @log_context(component="scan")
    def scan(self, spec: ScanSpec) -> ScanResult:
        """Grid scan over ``spec.taus()``, refined around the best point when ``spec.refine`` is set."""
        taus = spec.taus()
        if spec.max_workers > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=spec.max_workers) as executor:
                values = list(executor.map(lambda tau: self.evaluate(spec, float(tau)), taus))
        else:
            values = [self.evaluate(spec, float(tau)) for tau in taus]

        # argmax keeps the first maximum, i.e. the smallest tau on ties.
        best = int(np.argmax(values))
        result = ScanResult(
            rows=[(float(tau), float(v)) for tau, v in zip(taus, values)],
            best_tau=float(taus[best]),
            best_value=float(values[best]),
        )
        logger.info(
            "Grid scan complete | metric={metric} points={n} best_tau={tau:.6g} best_value={value:.6g}",
            metric=spec.metric.value,
            n=len(taus),
            tau=result.best_tau,
            value=result.best_value,
        )

        if spec.refine:
            if 0 < best < len(taus) - 1:
                try:
                    tau_star, value = self.refine(spec, (float(taus[best - 1]), float(taus[best + 1])))
                except NoBracket as exc:
                    logger.warning("Skipping refinement | reason={reason}", reason=str(exc))
                else:
                    if value > result.best_value:
                        result.best_tau, result.best_value = tau_star, value
                    result.refined = True
            else:
                logger.warning(
                    "Skipping refinement | reason=grid maximum on the range edge tau={tau:.6g}",
                    tau=result.best_tau,
                )
        return result

    def refine(self, spec: ScanSpec, bracket: Sequence[float]) -> Tuple[float, float]:
        """Golden-section search for the metric peak inside ``bracket``.

        Raises:
            NoBracket: Unless the midpoint value exceeds both endpoint values.
        """
        lo, hi = (float(v) for v in bracket)
        if not (0.0 < lo < hi):
            raise NoBracket(f"Bracket must satisfy 0 < lo < hi, got ({lo}, {hi})")
        mid = 0.5 * (lo + hi)
        f_lo, f_mid, f_hi = (self.evaluate(spec, x) for x in (lo, mid, hi))
        if not (f_mid > f_lo and f_mid > f_hi):
            raise NoBracket(
                f"Bracket ({lo:.6g}, {hi:.6g}) does not enclose a maximum: "
                f"f(lo)={f_lo:.6g} f(mid)={f_mid:.6g} f(hi)={f_hi:.6g}"
            )
        # Golden's xtol is relative to |x|; this bounds the final bracket width.
        outcome = minimize_scalar(
            lambda x: -self.evaluate(spec, float(x)),
            bracket=(lo, mid, hi),
            method="golden",
            options={"xtol": REFINE_WIDTH / (2.0 * hi)},
        )
        tau_star, value = float(outcome.x), float(-outcome.fun)
        if value < f_mid:
            tau_star, value = mid, f_mid
        logger.info(
            "Refined pulse interval | bracket=({lo:.6g}, {hi:.6g}) tau_star={tau:.10g} value={value:.10g}",
            lo=lo,
            hi=hi,
            tau=tau_star,
            value=value,
            component="scan",
        )
        return tau_star, value


def evaluate_metric(modes: ModeSet, spec: ScanSpec, tau_s: float, modes2: Optional[ModeSet] = None) -> float:
    """Metric of a single pulse interval.

    Args:
        modes: Reservoir modes of the first qubit (or of the shared reservoir).
        spec: Scan definition supplying the metric, horizon and pulse count rule.
        tau_s: Pulse interval in scaled time.
        modes2: Separate reservoir of the second qubit, if any.

    Returns:
        The metric value clipped to [0, 1].
    """
    return TauScanner(modes, modes2).evaluate(spec, tau_s)


def scan_tau(modes: ModeSet, spec: ScanSpec, modes2: Optional[ModeSet] = None) -> ScanResult:
    """Evaluate ``spec.metric`` on the uniform tau grid (physical normalization)."""
    return TauScanner(modes, modes2).scan(spec)


def refine_peak(
    modes: ModeSet,
    spec: ScanSpec,
    bracket: Sequence[float],
    metric_fn: Optional[MetricFn] = None,
    modes2: Optional[ModeSet] = None,
) -> Tuple[float, float]:
    """Return (tau_star, value) of the metric peak inside ``bracket``."""
    return TauScanner(modes, modes2, metric_fn).refine(spec, bracket)


__all__ = [
    "ScanMetric",
    "PulseCountRule",
    "ScanSpec",
    "ScanResult",
    "TauScanner",
    "evaluate_metric",
    "scan_tau",
    "refine_peak",
    "SCAN_COLUMNS",
]

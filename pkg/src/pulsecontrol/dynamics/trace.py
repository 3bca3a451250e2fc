"""Concurrence, entropy and purity traces of the dephasing Bell pair."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from pulsecontrol.analytics.measures import entropy_from_concurrence
from pulsecontrol.dynamics.pulses import Normalization, PulseSchedule, alpha_power
from pulsecontrol.errors import DomainError
from pulsecontrol.reservoir.coupling import ModeSet

TRACE_COLUMNS = ("t_scaled", "gamma", "c_physical", "c_literal", "entropy_log4", "purity")


@dataclass(frozen=True, slots=True)
class TraceSample:
    t: float
    gamma: float
    c_physical: float
    c_literal: float
    entropy: float
    purity: float


@dataclass(slots=True)
class Trace:
    """Time-ordered samples of the analytic dephasing dynamics.

    ``normalization`` records which concurrence column the run was asked to
    report; both columns are always present.
    """

    samples: List[TraceSample] = field(default_factory=list)
    normalization: Normalization = Normalization.PHYSICAL

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=float)

    @property
    def c_physical(self) -> np.ndarray:
        return np.array([s.c_physical for s in self.samples], dtype=float)

    @property
    def c_literal(self) -> np.ndarray:
        return np.array([s.c_literal for s in self.samples], dtype=float)

    def reported(self) -> np.ndarray:
        """Concurrence column selected by ``normalization``."""
        if self.normalization is Normalization.PAPER_LITERAL:
            return self.c_literal
        return self.c_physical

    def summary(self) -> Dict[str, float]:
        values = self.reported()
        if values.size == 0:
            return {"final_c": float("nan"), "min_c": float("nan"), "mean_c": float("nan")}
        return {
            "final_c": float(values[-1]),
            "min_c": float(values.min()),
            "mean_c": float(values.mean()),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t_scaled": [s.t for s in self.samples],
                "gamma": [s.gamma for s in self.samples],
                "c_physical": [s.c_physical for s in self.samples],
                "c_literal": [s.c_literal for s in self.samples],
                "entropy_log4": [s.entropy for s in self.samples],
                "purity": [s.purity for s in self.samples],
            },
            columns=list(TRACE_COLUMNS),
        )

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, normalization: Normalization = Normalization.PHYSICAL) -> "Trace":
        missing = [col for col in TRACE_COLUMNS if col not in frame.columns]
        if missing:
            raise DomainError(f"Trace table is missing columns {missing}")
        samples = [
            TraceSample(
                t=float(row.t_scaled),
                gamma=float(row.gamma),
                c_physical=float(row.c_physical),
                c_literal=float(row.c_literal),
                entropy=float(row.entropy_log4),
                purity=float(row.purity),
            )
            for row in frame.itertuples(index=False)
        ]
        return cls(samples=samples, normalization=Normalization(normalization))


def time_grid(t_max: float, samples: int) -> np.ndarray:
    """Uniform grid of ``samples`` points on [0, t_max] in scaled time."""
    if int(samples) != samples or samples < 1:
        raise DomainError(f"Sample count must be a positive integer, got {samples}")
    if t_max < 0.0:
        raise DomainError(f"Grid end must be non-negative, got {t_max}")
    if samples == 1:
        return np.array([0.0])
    return np.linspace(0.0, float(t_max), int(samples))


def validate_grid(t_grid: Sequence[float]) -> np.ndarray:
    times = np.asarray(t_grid, dtype=float).reshape(-1)
    if times.size == 0:
        raise DomainError("Time grid is empty")
    if not np.all(np.isfinite(times)) or times[0] < 0.0:
        raise DomainError("Time grid must hold finite non-negative times")
    if times.size > 1 and np.any(np.diff(times) <= 0.0):
        raise DomainError("Time grid must be strictly ascending")
    return times


def trace(
    modes: ModeSet,
    t_grid: Sequence[float],
    sched: PulseSchedule,
    normalization: Normalization = Normalization.PHYSICAL,
    modes2: Optional[ModeSet] = None,
) -> Trace:
    """Evaluate the closed-form dynamics on ``t_grid``.

    With ``modes2`` each qubit sees its own reservoir and the exponent is
    1/2 sum |alpha_1|^2 + 1/2 sum |alpha_2|^2; otherwise both qubits share
    ``modes`` and the exponent is 2 sum |alpha|^2.
    """
    times = validate_grid(t_grid)
    if modes2 is None:
        gamma = 2.0 * alpha_power(modes, times, sched)
    else:
        gamma = 0.5 * alpha_power(modes, times, sched) + 0.5 * alpha_power(modes2, times, sched)
    gamma = np.maximum(gamma, 0.0)
    c_physical = np.exp(-gamma)
    samples = [
        TraceSample(
            t=float(t),
            gamma=float(g),
            c_physical=float(c),
            c_literal=0.5 * float(c),
            entropy=entropy_from_concurrence(float(c)),
            purity=0.5 * (1.0 + float(c) ** 2),
        )
        for t, g, c in zip(times, gamma, c_physical)
    ]
    return Trace(samples=samples, normalization=Normalization(normalization))


__all__ = ["TRACE_COLUMNS", "TraceSample", "Trace", "time_grid", "validate_grid", "trace"]

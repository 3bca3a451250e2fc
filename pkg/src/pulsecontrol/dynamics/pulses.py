"""Closed-form dephasing of the Bell pair under trains of ideal pi pulses.

All times and frequencies are scaled: t~ = omega_p t and omega~ = omega/omega_p.
Only the products omega t enter, so any consistent unit system works.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from pulsecontrol.errors import DomainError, ShapeUnsupported
from pulsecontrol.reservoir.coupling import CouplingFunction, CouplingShape, ModeSet

FloatOrArray = Union[float, np.ndarray]

# Relative slack when deciding whether a pulse at t_j = t has been applied.
PULSE_TIME_RTOL = 1e-9
# Largest (pulses x modes) partial-sum table built for grid evaluation.
MAX_SERIES_CELLS = 4_000_000
# Time samples evaluated per vectorized block.
BLOCK_SIZE = 256


class ScheduleKind(str, Enum):
    """Pulse-train layouts."""

    UNIFORM = "Uniform"
    EXPLICIT = "Explicit"


class Normalization(str, Enum):
    """Concurrence prefactor convention.

    PHYSICAL gives C(0) = 1 (the Wootters value of the Bell state); PAPER_LITERAL
    carries a constant 1/2 prefactor so that C(0) = 1/2.
    """

    PHYSICAL = "Physical"
    PAPER_LITERAL = "PaperLiteral"


@dataclass(frozen=True, slots=True, eq=False)
class PulseSchedule:
    """Ideal instantaneous pi pulses applied to both qubits at once.

    Uniform schedules place ``count`` pulses at tau_s, 2 tau_s, ..., count tau_s.
    Explicit schedules use the strictly ascending positive ``times``.
    """

    kind: ScheduleKind = ScheduleKind.UNIFORM
    count: int = 0
    tau_s: float = math.inf
    times: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ScheduleKind(self.kind))
        if self.kind is ScheduleKind.UNIFORM:
            if int(self.count) != self.count or self.count < 0:
                raise DomainError(f"Pulse count must be a non-negative integer, got {self.count}")
            if not self.tau_s > 0.0:
                raise DomainError(f"Pulse interval must be positive, got {self.tau_s}")
            if self.count > 0 and not math.isfinite(self.tau_s):
                raise DomainError("A non-empty uniform schedule needs a finite pulse interval")
            object.__setattr__(self, "count", int(self.count))
            object.__setattr__(self, "times", ())
        else:
            times = tuple(float(t) for t in self.times)
            if any(t <= 0.0 or not math.isfinite(t) for t in times):
                raise DomainError("Explicit pulse times must be positive and finite")
            if any(b <= a for a, b in zip(times, times[1:])):
                raise DomainError("Explicit pulse times must be strictly ascending")
            object.__setattr__(self, "times", times)
            object.__setattr__(self, "count", len(times))

    @classmethod
    def none(cls) -> "PulseSchedule":
        """Free evolution."""
        return cls(ScheduleKind.UNIFORM, 0)

    @classmethod
    def uniform(cls, count: int, tau_s: float) -> "PulseSchedule":
        return cls(ScheduleKind.UNIFORM, count, tau_s)

    @classmethod
    def explicit(cls, times: Iterable[float]) -> "PulseSchedule":
        return cls(ScheduleKind.EXPLICIT, times=tuple(times))

    @classmethod
    def fill_horizon(cls, tau_s: float, horizon: float) -> "PulseSchedule":
        """Uniform train with N = floor(horizon / tau_s) pulses."""
        if not tau_s > 0.0:
            raise DomainError(f"Pulse interval must be positive, got {tau_s}")
        count = int(math.floor(horizon / tau_s * (1.0 + PULSE_TIME_RTOL)))
        return cls(ScheduleKind.UNIFORM, max(count, 0), tau_s)

    @property
    def is_free(self) -> bool:
        return self.count == 0

    def pulse_times(self) -> np.ndarray:
        if self.kind is ScheduleKind.EXPLICIT:
            return np.asarray(self.times, dtype=float)
        return self.tau_s * np.arange(1, self.count + 1, dtype=float)

    def pulses_applied(self, t: FloatOrArray) -> Union[int, np.ndarray]:
        """Number of pulses with t_j <= t (N_eff); vectorized over ``t``."""
        t_arr = np.asarray(t, dtype=float)
        if self.count == 0:
            applied = np.zeros(t_arr.shape, dtype=int)
        elif self.kind is ScheduleKind.UNIFORM:
            raw = np.floor(t_arr / self.tau_s * (1.0 + PULSE_TIME_RTOL) + PULSE_TIME_RTOL)
            applied = np.clip(raw, 0, self.count).astype(int)
        else:
            edges = np.asarray(self.times)
            applied = np.searchsorted(edges, t_arr * (1.0 + PULSE_TIME_RTOL) + PULSE_TIME_RTOL, side="right")
        if np.ndim(applied) == 0:
            return int(applied)
        return applied

    def truncated(self, t: float) -> "PulseSchedule":
        """Schedule restricted to the pulses already applied at time ``t``."""
        applied = self.pulses_applied(t)
        if self.kind is ScheduleKind.UNIFORM:
            return PulseSchedule(ScheduleKind.UNIFORM, applied, self.tau_s)
        return PulseSchedule.explicit(self.times[:applied])

    def describe(self) -> str:
        if self.count == 0:
            return "free"
        if self.kind is ScheduleKind.UNIFORM:
            return f"uniform N={self.count} tau_s={self.tau_s:.6g}"
        return f"explicit N={self.count}"


def _check_time(t: float) -> None:
    if t < 0.0 or math.isnan(t):
        raise DomainError(f"Time must be non-negative, got {t}")


def alpha_k(
    h_k_sq: FloatOrArray,
    omega_k: FloatOrArray,
    t: float,
    sched: PulseSchedule,
) -> Union[complex, np.ndarray]:
    """Displacement amplitude of mode k after the pulses applied up to ``t``.

    For a uniform train with N_eff = min(N, floor(t / tau_s)) pulses and
    u = t - N_eff tau_s:

        alpha_k = h_k e^{-i w u} [ (1 - e^{i w u})
                  + sum_{m=1}^{N_eff} (-1)^m e^{-i m w tau_s} (1 - e^{i w tau_s}) ]

    Explicit schedules use the equivalent sign-segment sum
    (-1)^{n+1} h_k e^{-i w t} sum_j (-1)^j (e^{i w b_j} - e^{i w a_j}) over the
    free intervals [a_j, b_j] between pulses.

    Vectorized over ``h_k_sq`` / ``omega_k``.

    Raises:
        DomainError: If ``t`` is negative.
    """
    _check_time(t)
    h = np.sqrt(np.asarray(h_k_sq, dtype=float))
    omega = np.asarray(omega_k, dtype=float)
    applied = int(sched.pulses_applied(t))

    if sched.kind is ScheduleKind.UNIFORM:
        tau = sched.tau_s
        u = t - applied * tau if applied else t
        bracket = 1.0 - np.exp(1j * omega * u)
        if applied:
            m = np.arange(1, applied + 1, dtype=float)
            phases = np.exp(-1j * np.multiply.outer(omega, m) * tau)
            signs = np.where(m % 2 == 0, 1.0, -1.0)
            series = np.sum(signs * phases, axis=-1)
            bracket = bracket + series * (1.0 - np.exp(1j * omega * tau))
        result = h * np.exp(-1j * omega * u) * bracket
    else:
        edges = np.concatenate(([0.0], np.asarray(sched.times[:applied], dtype=float), [t]))
        signs = np.where(np.arange(applied + 1) % 2 == 0, 1.0, -1.0)
        starts = np.exp(1j * np.multiply.outer(omega, edges[:-1]))
        ends = np.exp(1j * np.multiply.outer(omega, edges[1:]))
        segment_sum = np.sum(signs * (ends - starts), axis=-1)
        parity = 1.0 if applied % 2 == 1 else -1.0
        result = parity * h * np.exp(-1j * omega * t) * segment_sum

    if np.ndim(result) == 0:
        return complex(result)
    return result


def decoherence_exponent(modes: ModeSet, t: float, sched: PulseSchedule) -> float:
    """Gamma(t) = 2 sum_k |alpha_k(t)|^2."""
    alphas = alpha_k(modes.h_sq, modes.omegas, t, sched)
    return float(2.0 * np.sum(np.abs(alphas) ** 2))


def _uniform_exponents(modes: ModeSet, times: np.ndarray, sched: PulseSchedule) -> Optional[np.ndarray]:
    """Sum_k |alpha_k(t)|^2 on a grid through a cumulative pulse-series table."""
    applied = np.asarray(sched.pulses_applied(times), dtype=int)
    n_max = int(applied.max()) if applied.size else 0
    if (n_max + 1) * modes.count > MAX_SERIES_CELLS:
        return None
    omega = modes.omegas
    tau = sched.tau_s
    table = np.zeros((n_max + 1, modes.count), dtype=complex)
    if n_max:
        m = np.arange(1, n_max + 1, dtype=float)
        signs = np.where(m % 2 == 0, 1.0, -1.0)[:, None]
        table[1:] = np.cumsum(signs * np.exp(-1j * np.outer(m, omega) * tau), axis=0)
        step = 1.0 - np.exp(1j * omega * tau)
    else:
        step = np.zeros_like(omega, dtype=complex)

    totals = np.empty(times.size, dtype=float)
    for start in range(0, times.size, BLOCK_SIZE):
        block = slice(start, start + BLOCK_SIZE)
        n_block = applied[block]
        u = times[block] - n_block * (tau if n_max else 0.0)
        phase = np.outer(u, omega)
        bracket = (1.0 - np.exp(1j * phase)) + table[n_block] * step
        # |e^{-i w u}| = 1, so the prefactor phase drops out of the magnitude.
        totals[block] = np.abs(bracket) ** 2 @ modes.h_sq
    return totals


def _explicit_exponents(modes: ModeSet, times: np.ndarray, sched: PulseSchedule) -> np.ndarray:
    """Sum_k |alpha_k(t)|^2 through prefix sums over the free intervals."""
    omega = modes.omegas
    pulse_times = np.asarray(sched.times, dtype=float)
    edges = np.concatenate(([0.0], pulse_times))
    signs = np.where(np.arange(pulse_times.size) % 2 == 0, 1.0, -1.0)[:, None]
    closed = signs * (np.exp(1j * np.outer(pulse_times, omega)) - np.exp(1j * np.outer(edges[:-1], omega)))
    prefix = np.zeros((pulse_times.size + 1, modes.count), dtype=complex)
    prefix[1:] = np.cumsum(closed, axis=0)
    applied = np.asarray(sched.pulses_applied(times), dtype=int)

    totals = np.empty(times.size, dtype=float)
    for start in range(0, times.size, BLOCK_SIZE):
        block = slice(start, start + BLOCK_SIZE)
        n_block = applied[block]
        sign = np.where(n_block % 2 == 0, 1.0, -1.0)[:, None]
        last = edges[n_block]
        open_segment = sign * (np.exp(1j * np.outer(times[block], omega)) - np.exp(1j * np.outer(last, omega)))
        total = prefix[n_block] + open_segment
        totals[block] = np.abs(total) ** 2 @ modes.h_sq
    return totals


def alpha_power(modes: ModeSet, t_grid: Sequence[float], sched: PulseSchedule) -> np.ndarray:
    """Sum_k |alpha_k(t)|^2 for every t in ``t_grid`` (vectorized)."""
    times = np.asarray(t_grid, dtype=float).reshape(-1)
    if times.size and (np.min(times) < 0.0 or np.any(np.isnan(times))):
        raise DomainError("Time grid must be non-negative")
    if sched.kind is ScheduleKind.EXPLICIT and sched.count:
        return _explicit_exponents(modes, times, sched)
    totals = _uniform_exponents(modes, times, sched)
    if totals is None:
        totals = np.array([0.5 * decoherence_exponent(modes, float(t), sched) for t in times])
    return totals


def decoherence_exponents(modes: ModeSet, t_grid: Sequence[float], sched: PulseSchedule) -> np.ndarray:
    """Gamma(t) on a grid; equal to :func:`decoherence_exponent` pointwise."""
    return 2.0 * alpha_power(modes, t_grid, sched)


def _prefactor(normalization: Normalization) -> float:
    return 0.5 if Normalization(normalization) is Normalization.PAPER_LITERAL else 1.0


def concurrence_common(
    modes: ModeSet,
    t: float,
    sched: PulseSchedule,
    normalization: Normalization = Normalization.PHYSICAL,
) -> float:
    """Concurrence with both qubits in one reservoir: exp(-Gamma(t)), times 1/2 if literal."""
    return _prefactor(normalization) * math.exp(-decoherence_exponent(modes, t, sched))


def concurrence_noncommon(
    modes1: ModeSet,
    modes2: ModeSet,
    t: float,
    sched: PulseSchedule,
    normalization: Normalization = Normalization.PHYSICAL,
) -> float:
    """Concurrence with one reservoir per qubit.

    prod_n exp(-1/2 sum_k |alpha_{k_n}(t)|^2), times 1/2 if literal.
    """
    exponent = 0.0
    for modes in (modes1, modes2):
        alphas = alpha_k(modes.h_sq, modes.omegas, t, sched)
        exponent += 0.5 * float(np.sum(np.abs(alphas) ** 2))
    return _prefactor(normalization) * math.exp(-exponent)


def free_decay_closed_form(cf: CouplingFunction, t: FloatOrArray) -> FloatOrArray:
    """Continuum free-decay exponent for a Gaussian coupling.

    Gamma(t~) = 4 s (1 - cos(t~) exp(-(gamma_p/omega_p)^2 t~^2 / 4)), valid when
    the Gaussian's negative-frequency tail is negligible (gamma_p << omega_p).

    Raises:
        ShapeUnsupported: For non-Gaussian coupling functions.
    """
    if cf.shape is not CouplingShape.GAUSSIAN:
        raise ShapeUnsupported(f"Closed-form free decay is only available for Gaussian coupling, not {cf.shape.value}")
    t_arr = np.asarray(t, dtype=float)
    width = cf.scaled_width
    value = 4.0 * cf.s * (1.0 - np.cos(t_arr) * np.exp(-(width**2) * t_arr**2 / 4.0))
    if np.ndim(value) == 0:
        return float(value)
    return value


__all__ = [
    "ScheduleKind",
    "Normalization",
    "PulseSchedule",
    "alpha_k",
    "alpha_power",
    "decoherence_exponent",
    "decoherence_exponents",
    "concurrence_common",
    "concurrence_noncommon",
    "free_decay_closed_form",
]

"""Parametric coupling functions and their discretization into reservoir modes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger
from scipy.special import erf

from pulsecontrol.errors import BadSupport, DomainError

FloatOrArray = Union[float, np.ndarray]

DEFAULT_MODE_COUNT = 1000
DEFAULT_SUPPORT_HALFWIDTH = 6.0
# Lower frequency cutoff, relative to omega_p.
FREQUENCY_FLOOR = 1e-9
MASS_TOLERANCE = 1e-6
SUPPORT_EDGE_TOL = 1e-12


class CouplingShape(str, Enum):
    """Supported spectral shapes of the qubit-reservoir coupling."""

    GAUSSIAN = "Gaussian"
    LORENTZIAN = "Lorentzian"
    SEMI_ELLIPTIC = "SemiElliptic"


@dataclass(frozen=True, slots=True)
class CouplingFunction:
    """Coupling function h(omega) normalized so that its integral equals ``s``.

    ``s`` is the total (dimensionless) coupling strength, ``omega_p`` the
    center frequency and ``gamma_p`` the width, both in rad per unit time.
    """

    shape: CouplingShape
    s: float
    omega_p: float = 1.0
    gamma_p: float = 0.1

    def __post_init__(self) -> None:
        object.__setattr__(self, "shape", CouplingShape(self.shape))
        for name in ("s", "omega_p", "gamma_p"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise DomainError(f"Coupling parameter {name} must be a positive finite number, got {value}")
        if self.shape is CouplingShape.SEMI_ELLIPTIC and self.omega_p - self.gamma_p < 0.0:
            raise BadSupport(
                f"Semi-elliptic support [{self.omega_p - self.gamma_p}, {self.omega_p + self.gamma_p}] "
                "reaches negative frequencies"
            )

    @property
    def scaled_width(self) -> float:
        """gamma_p / omega_p."""
        return self.gamma_p / self.omega_p

    def evaluate(self, omega: FloatOrArray) -> FloatOrArray:
        """Evaluate h(omega); vectorized over ``omega``."""
        x = (np.asarray(omega, dtype=float) - self.omega_p) / self.gamma_p
        if self.shape is CouplingShape.GAUSSIAN:
            values = self.s / (math.sqrt(math.pi) * self.gamma_p) * np.exp(-(x**2))
        elif self.shape is CouplingShape.LORENTZIAN:
            values = self.s / (math.pi * self.gamma_p) / (x**2 + 1.0)
        else:
            # Rounding in x must not leave a sliver of mass on the support edge.
            inside = np.where(np.abs(x) >= 1.0 - SUPPORT_EDGE_TOL, 0.0, 1.0 - x**2)
            values = 2.0 * self.s / (math.pi * self.gamma_p) * np.sqrt(inside)
        if np.ndim(values) == 0:
            return float(values)
        return values

    def mass_between(self, lo: float, hi: float) -> float:
        """Closed-form integral of h(omega) over [lo, hi]."""
        a = (lo - self.omega_p) / self.gamma_p
        b = (hi - self.omega_p) / self.gamma_p
        if self.shape is CouplingShape.GAUSSIAN:
            return float(self.s * 0.5 * (erf(b) - erf(a)))
        if self.shape is CouplingShape.LORENTZIAN:
            return float(self.s / math.pi * (math.atan(b) - math.atan(a)))

        def _semi(u: float) -> float:
            u = min(max(u, -1.0), 1.0)
            return (u * math.sqrt(1.0 - u * u) + math.asin(u)) / math.pi

        return float(self.s * (_semi(b) - _semi(a)))

    def total_mass(self) -> float:
        """Integral over the untruncated support, equal to ``s`` by construction."""
        return self.s

    def support(self, halfwidth_in_gammas: float = DEFAULT_SUPPORT_HALFWIDTH) -> Tuple[float, float]:
        """Truncated discretization window, before clipping at the frequency floor."""
        if self.shape is CouplingShape.SEMI_ELLIPTIC:
            halfwidth_in_gammas = min(halfwidth_in_gammas, 1.0)
        return (
            self.omega_p - halfwidth_in_gammas * self.gamma_p,
            self.omega_p + halfwidth_in_gammas * self.gamma_p,
        )


def evaluate(cf: CouplingFunction, omega: FloatOrArray) -> FloatOrArray:
    """Module-level alias of :meth:`CouplingFunction.evaluate`."""
    return cf.evaluate(omega)


@dataclass(frozen=True, slots=True, eq=False)
class ModeSet:
    """Discrete reservoir: mode frequencies and squared couplings.

    Frequencies are stored in units of ``omega_p`` so that every dynamics
    routine works in scaled time t~ = omega_p t. ``h_sq`` is dimensionless.
    """

    omegas: np.ndarray
    h_sq: np.ndarray
    omega_p: float = 1.0
    truncated_mass: float = float("nan")
    clipped_mass: float = 0.0
    source: Optional[CouplingFunction] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        omegas = np.array(self.omegas, dtype=float, copy=True).reshape(-1)
        h_sq = np.array(self.h_sq, dtype=float, copy=True).reshape(-1)
        if omegas.size == 0:
            raise DomainError("A mode set needs at least one mode")
        if omegas.shape != h_sq.shape:
            raise DomainError(f"Mismatched mode arrays: {omegas.size} frequencies, {h_sq.size} couplings")
        if np.any(omegas <= 0.0) or not np.all(np.isfinite(omegas)):
            raise DomainError("Mode frequencies must be positive and finite")
        if omegas.size > 1 and np.any(np.diff(omegas) <= 0.0):
            raise DomainError("Mode frequencies must be strictly increasing")
        if np.any(h_sq < 0.0) or not np.all(np.isfinite(h_sq)):
            raise DomainError("Squared couplings must be non-negative and finite")
        omegas.setflags(write=False)
        h_sq.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "h_sq", h_sq)

    @classmethod
    def single(cls, omega: float, h_sq: float, omega_p: float = 1.0) -> "ModeSet":
        """One mode at scaled frequency ``omega``."""
        return cls(np.array([omega]), np.array([h_sq]), omega_p=omega_p)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[float, float]], omega_p: float = 1.0) -> "ModeSet":
        ordered = sorted(pairs)
        return cls(
            np.array([p[0] for p in ordered], dtype=float),
            np.array([p[1] for p in ordered], dtype=float),
            omega_p=omega_p,
        )

    @property
    def count(self) -> int:
        return int(self.omegas.size)

    @property
    def total_coupling(self) -> float:
        return float(np.sum(self.h_sq))

    @property
    def physical_omegas(self) -> np.ndarray:
        return self.omegas * self.omega_p

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"omega_k": self.physical_omegas, "h_k_sq": self.h_sq})


def discretize(
    cf: CouplingFunction,
    K: int = DEFAULT_MODE_COUNT,
    support_halfwidth_in_gammas: float = DEFAULT_SUPPORT_HALFWIDTH,
) -> ModeSet:
    """Midpoint-rule discretization of ``cf`` into ``K`` modes.

    The window is omega_p +- w gamma_p (the semi-elliptic shape is cut to its
    compact support) with the low edge clipped at 1e-9 omega_p; the mass lost
    to clipping is recorded on the returned ModeSet.

    Raises:
        DomainError: If ``K`` < 1 or the halfwidth is not positive.
        BadSupport: If the clipped window is empty.
    """
    if int(K) != K or K < 1:
        raise DomainError(f"Mode count must be a positive integer, got {K}")
    if not support_halfwidth_in_gammas > 0.0:
        raise DomainError(f"Support halfwidth must be positive, got {support_halfwidth_in_gammas}")
    K = int(K)

    floor = FREQUENCY_FLOOR * cf.omega_p
    lo, hi = cf.support(support_halfwidth_in_gammas)
    clipped_mass = 0.0
    if lo < floor:
        clipped_mass = cf.mass_between(-math.inf if cf.shape is not CouplingShape.SEMI_ELLIPTIC else lo, floor)
        logger.warning(
            "Coupling support clipped at positive frequencies | shape={shape} lo={lo:.4g} clipped_mass={mass:.3e}",
            shape=cf.shape.value,
            lo=lo,
            mass=clipped_mass,
            component="reservoir",
        )
        lo = floor
    if hi <= lo:
        raise BadSupport(f"Empty discretization window [{lo}, {hi}] for {cf.shape.value}")

    delta = (hi - lo) / K
    omegas = lo + (np.arange(K) + 0.5) * delta
    h_sq = np.asarray(cf.evaluate(omegas), dtype=float) * delta
    truncated_mass = cf.mass_between(lo, hi)

    total = float(np.sum(h_sq))
    if total > cf.s * (1.0 + MASS_TOLERANCE):
        logger.warning(
            "Coarse discretization overshoots the coupling strength | K={K} sum={total:.6g} s={s:.6g}",
            K=K,
            total=total,
            s=cf.s,
            component="reservoir",
        )
    logger.debug(
        "Discretized coupling | shape={shape} K={K} window=[{lo:.4g}, {hi:.4g}] sum={total:.10g} truncated_mass={mass:.10g}",
        shape=cf.shape.value,
        K=K,
        lo=lo,
        hi=hi,
        total=total,
        mass=truncated_mass,
        component="reservoir",
    )
    return ModeSet(
        omegas=omegas / cf.omega_p,
        h_sq=h_sq,
        omega_p=cf.omega_p,
        truncated_mass=truncated_mass,
        clipped_mass=clipped_mass,
        source=cf,
    )


__all__ = [
    "CouplingShape",
    "CouplingFunction",
    "ModeSet",
    "evaluate",
    "discretize",
    "DEFAULT_MODE_COUNT",
    "DEFAULT_SUPPORT_HALFWIDTH",
]

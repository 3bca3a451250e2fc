"""Closed-form pulsed dephasing dynamics."""

from pulsecontrol.dynamics.pulses import Normalization, PulseSchedule, alpha_k, decoherence_exponent
from pulsecontrol.dynamics.trace import Trace, TraceSample, trace

__all__ = [
    "Normalization",
    "PulseSchedule",
    "alpha_k",
    "decoherence_exponent",
    "Trace",
    "TraceSample",
    "trace",
]

"""Boson reservoir coupling functions and mode sets."""

from pulsecontrol.reservoir.coupling import CouplingFunction, CouplingShape, ModeSet, discretize

__all__ = ["CouplingFunction", "CouplingShape", "ModeSet", "discretize"]

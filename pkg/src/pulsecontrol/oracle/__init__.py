"""Fock-space reference evolution."""

from pulsecontrol.oracle.fock import ComparisonReport, OracleConfig, ReducedTrace, Topology, compare, evolve

__all__ = ["ComparisonReport", "OracleConfig", "ReducedTrace", "Topology", "compare", "evolve"]

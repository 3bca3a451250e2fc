"""Pulse control - Bell-pair dephasing under pi-pulse trains."""
__version__ = "0.1.0"

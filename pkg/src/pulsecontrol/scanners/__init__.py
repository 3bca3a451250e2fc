"""Scanners module for pulse-interval sweeps."""

from pulsecontrol.scanners.tau_scanner import ScanResult, ScanSpec, TauScanner, refine_peak, scan_tau

__all__ = ["ScanResult", "ScanSpec", "TauScanner", "refine_peak", "scan_tau"]

"""Test suite package initialization for pulsecontrol."""

"""Exactly solvable time-dependent dynamics of two coupled spin-1/2 systems."""

__version__ = "0.1.0"

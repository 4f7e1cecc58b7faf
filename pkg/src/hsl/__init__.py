"""Exact verification of hypertoric shift-operator identities."""

__version__ = "0.1.0"

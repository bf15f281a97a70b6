"""Desk-scale MMSE turbo-equalization simulator (COD-MAP vs MAP-SBVP)."""

__version__ = "1.0.0"

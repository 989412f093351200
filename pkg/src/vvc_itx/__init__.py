"""Bit-exact model of a VVC inverse transform unit (MTS + LFNST) and its hardware pipeline."""

__version__ = "0.1.0"

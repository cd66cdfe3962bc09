"""Exact Gröbner-basis toolkit for 3SAT encodings, hardness gadgets and fractional coloring."""

__version__ = "0.1.0"

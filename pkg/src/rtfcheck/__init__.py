"""Exact desk-scale checks of a relative-trace-formula comparison."""

__version__ = "0.1.0"

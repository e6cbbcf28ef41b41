"""Liner shipping network analysis: port graphs, country indices, and trade regressions."""

__version__ = "0.1.0"

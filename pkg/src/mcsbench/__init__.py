"""Canonical model, JSON-LD view, triple store and query tooling for
multiple-choice commonsense benchmarks."""

__version__ = "0.1.0"

"""Exact throughput analysis for synchronous and scenario-aware dataflow graphs.

All numbers are exact rationals: matrix entries and cycle means come back as
fractions.Fraction, symbolic matrix entries as canonical polynomial strings.
"""

from psadf._psadf import (
    AnalysisError,
    Matrix,
    Model,
    ModelError,
    ParseError,
    SymbolicMatrix,
    __version__,
    cycle_mean,
    evolve,
    load,
    parse,
    report_text,
    throughput,
)

__all__ = [
    "AnalysisError",
    "Matrix",
    "Model",
    "ModelError",
    "ParseError",
    "SymbolicMatrix",
    "__version__",
    "cycle_mean",
    "evolve",
    "load",
    "parse",
    "report_text",
    "throughput",
]

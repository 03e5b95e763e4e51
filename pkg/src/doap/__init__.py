"""Diameter-optimal augmentation of metric paths.

Given a path v_1..v_n embedded in a metric space, pick one extra edge so
that the diameter of the augmented graph is as small as possible.  solve
finds the optimal threshold and a witness edge in O(n log n); decide
answers the fixed-threshold feasibility question in linear time per call;
the oracle module recomputes everything by brute force for testing.
"""

from __future__ import annotations

from .decision import DecisionOutcome, decide
from .instances import GeneratorSpec, generate, read_instance, write_instance
from .metric_core import CandidateEdge, DiagnosticProfile, MetricPath
from .optimize import SolveResult, SolveStats, solve
from .oracle import brute_diameter, brute_profile, brute_solve
from .rmq import RangeMinIndex

__all__ = [
    "CandidateEdge",
    "DecisionOutcome",
    "DiagnosticProfile",
    "GeneratorSpec",
    "MetricPath",
    "RangeMinIndex",
    "SolveResult",
    "SolveStats",
    "brute_diameter",
    "brute_profile",
    "brute_solve",
    "decide",
    "generate",
    "read_instance",
    "solve",
    "write_instance",
]

__version__ = "0.1.0"

"""Exact maximum clique search, sequential and thread-parallel, with search-space instrumentation."""

from ._jit import BACKEND
from .analysis import BalanceReport, InstanceAnalysis, analyze_instance, balance_report, incumbent_timeline
from .colour import ColouredCandidates, colour_order
from .graph import DegreePermutation, DimacsError, Graph, degree_permute, parse_dimacs, random_graph, read_dimacs
from .parallel import (ParallelStats, RandomSteal, Resplit, Sequential, SharedIncumbent, SplitStrategy,
                       StaticDepth, StealBoard, WorkItem, enumerate_split, parse_strategy, solve_parallel,
                       steal_unstarted)
from .search import Incumbent, SearchNodeLabel, SearchStats, brute_force_omega, max_clique, replay

__all__ = [
    "BACKEND", "BalanceReport", "ColouredCandidates", "DegreePermutation", "DimacsError", "Graph",
    "Incumbent", "InstanceAnalysis", "ParallelStats", "RandomSteal", "Resplit", "SearchNodeLabel",
    "SearchStats", "Sequential", "SharedIncumbent", "SplitStrategy", "StaticDepth", "StealBoard",
    "WorkItem", "analyze_instance", "balance_report", "brute_force_omega", "colour_order",
    "degree_permute", "enumerate_split", "incumbent_timeline", "max_clique", "parse_dimacs",
    "parse_strategy", "random_graph", "read_dimacs", "replay", "solve_parallel", "steal_unstarted",
]

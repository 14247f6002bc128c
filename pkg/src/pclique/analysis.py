"""Search-space measurements: total/prove/avoidable nodes, balance and incumbent timelines."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph
from .parallel import IncumbentEvent, ParallelStats
from .search import Deadline, SearchNodeLabel, SearchStats, max_clique


class IncompleteAnalysis(RuntimeError):
    """Raised when a run behind an analysis hits its timeout."""


@dataclass(frozen=True)
class InstanceAnalysis:
    instance: str
    omega: int
    total_nodes: int
    prove_nodes: int
    location: SearchNodeLabel

    def __post_init__(self):
        if self.total_nodes < 1:
            raise ValueError("total_nodes must be >= 1")
        if self.prove_nodes > self.total_nodes:
            raise ValueError(f"prove {self.prove_nodes} exceeds total {self.total_nodes}")

    @property
    def avoid_fraction(self) -> float:
        return (self.total_nodes - self.prove_nodes) / self.total_nodes

    def row(self) -> str:
        """``instance,omega,total,prove,avoid%,location`` as printed by ``pclique analyze``."""
        loc = self.location.render(sep=" ")
        return (f"{self.instance},{self.omega},{self.total_nodes},{self.prove_nodes},"
                f"{100 * self.avoid_fraction:.1f},{loc}")


ANALYSIS_HEADER = "instance,omega,total,prove,avoid%,location"


def analyze_instance(g: Graph, timeout: float | None = None) -> InstanceAnalysis:
    """Solve, then rerun primed with ω; the second count is the proof cost."""
    deadline = Deadline(timeout)
    inc, first = max_clique(g, deadline=deadline)
    if not first.complete:
        raise IncompleteAnalysis(f"{g.name or 'graph'}: search timed out after {first.nodes} nodes")
    _, primed = max_clique(g, inc.size, deadline=deadline)
    if not primed.complete:
        raise IncompleteAnalysis(f"{g.name or 'graph'}: primed run timed out after {primed.nodes} nodes")
    return InstanceAnalysis(g.name, inc.size, first.nodes, primed.nodes, inc.found_at_label)


@dataclass(frozen=True)
class BalanceReport:
    per_thread_runtime: tuple[float, ...]
    minimum: float
    maximum: float
    speedup: float
    sequential_wall: float
    parallel_wall: float

    @property
    def cap(self) -> float:
        """Best speedup the longest-running thread allows."""
        return self.sequential_wall / self.maximum if self.maximum > 0 else float("inf")


def balance_report(stats: ParallelStats, sequential_wall: float) -> BalanceReport:
    """Thread runtime spread and speedup; the wall time is never shorter than the
    longest thread, so ``speedup <= cap`` holds by construction."""
    runtimes = tuple(stats.per_thread_runtime) or (0.0,)
    lo, hi = min(runtimes), max(runtimes)
    wall = max(stats.wall_time, hi)
    if wall <= 0 or sequential_wall <= 0:
        raise ValueError("wall times must be positive")
    return BalanceReport(runtimes, lo, hi, sequential_wall / wall, sequential_wall, wall)


def incumbent_timeline(stats: SearchStats | ParallelStats) -> list[IncumbentEvent]:
    """Improvements as (size, elapsed, label, thread, members) events in discovery order."""
    if isinstance(stats, ParallelStats):
        events = list(stats.incumbent_timeline)
    else:
        events = [IncumbentEvent(e.size, e.found_at_time, e.found_at_label, e.thread, e.members)
                  for e in stats.incumbent_timeline]
    events.sort(key=lambda e: (e.elapsed, e.size))
    for a, b in zip(events, events[1:]):
        if b.size <= a.size:
            raise AssertionError(f"incumbent timeline not increasing: {a.size} then {b.size}")
    return events

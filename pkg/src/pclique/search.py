"""Sequential maximum clique search with node counting and solution location."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .colour import colour_order
from .graph import Graph, bitset
from .kernel import CANCELLED, DONE, IMPROVED, PAUSED, SearchState

DEFAULT_BUDGET = 1 << 15
BRUTE_FORCE_LIMIT = 24


@dataclass(frozen=True, order=True)
class SearchNodeLabel:
    """1-based branch indices from the root; the root is ``()``."""

    path: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(int(x) for x in self.path))
        if any(x < 1 for x in self.path):
            raise ValueError(f"label entries must be >= 1: {self.path}")

    @property
    def depth(self) -> int:
        return len(self.path)

    def render(self, sep: str = ", ", times: str = "×") -> str:
        """Run-length form: runs of three or more repeats become ``v×k``."""
        parts = []
        path = self.path
        i = 0
        while i < len(path):
            j = i
            while j < len(path) and path[j] == path[i]:
                j += 1
            run = j - i
            if run >= 3:
                parts.append(f"{path[i]}{times}{run}")
            else:
                parts.extend(str(path[i]) for _ in range(run))
            i = j
        return sep.join(parts)

    def __str__(self) -> str:
        return f"({self.render()})"

    @classmethod
    def parse(cls, text: str) -> "SearchNodeLabel":
        """Inverse of :meth:`render`; accepts ``×`` or ``x`` and comma or space separators."""
        text = text.strip().strip("()")
        out: list[int] = []
        for tok in text.replace(",", " ").split():
            tok = tok.replace("×", "x")
            if "x" in tok:
                value, run = tok.split("x")
                out.extend([int(value)] * int(run))
            else:
                out.append(int(tok))
        return cls(tuple(out))


@dataclass(frozen=True)
class Incumbent:
    size: int = 0
    members: tuple[int, ...] = ()
    found_at_label: SearchNodeLabel = SearchNodeLabel()
    found_at_nodes: int = 0
    found_at_time: float = 0.0
    thread: int = 0

    @property
    def empty(self) -> bool:
        return not self.members


@dataclass
class SearchStats:
    nodes: int = 0
    incumbent_timeline: list[Incumbent] = field(default_factory=list)
    wall_time: float = 0.0
    complete: bool = True


class Deadline:
    """Cooperative cancellation: a shared flag array plus an optional wall clock limit."""

    def __init__(self, timeout: float | None = None, control: np.ndarray | None = None):
        self.control = control if control is not None else np.zeros(1, dtype=np.int64)
        self.expires = None if timeout is None else time.monotonic() + timeout

    def cancel(self) -> None:
        self.control[0] = 1

    @property
    def cancelled(self) -> bool:
        return bool(self.control[0])

    def check(self) -> bool:
        if self.expires is not None and time.monotonic() >= self.expires:
            self.cancel()
        return self.cancelled


def record_location(label: Sequence[int], depth: int) -> SearchNodeLabel:
    return SearchNodeLabel(tuple(int(x) for x in label[:depth]))


def max_clique(g: Graph, initial_bound: int = 0, *, timeout: float | None = None,
               deadline: Deadline | None = None,
               budget: int = DEFAULT_BUDGET) -> tuple[Incumbent, SearchStats]:
    """Find a maximum clique of a degree-ordered graph.

    With ``initial_bound = b`` the search behaves as if it already held a
    clique of size b: it returns an empty incumbent unless something larger
    exists, and ``stats.nodes`` counts only nodes that bound cannot eliminate.
    """
    if initial_bound < 0:
        raise ValueError("initial_bound must be non-negative")
    deadline = deadline or Deadline(timeout)
    stats = SearchStats()
    incumbent = Incumbent()
    best = np.array([initial_bound], dtype=np.int64)
    state = SearchState(g.n, g.words)
    t0 = time.monotonic()
    state.start(g.adj, 0, g.all_vertices())
    while True:
        status = state.run(g.adj, best, deadline.control, budget)
        if status == IMPROVED:
            clique, label = state.found_clique()
            incumbent = Incumbent(len(clique), tuple(g.label_set(clique)), SearchNodeLabel(label),
                                  state.nodes, time.monotonic() - t0)
            best[0] = incumbent.size
            stats.incumbent_timeline.append(incumbent)
        elif status == PAUSED:
            if deadline.check():
                stats.complete = False
                break
        elif status == CANCELLED:
            stats.complete = False
            break
        else:
            assert status == DONE
            break
    stats.nodes = state.nodes
    stats.wall_time = time.monotonic() - t0
    return incumbent, stats


def replay(g: Graph, label: SearchNodeLabel | Sequence[int]) -> list[int]:
    """Follow branch positions from the root; returns the internal vertices chosen."""
    path = label.path if isinstance(label, SearchNodeLabel) else tuple(label)
    cands = g.all_vertices()
    chosen: list[int] = []
    for pos in path:
        coloured = colour_order(g, cands)
        k = len(coloured.vertices)
        if not 1 <= pos <= k:
            raise ValueError(f"branch {pos} does not exist at depth {len(chosen)} ({k} branches)")
        i = k - pos
        v = int(coloured.vertices[i])
        chosen.append(v)
        cands = bitset(coloured.vertices[:i].tolist(), g.n) & g.adj[v]
    return chosen


def brute_force_omega(g: Graph) -> int:
    """Clique number by exhaustive enumeration of every clique; no bounding."""
    if g.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force refuses n={g.n} > {BRUTE_FORCE_LIMIT}")
    dense = g.dense()
    nbr = [sum(1 << u for u in np.flatnonzero(dense[v]).tolist()) for v in range(g.n)]
    best = 0

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if size > best:
            best = size
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            grow(size + 1, cand & nbr[v])

    grow(0, (1 << g.n) - 1)
    return best

"""Resumable, allocation-free expand loop.

The recursion of the branch-and-bound procedure is unrolled onto per-depth
rows of a :class:`SearchState`, so the kernel can return to Python whenever
it unseats the incumbent, exhausts its node budget or sees the cancel flag,
and pick up exactly where it stopped on the next call.
"""

from __future__ import annotations

import numpy as np

from ._jit import ONE, ZERO, jit
from .colour import colour_into

DONE = 0
IMPROVED = 1
PAUSED = 2
CANCELLED = 3

# regs layout
R_DEPTH = 0
R_BASE = 1
R_NODES = 2
R_FOUND = 3


class SearchState:
    """Worker-local scratch for one search, sized once for graph order n.

    Row ``d`` of ``cands``/``order``/``bounds`` belongs to the node at depth
    ``d``; ``clique[d]`` and ``label[d]`` hold the branch taken there.
    """

    def __init__(self, n: int, words: int):
        rows = n + 2
        width = max(n, 1)
        self.n = n
        self.cands = np.zeros((rows, words), dtype=np.uint64)
        self.order = np.zeros((rows, width), dtype=np.int64)
        self.bounds = np.zeros((rows, width), dtype=np.int64)
        self.count = np.zeros(rows, dtype=np.int64)
        self.idx = np.zeros(rows, dtype=np.int64)
        self.clique = np.zeros(rows, dtype=np.int64)
        self.label = np.zeros(rows, dtype=np.int64)
        self.found = np.zeros(rows, dtype=np.int64)
        self.found_label = np.zeros(rows, dtype=np.int64)
        self.scratch = np.zeros((2, words), dtype=np.uint64)
        self.regs = np.zeros(4, dtype=np.int64)

    @property
    def nodes(self) -> int:
        return int(self.regs[R_NODES])

    def start(self, adj, depth: int, cands, clique=(), label=()) -> None:
        """Prepare a subtree rooted at a node at ``depth`` (counts that node)."""
        self.cands[depth] = cands
        self.clique[:depth] = clique
        self.label[:depth] = label
        enter(adj, self.cands, self.order, self.bounds, self.count, self.idx,
              self.scratch, self.regs, depth)

    def run(self, adj, incumbent, control, budget: int) -> int:
        return expand(adj, self.cands, self.order, self.bounds, self.count, self.idx,
                      self.clique, self.label, self.found, self.found_label,
                      self.scratch, self.regs, incumbent, control, budget)

    def found_clique(self) -> tuple[list[int], tuple[int, ...]]:
        size = int(self.regs[R_FOUND])
        return self.found[:size].tolist(), tuple(self.found_label[:size].tolist())


@jit
def enter(adj, cands, order, bounds, count, idx, scratch, regs, depth):
    k = colour_into(adj, cands[depth], order[depth], bounds[depth], scratch[0], scratch[1])
    count[depth] = k
    idx[depth] = k
    regs[R_DEPTH] = depth
    regs[R_BASE] = depth
    regs[R_NODES] += 1


@jit
def expand(adj, cands, order, bounds, count, idx, clique, label, found, found_label,
           scratch, regs, incumbent, control, budget):
    """Run the unrolled search until done, an improvement, ``budget`` new nodes or cancel.

    ``incumbent[0]`` is the shared best size, read at every bound check and
    never written here.
    """
    nw = cands.shape[1]
    base = regs[R_BASE]
    steps = 0
    while True:
        d = regs[R_DEPTH]
        i = idx[d] - 1
        if i < 0 or d + bounds[d, i] <= incumbent[0]:
            if d == base:
                return DONE
            d -= 1
            regs[R_DEPTH] = d
            v = order[d, idx[d]]
            cands[d, v >> 6] &= ~(ONE << np.uint64(v & 63))
            continue
        idx[d] = i
        v = order[d, i]
        clique[d] = v
        label[d] = count[d] - i
        empty = True
        for w in range(nw):
            x = cands[d, w] & adj[v, w]
            cands[d + 1, w] = x
            if x != ZERO:
                empty = False
        if empty:
            cands[d, v >> 6] &= ~(ONE << np.uint64(v & 63))
            if d + 1 > incumbent[0]:
                for j in range(d + 1):
                    found[j] = clique[j]
                    found_label[j] = label[j]
                regs[R_FOUND] = d + 1
                return IMPROVED
            continue
        k = colour_into(adj, cands[d + 1], order[d + 1], bounds[d + 1], scratch[0], scratch[1])
        count[d + 1] = k
        idx[d + 1] = k
        regs[R_DEPTH] = d + 1
        regs[R_NODES] += 1
        if control[0] != 0:
            return CANCELLED
        steps += 1
        if steps >= budget:
            return PAUSED

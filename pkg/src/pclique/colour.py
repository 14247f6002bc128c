"""Greedy sequential colouring used as the branching order and bound."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import ONE, ZERO, ctz, jit
from .graph import Graph


@jit
def colour_into(adj, cands, order, bounds, uncoloured, pending):
    """Colour the vertices of bitset ``cands`` greedily in ascending index.

    Writes vertices grouped by colour class (ascending colour, ascending index
    inside a class) to ``order`` and their 1-based colour to ``bounds``;
    returns how many were written.  ``uncoloured`` and ``pending`` are scratch
    rows of the same width as ``cands``.
    """
    nw = cands.shape[0]
    for w in range(nw):
        uncoloured[w] = cands[w]
    k = 0
    colour = 0
    first = 0
    while True:
        while first < nw and uncoloured[first] == ZERO:
            first += 1
        if first == nw:
            return k
        colour += 1
        for w in range(first, nw):
            pending[w] = uncoloured[w]
        for w in range(first, nw):
            while pending[w] != ZERO:
                b = ctz(pending[w])
                bit = ONE << np.uint64(b)
                pending[w] &= ~bit
                uncoloured[w] &= ~bit
                v = w * 64 + b
                for x in range(w, nw):
                    pending[x] &= ~adj[v, x]
                order[k] = v
                bounds[k] = colour
                k += 1


@dataclass(frozen=True)
class ColouredCandidates:
    vertices: np.ndarray
    bounds: np.ndarray

    @property
    def colours(self) -> int:
        return int(self.bounds[-1]) if self.bounds.size else 0

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.colours)]
        for v, c in zip(self.vertices.tolist(), self.bounds.tolist()):
            out[c - 1].append(v)
        return out

    def branch_order(self) -> np.ndarray:
        """Vertices in the order search branches on them (highest colour first)."""
        return self.vertices[::-1]


def colour_order(g: Graph, candidates: np.ndarray) -> ColouredCandidates:
    candidates = np.ascontiguousarray(candidates, dtype=np.uint64)
    order = np.empty(max(g.n, 1), dtype=np.int64)
    bounds = np.empty(max(g.n, 1), dtype=np.int64)
    scratch = np.empty((2, candidates.shape[0]), dtype=np.uint64)
    k = colour_into(g.adj, candidates, order, bounds, scratch[0], scratch[1])
    return ColouredCandidates(order[:k].copy(), bounds[:k].copy())

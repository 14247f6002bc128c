"""Generators for the structured DIMACS clique families and small fixtures.

Only families with a deterministic construction are here (c-fat, hamming,
johnson, MANN); the random families (brock, p_hat, san, gen, C) depend on
their original generators' seeds and must be read from ``.clq`` files.
"""

from __future__ import annotations

import itertools
import math
import re
from pathlib import Path

import numpy as np

from .graph import Graph, read_dimacs

SMALL_EXAMPLE_EDGES = [
    (1, 5), (1, 9), (2, 5), (2, 6), (2, 8), (3, 4), (3, 7), (4, 8), (5, 6),
    (7, 8), (8, 9), (1, 3), (6, 8), (1, 6), (1, 8), (3, 6), (3, 8),
]


def small_example() -> Graph:
    """Nine vertices, seventeen edges, unique maximum clique {1, 3, 6, 8}."""
    return Graph.from_edges(9, [(u - 1, v - 1) for u, v in SMALL_EXAMPLE_EDGES], name="example9")


def complete(n: int) -> Graph:
    dense = ~np.eye(n, dtype=bool)
    return Graph.from_dense(dense, name=f"K{n}")


def star(n: int, centre: int) -> Graph:
    """Star on labels 1..n with hub ``centre`` (1-based)."""
    c = centre - 1
    return Graph.from_edges(n, [(c, v) for v in range(n) if v != c], name=f"star{n}")


def c_fat(n: int, c: float) -> Graph:
    """Fault-diagnosis graph: vertex i lies in block i mod k, k = floor(n / (c ln n));
    a block is joined to itself and to its two cyclic neighbour blocks."""
    k = int(math.floor(n / (c * math.log(n))))
    block = np.arange(n) % k
    diff = np.abs(block[:, None] - block[None, :])
    dense = (diff <= 1) | (diff == k - 1)
    np.fill_diagonal(dense, False)
    return Graph.from_dense(dense, name=f"c-fat{n}-{c:g}")


def _hamming_distance_matrix(words: np.ndarray) -> np.ndarray:
    x = words[:, None] ^ words[None, :]
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def hamming(bits: int, distance: int) -> Graph:
    """Binary words of length ``bits`` (label = value + 1), joined when at Hamming distance >= d."""
    words = np.arange(1 << bits, dtype=np.uint64)
    dense = _hamming_distance_matrix(words) >= distance
    np.fill_diagonal(dense, False)
    return Graph.from_dense(dense, name=f"hamming{bits}-{distance}")


def johnson(n: int, w: int, distance: int) -> Graph:
    """Weight-``w`` words of length n in ascending integer value, joined at distance >= d."""
    words = np.array(sorted(sum(1 << i for i in combo)
                            for combo in itertools.combinations(range(n), w)), dtype=np.uint64)
    dense = _hamming_distance_matrix(words) >= distance
    np.fill_diagonal(dense, False)
    return Graph.from_dense(dense, name=f"johnson{n}-{w}-{distance}")


def affine_triple_system(k: int) -> list[tuple[int, int, int]]:
    """Lines of AG(k, 3): a Steiner triple system on 3**k points, lexicographically sorted."""
    points = list(itertools.product(range(3), repeat=k))
    index = {p: i for i, p in enumerate(points)}
    lines = set()
    for a, b in itertools.combinations(points, 2):
        c = tuple((-x - y) % 3 for x, y in zip(a, b))
        lines.add(tuple(sorted((index[a], index[b], index[c]))))
    return sorted(lines)


def steiner_clique(triples: list[tuple[int, int, int]], points: int, name: str = "") -> Graph:
    """Clique formulation of Steiner triple covering.

    One vertex per point, then three per triple (one for each of its points).
    Non-edges: the three vertices of a triple, and each of them with its point.
    """
    n = points + 3 * len(triples)
    dense = ~np.eye(n, dtype=bool)
    for t, triple in enumerate(triples):
        tri = [points + 3 * t + j for j in range(3)]
        for a, b in itertools.combinations(tri, 2):
            dense[a, b] = dense[b, a] = False
        for vid, p in zip(tri, triple):
            dense[vid, p] = dense[p, vid] = False
    return Graph.from_dense(dense, name=name)


def mann_a9() -> Graph:
    return steiner_clique(affine_triple_system(2), 9, name="MANN_a9")


def mann_a27() -> Graph:
    return steiner_clique(affine_triple_system(3), 27, name="MANN_a27")


_GENERATED = {
    "example9": small_example,
    "MANN_a9": mann_a9,
    "MANN_a27": mann_a27,
}

_FAMILY = [
    (re.compile(r"c-fat(\d+)-(\d+)$"), lambda m: c_fat(int(m[1]), float(m[2]))),
    (re.compile(r"hamming(\d+)-(\d+)$"), lambda m: hamming(int(m[1]), int(m[2]))),
    (re.compile(r"johnson(\d+)-(\d+)-(\d+)$"), lambda m: johnson(int(m[1]), int(m[2]), int(m[3]))),
    (re.compile(r"K(\d+)$"), lambda m: complete(int(m[1]))),
]


def generate(name: str) -> Graph:
    """Build a named instance from its construction; KeyError if it has none."""
    if name in _GENERATED:
        return _GENERATED[name]()
    for pattern, build in _FAMILY:
        m = pattern.match(name)
        if m:
            g = build(m)
            return Graph(g.n, g.adj, g.names, name)
    raise KeyError(f"no construction known for instance {name!r}")


def load_instance(name: str, search_dirs=()) -> Graph:
    """Prefer ``<dir>/<name>.clq`` from ``search_dirs``; otherwise generate it."""
    for d in search_dirs:
        path = Path(d) / f"{name}.clq"
        if path.is_file():
            return read_dimacs(path)
    return generate(name)

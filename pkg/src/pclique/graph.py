"""Bitset-adjacency graphs, DIMACS clq input, degree ordering and G(n, p)."""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from ._jit import WORD_BITS


class DimacsError(ValueError):
    """Malformed DIMACS input; ``line`` is 1-based (0 when not line specific)."""

    def __init__(self, line: int, message: str):
        self.line = line
        where = f"line {line}: " if line else ""
        super().__init__(f"{where}{message}")


def words_for(n: int) -> int:
    return max(1, (n + WORD_BITS - 1) // WORD_BITS)


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a boolean (rows, n) matrix into little-endian uint64 bit rows."""
    dense = np.asarray(dense, dtype=bool)
    rows, n = dense.shape
    width = words_for(n) * WORD_BITS
    padded = np.zeros((rows, width), dtype=bool)
    padded[:, :n] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_rows(bits: np.ndarray, n: int) -> np.ndarray:
    bits = np.ascontiguousarray(np.atleast_2d(bits), dtype=np.uint64)
    raw = bits.view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :n].astype(bool)


def bitset(vertices: Iterable[int], n: int) -> np.ndarray:
    row = np.zeros(words_for(n), dtype=np.uint64)
    for v in vertices:
        row[v // WORD_BITS] |= np.uint64(1) << np.uint64(v % WORD_BITS)
    return row


def members(row: np.ndarray, n: int) -> list[int]:
    return np.flatnonzero(unpack_rows(row, n)[0]).tolist()


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph.

    ``adj[v]`` is vertex ``v``'s neighbourhood as a row of uint64 words and
    ``names[v]`` the original 1-based label of internal vertex ``v``.
    """

    n: int
    adj: np.ndarray
    names: np.ndarray
    name: str = ""

    @classmethod
    def from_dense(cls, dense: np.ndarray, names=None, name: str = "") -> "Graph":
        dense = np.asarray(dense, dtype=bool)
        n = dense.shape[0]
        if dense.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        if np.any(np.diag(dense)):
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(dense, dense.T):
            raise ValueError("adjacency matrix must be symmetric")
        if names is None:
            names = np.arange(1, n + 1)
        names = np.asarray(names, dtype=np.int64)
        if names.shape != (n,) or len(set(names.tolist())) != n:
            raise ValueError("names must be a bijection onto the vertices")
        adj = pack_rows(dense) if n else np.zeros((0, 1), dtype=np.uint64)
        adj.setflags(write=False)
        names.setflags(write=False)
        return cls(n, adj, names, name)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        """Build from 0-based edge pairs."""
        dense = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            dense[u, v] = dense[v, u] = True
        return cls.from_dense(dense, name=name)

    @property
    def words(self) -> int:
        return self.adj.shape[1]

    def dense(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros((0, 0), dtype=bool)
        return unpack_rows(self.adj, self.n)

    def degrees(self) -> np.ndarray:
        return self.dense().sum(axis=1)

    def degree(self, v: int) -> int:
        return int(np.bitwise_count(self.adj[v]).sum())

    def edge_count(self) -> int:
        return int(np.bitwise_count(self.adj).sum()) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u, v // WORD_BITS] >> np.uint64(v % WORD_BITS)) & np.uint64(1))

    def neighbours(self, v: int) -> list[int]:
        return members(self.adj[v], self.n)

    def edges(self) -> list[tuple[int, int]]:
        upper = np.triu(self.dense(), 1)
        return [(int(u), int(v)) for u, v in zip(*np.nonzero(upper))]

    def all_vertices(self) -> np.ndarray:
        return bitset(range(self.n), self.n)

    def index_of(self, label: int) -> int:
        hits = np.flatnonzero(self.names == label)
        if hits.size == 0:
            raise KeyError(label)
        return int(hits[0])

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            return False
        return all(self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])

    def label_set(self, vertices: Iterable[int]) -> list[int]:
        return sorted(int(self.names[v]) for v in vertices)


@dataclass(frozen=True)
class DegreePermutation:
    order: np.ndarray
    inverse: np.ndarray


def parse_dimacs(source: str | TextIO | Iterable[str], name: str = "") -> Graph:
    """Parse DIMACS clq text (``c`` comments, one ``p edge n m``, ``e u v`` lines)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    n = None
    dense = None
    for lineno, raw in enumerate(source, start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        kind = tokens[0]
        if kind == "p":
            if n is not None:
                raise DimacsError(lineno, "duplicate problem line")
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise DimacsError(lineno, f"expected 'p edge <n> <m>', got {raw.strip()!r}")
            n = _to_int(tokens[2], lineno)
            _to_int(tokens[3], lineno)
            if n < 0:
                raise DimacsError(lineno, "negative vertex count")
            dense = np.zeros((n, n), dtype=bool)
        elif kind == "e":
            if n is None:
                raise DimacsError(lineno, "edge before problem line")
            if len(tokens) != 3:
                raise DimacsError(lineno, f"expected 'e <u> <v>', got {raw.strip()!r}")
            u, v = _to_int(tokens[1], lineno), _to_int(tokens[2], lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise DimacsError(lineno, f"vertex {x} out of range 1..{n}")
            if u == v:
                raise DimacsError(lineno, f"self-loop on vertex {u}")
            dense[u - 1, v - 1] = dense[v - 1, u - 1] = True
        else:
            raise DimacsError(lineno, f"unknown line type {kind!r}")
    if n is None:
        raise DimacsError(0, "missing problem line")
    return Graph.from_dense(dense, name=name)


def _to_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DimacsError(lineno, f"malformed integer {token!r}") from None


def read_dimacs(path) -> Graph:
    path = Path(path)
    with path.open() as fh:
        return parse_dimacs(fh, name=path.stem)


def to_dimacs(g: Graph, comment: str = "") -> str:
    """Render with original labels, so parse_dimacs(to_dimacs(g)) keeps names only if they are 1..n."""
    edges = g.edges()
    out = []
    if comment:
        out.extend(f"c {line}" for line in comment.splitlines())
    out.append(f"p edge {g.n} {len(edges)}")
    out.extend(f"e {g.names[u]} {g.names[v]}" for u, v in edges)
    return "\n".join(out) + "\n"


def degree_permute(g: Graph) -> tuple[Graph, DegreePermutation]:
    """Relabel so degrees are non-increasing; ties keep ascending original label."""
    degrees = g.degrees() if g.n else np.zeros(0, dtype=np.int64)
    order = np.lexsort((g.names, -degrees)).astype(np.int64)
    inverse = np.empty_like(order)
    inverse[order] = np.arange(g.n)
    dense = g.dense()[np.ix_(order, order)]
    permuted = Graph.from_dense(dense, names=g.names[order], name=g.name)
    return permuted, DegreePermutation(order, inverse)


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); pairs (u < v) are drawn in row-major order from one seeded stream."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    dense = np.zeros((n, n), dtype=bool)
    dense[iu[keep], ju[keep]] = True
    dense |= dense.T
    return Graph.from_dense(dense, name=f"G({n},{p:g},{seed})")

"""Multidigraph storage, excess arithmetic and vertex partitions.

Vertices are the dense integers ``0..n-1``.  Parallel edges are stored as
multiplicities, so removing "one copy of (u, v)" is O(1); copies of the
same ordered pair are interchangeable and carry no further identity.
Paths and cycles are plain vertex tuples; a cycle repeats its first vertex
at the end.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

Edge = tuple[int, int]
Path = tuple[int, ...]
Cycle = tuple[int, ...]

PLUS, MINUS, ZERO = 1, -1, 0


class Digraph:
    """Loopless multidigraph on vertices ``0..n-1``.

    With ``simple=True`` every ordered pair may appear at most once.
    Large simple graphs can be created through :meth:`from_arrays`, which
    defers building the adjacency maps until something needs them; degree
    queries and :meth:`edge_arrays` work without that step.
    """

    def __init__(self, n: int, edges: Iterable[Edge] = (), *, simple: bool = False):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        self._n = int(n)
        self.simple = simple
        self._out: list[dict[int, int]] | None = [dict() for _ in range(n)]
        self._in: list[dict[int, int]] | None = [dict() for _ in range(n)]
        self._outdeg = [0] * n
        self._indeg = [0] * n
        self._m = 0
        self._arrays: tuple[np.ndarray, np.ndarray] | None = None
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def from_arrays(cls, n: int, tails, heads, *, simple: bool = True) -> "Digraph":
        tails = np.asarray(tails, dtype=np.int64)
        heads = np.asarray(heads, dtype=np.int64)
        if tails.shape != heads.shape:
            raise ValueError("tails and heads must have the same length")
        if len(tails) and (np.any(tails == heads) or tails.min() < 0 or heads.min() < 0
                           or tails.max() >= n or heads.max() >= n):
            raise ValueError("edge arrays contain loops or out-of-range vertices")
        g = cls(n, simple=simple)
        g._out = g._in = None
        g._outdeg = np.bincount(tails, minlength=n).tolist()
        g._indeg = np.bincount(heads, minlength=n).tolist()
        g._m = int(len(tails))
        g._arrays = (tails, heads)
        if simple and len(tails):
            keys = tails * n + heads
            if len(np.unique(keys)) != len(keys):
                raise ValueError("duplicate edge in simple digraph")
        return g

    # -- basic queries -------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    vertex_count = n

    @property
    def m(self) -> int:
        return self._m

    edge_count = m

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self._n:
            raise ValueError(f"vertex {v} out of range 0..{self._n - 1}")

    def _materialize(self) -> None:
        if self._out is not None:
            return
        out = [dict() for _ in range(self._n)]
        inn = [dict() for _ in range(self._n)]
        tails, heads = self._arrays
        for u, v in zip(tails.tolist(), heads.tolist()):
            out[u][v] = out[u].get(v, 0) + 1
            inn[v][u] = inn[v].get(u, 0) + 1
        self._out, self._in = out, inn

    def out_degree(self, v: int) -> int:
        return self._outdeg[v]

    def in_degree(self, v: int) -> int:
        return self._indeg[v]

    def out_degrees(self) -> list[int]:
        return list(self._outdeg)

    def in_degrees(self) -> list[int]:
        return list(self._indeg)

    def out_neighbors(self, u: int) -> dict[int, int]:
        """Map head -> multiplicity for edges leaving ``u`` (do not mutate)."""
        self._materialize()
        return self._out[u]

    def in_neighbors(self, v: int) -> dict[int, int]:
        self._materialize()
        return self._in[v]

    def multiplicity(self, u: int, v: int) -> int:
        self._materialize()
        return self._out[u].get(v, 0)

    def has_edge(self, u: int, v: int) -> bool:
        return self.multiplicity(u, v) > 0

    def edges(self) -> Iterator[Edge]:
        """All edges, one tuple per copy, grouped by tail in ascending order."""
        if self._out is None:
            tails, heads = self._arrays
            yield from zip(tails.tolist(), heads.tolist())
            return
        for u, nbrs in enumerate(self._out):
            for v, k in nbrs.items():
                for _ in range(k):
                    yield (u, v)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self._arrays is None:
            pairs = list(self.edges())
            arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
            self._arrays = (arr[:, 0].copy(), arr[:, 1].copy())
        return self._arrays

    def edge_multiset(self) -> Counter:
        return Counter(self.edges())

    # -- mutation ------------------------------------------------------------

    def add_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ValueError(f"loop at vertex {u} not allowed")
        self._materialize()
        k = self._out[u].get(v, 0)
        if self.simple and k:
            raise ValueError(f"edge ({u}, {v}) already present in simple digraph")
        self._out[u][v] = k + 1
        self._in[v][u] = k + 1
        self._outdeg[u] += 1
        self._indeg[v] += 1
        self._m += 1
        self._arrays = None

    def remove_edge(self, u: int, v: int) -> None:
        self._materialize()
        k = self._out[u].get(v, 0)
        if not k:
            raise ValueError(f"edge ({u}, {v}) not present")
        if k == 1:
            del self._out[u][v]
            del self._in[v][u]
        else:
            self._out[u][v] = k - 1
            self._in[v][u] = k - 1
        self._outdeg[u] -= 1
        self._indeg[v] -= 1
        self._m -= 1
        self._arrays = None

    def remove_edges(self, edges: Iterable[Edge]) -> None:
        for u, v in edges:
            self.remove_edge(u, v)

    def copy(self) -> "Digraph":
        g = Digraph(self._n, simple=self.simple)
        if self._out is None:
            g._out = g._in = None
            g._arrays = self._arrays
        else:
            g._out = [dict(d) for d in self._out]
            g._in = [dict(d) for d in self._in]
        g._outdeg = list(self._outdeg)
        g._indeg = list(self._indeg)
        g._m = self._m
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._n == other._n and self.edge_multiset() == other.edge_multiset()

    def __repr__(self) -> str:
        return f"Digraph(n={self._n}, m={self._m}, simple={self.simple})"


# -- excess arithmetic --------------------------------------------------------

def excess(D: Digraph, v: int) -> int:
    """Out-degree minus in-degree at ``v``."""
    D._check_vertex(v)
    return D.out_degree(v) - D.in_degree(v)


def excess_vector(D: Digraph) -> np.ndarray:
    return np.asarray(D.out_degrees(), dtype=np.int64) - np.asarray(D.in_degrees(), dtype=np.int64)


def total_excess(D: Digraph) -> int:
    ex = excess_vector(D)
    return int(np.abs(ex).sum()) // 2


def is_eulerian(D: Digraph) -> bool:
    """Every vertex balanced; connectivity is not required."""
    return D.out_degrees() == D.in_degrees()


def is_acyclic(D: Digraph) -> bool:
    indeg = D.in_degrees()
    stack = [v for v in range(D.n) if indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v, k in D.out_neighbors(u).items():
            indeg[v] -= k
            if indeg[v] == 0:
                stack.append(v)
    return seen == D.n


def edge_counts(D: Digraph, A: Iterable[int], B: Iterable[int] | None = None) -> int:
    """Number of edges (with multiplicity) from ``A`` to ``B``.

    With ``B`` omitted, counts edges with both endpoints in ``A``.
    """
    A = set(A)
    if B is None:
        B = A
    else:
        B = set(B)
        if A & B:
            raise ValueError("edge_counts needs disjoint vertex sets")
    if not A or not B:
        return 0
    total = 0
    for u in A:
        for v, k in D.out_neighbors(u).items():
            if v in B:
                total += k
    return total


# -- partitions ---------------------------------------------------------------

@dataclass(frozen=True)
class VertexPartition:
    a_plus: frozenset
    a_minus: frozenset
    a_zero: frozenset
    _kind: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("a_plus", "a_minus", "a_zero"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.a_plus & self.a_minus or self.a_plus & self.a_zero or self.a_minus & self.a_zero:
            raise ValueError("partition classes must be pairwise disjoint")
        kind = dict.fromkeys(self.a_zero, ZERO)
        kind.update(dict.fromkeys(self.a_plus, PLUS))
        kind.update(dict.fromkeys(self.a_minus, MINUS))
        object.__setattr__(self, "_kind", kind)

    @property
    def a_dot(self) -> frozenset:
        return self.a_plus | self.a_minus

    @property
    def n(self) -> int:
        return len(self._kind)

    def kind(self, v: int) -> int:
        return self._kind[v]

    def in_dot(self, v: int) -> bool:
        return self._kind[v] != ZERO

    def covers(self, n: int) -> bool:
        return len(self._kind) == n and all(0 <= v < n for v in self._kind)


def partition_by_excess(D: Digraph, threshold: int) -> VertexPartition:
    """Split vertices by whether their excess is at least ``threshold`` in absolute value."""
    if threshold < 1:
        raise ValueError(f"threshold must be positive, got {threshold}")
    ex = excess_vector(D)
    plus = np.flatnonzero(ex >= threshold).tolist()
    minus = np.flatnonzero(ex <= -threshold).tolist()
    zero = np.flatnonzero(np.abs(ex) < threshold).tolist()
    return VertexPartition(frozenset(plus), frozenset(minus), frozenset(zero))


# -- paths and cycles ---------------------------------------------------------

def path_edges(p: Sequence[int]) -> list[Edge]:
    return [(p[i], p[i + 1]) for i in range(len(p) - 1)]


cycle_edges = path_edges


def cycle_vertices(c: Sequence[int]) -> list[int]:
    """Distinct vertices of a closed cycle tuple, in traversal order."""
    return list(c[:-1])


def is_path(p: Sequence[int]) -> bool:
    return len(p) >= 1 and len(set(p)) == len(p)


def is_cycle(c: Sequence[int]) -> bool:
    return len(c) >= 3 and c[0] == c[-1] and len(set(c[:-1])) == len(c) - 1


def count_in(vertices: Iterable[int], part: VertexPartition) -> int:
    """How many of ``vertices`` lie in A+ or A-."""
    return sum(1 for v in vertices if part.in_dot(v))

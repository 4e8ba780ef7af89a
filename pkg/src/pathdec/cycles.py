"""Cycle decomposition of Eulerian digraphs and short/medium/long classification."""

from __future__ import annotations

from dataclasses import dataclass, field

from .digraph import Cycle, Digraph, VertexPartition, count_in
from .errors import ContractViolation


@dataclass
class CycleBundle:
    cycles: list[Cycle] = field(default_factory=list)
    source_edge_count: int = 0

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)


def peel_cycles(D: Digraph) -> CycleBundle:
    """Split the edge set of an Eulerian digraph into edge-disjoint cycles.

    Walks from the lowest vertex with unused out-edges, always taking the
    unused edge with the smallest head, and cuts out a cycle as soon as the
    walk revisits a vertex.  The walk then continues from that vertex.
    Two-cycles ``(u, v, u)`` are valid cycles here.
    """
    n = D.n
    outdeg, indeg = D.out_degrees(), D.in_degrees()
    for v in range(n):
        if outdeg[v] != indeg[v]:
            raise ContractViolation(
                f"digraph is not Eulerian: vertex {v} has out-degree {outdeg[v]} and in-degree {indeg[v]}",
                vertex=v, out_degree=outdeg[v], in_degree=indeg[v])
    # per-vertex list of remaining heads (with repetition), ascending
    heads: list[list[int]] = []
    for u in range(n):
        lst = []
        for v, k in sorted(D.out_neighbors(u).items()) if outdeg[u] else ():
            lst.extend([v] * k)
        heads.append(lst)
    ptr = [0] * n
    cycles: list[Cycle] = []
    pos_in_walk = [-1] * n
    for start in range(n):
        while ptr[start] < len(heads[start]):
            walk = [start]
            pos_in_walk[start] = 0
            while walk:
                u = walk[-1]
                if ptr[u] == len(heads[u]):
                    # only happens when the walk is fully consumed back to its start
                    for w in walk:
                        pos_in_walk[w] = -1
                    walk = []
                    break
                v = heads[u][ptr[u]]
                ptr[u] += 1
                if pos_in_walk[v] >= 0:
                    i = pos_in_walk[v]
                    cyc = tuple(walk[i:]) + (v,)
                    cycles.append(cyc)
                    for w in walk[i + 1:]:
                        pos_in_walk[w] = -1
                    del walk[i + 1:]
                    if ptr[v] == len(heads[v]) and len(walk) == 1:
                        pos_in_walk[v] = -1
                        walk = []
                else:
                    pos_in_walk[v] = len(walk)
                    walk.append(v)
    return CycleBundle(cycles, D.m)


def classify_cycles(bundle, part: VertexPartition, kappa: float, N: float):
    """Split cycles into (short, medium, long) by how many vertices of A+ u A- they visit.

    short: count <= kappa; long: count >= N / kappa; medium: strictly between.
    """
    if kappa <= 0 or N <= 0:
        raise ValueError("kappa and N must be positive")
    cycles = bundle.cycles if isinstance(bundle, CycleBundle) else list(bundle)
    short, medium, long_ = [], [], []
    for c in cycles:
        cnt = count_in(c[:-1], part)
        if cnt <= kappa:
            short.append(c)
        elif cnt * kappa >= N:
            long_.append(c)
        else:
            medium.append(c)
    return short, medium, long_

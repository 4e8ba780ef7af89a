from __future__ import annotations

import itertools
import random
from collections import Counter

import pytest

from pathdec.digraph import MINUS, PLUS, ZERO, Digraph, VertexPartition, path_edges


# -- independent reference implementations -------------------------------------

def naive_pn(D: Digraph) -> int:
    """Path number by enumerating every set partition of the edges (tiny inputs only)."""
    edges = list(D.edges())
    m = len(edges)
    if m == 0:
        return 0
    best = m
    for blocks in _set_partitions(list(range(m))):
        if len(blocks) >= best:
            continue
        if all(_is_path_edge_set([edges[i] for i in b]) for b in blocks):
            best = len(blocks)
    return best


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _is_path_edge_set(es) -> bool:
    outs, ins = Counter(u for u, _ in es), Counter(v for _, v in es)
    if any(c > 1 for c in outs.values()) or any(c > 1 for c in ins.values()):
        return False
    starts = [u for u in outs if ins[u] == 0]
    if len(starts) != 1:
        return False
    nxt = dict(es)
    v, seen = starts[0], 0
    while v in nxt:
        v = nxt[v]
        seen += 1
    return seen == len(es)


def brute_min_cut(net) -> int:
    """Minimum s-t cut capacity over every 2-partition of the nodes."""
    inner = [i for i in range(net.node_count) if i not in (net.source, net.sink)]
    best = None
    for r in range(len(inner) + 1):
        for subset in itertools.combinations(inner, r):
            side = set(subset) | {net.source}
            cap = net.cut_capacity(side)
            best = cap if best is None or cap < best else best
    return best


def is_valid_path(p) -> bool:
    return len(p) >= 2 and len(set(p)) == len(p)


def random_cycle_union(n: int, k: int, rnd: random.Random, max_len: int | None = None) -> Digraph:
    """Union of ``k`` random simple cycles on ``n`` vertices (parallel edges allowed)."""
    D = Digraph(n)
    max_len = max_len or n
    for _ in range(k):
        L = rnd.randint(2, max(2, min(n, max_len)))
        vs = rnd.sample(range(n), L)
        for i in range(L):
            D.add_edge(vs[i], vs[(i + 1) % L])
    return D


def part_from_kinds(kinds: dict[int, int]) -> VertexPartition:
    return VertexPartition(
        frozenset(v for v, k in kinds.items() if k == PLUS),
        frozenset(v for v, k in kinds.items() if k == MINUS),
        frozenset(v for v, k in kinds.items() if k == ZERO),
    )


def edges_of(paths) -> Counter:
    c = Counter()
    for p in paths:
        c.update(path_edges(p))
    return c


@pytest.fixture
def rnd():
    return random.Random(12345)


# -- randomized kernel instances ------------------------------------------------

def _cycle_with_kinds(rnd, L, base=0):
    vs = list(range(base, base + L))
    rnd.shuffle(vs)
    kinds = {v: rnd.choice((PLUS, MINUS, ZERO)) for v in vs}
    return tuple(vs) + (vs[0],), kinds


def offcycle_instance(rnd):
    """Cycle plus one off-cycle reserved edge at each of two A+/A- vertices."""
    L = rnd.randint(2, 12)
    C, kinds = _cycle_with_kinds(rnd, L)
    v1, v2 = rnd.sample(C[:-1], 2)
    kinds[v1], kinds[v2] = rnd.choice((PLUS, MINUS)), rnd.choice((PLUS, MINUS))
    sub, nxt = {}, L
    for v in (v1, v2):
        if kinds[v] == PLUS:
            kinds[nxt] = MINUS
            sub[v] = [(v, nxt)]
        else:
            kinds[nxt] = PLUS
            sub[v] = [(nxt, v)]
        nxt += 1
    return C, sorted(sub), sub, part_from_kinds(kinds)


def crossing_instance(rnd):
    """Cycle with two crossing chords w->y, z->x in cyclic order w, x, y, z, and
    no reserved edge leaving the cycle."""
    L = rnd.randint(4, 14)
    C, kinds = _cycle_with_kinds(rnd, L)
    i, j, k, l = sorted(rnd.sample(range(L), 4))
    r = rnd.randrange(4)
    w, x, y, z = [C[q] for q in (i, j, k, l)[r:] + (i, j, k, l)[:r]]
    kinds[w] = kinds[z] = PLUS
    kinds[x] = kinds[y] = MINUS
    sub: dict[int, list] = {}
    for e in ((w, y), (z, x)):
        owner = rnd.choice(e)
        if owner in sub:
            owner = e[0] if owner == e[1] else e[1]
        sub.setdefault(owner, []).append(e)
    return C, sorted(sub), sub, part_from_kinds(kinds)


def pair_instance(rnd, k1, k2):
    """A cycle split at v1, v2 into P12 and P21, reserved paths at both ends
    (with decoys touching the other path listed first)."""
    L = rnd.randint(2, 12)
    C, kinds = _cycle_with_kinds(rnd, L)
    v1, v2 = rnd.sample(C[:-1], 2)
    kinds[v1], kinds[v2] = k1, k2
    pos = {v: i for i, v in enumerate(C[:-1])}
    i, j = pos[v1], pos[v2]
    P12 = [C[i]]
    while i != j:
        i = (i + 1) % L
        P12.append(C[i])
    P21 = [C[j]]
    while j != pos[v1]:
        j = (j + 1) % L
        P21.append(C[j])
    paths = {v1: P12, v2: P21}
    other = {v1: P21, v2: P12}
    sub, nxt = {}, L
    for v in (v1, v2):
        edges = []
        if kinds[v] in (PLUS, ZERO):
            bad = [u for u in other[v] if u != v and kinds[u] == MINUS]
            if bad:
                edges.append((v, bad[0]))
            kinds[nxt] = MINUS
            edges.append((v, nxt))
            nxt += 1
        if kinds[v] in (MINUS, ZERO):
            bad = [u for u in paths[v] if u != v and kinds[u] == PLUS]
            if bad:
                edges.append((bad[0], v))
            kinds[nxt] = PLUS
            edges.append((nxt, v))
            nxt += 1
        sub[v] = edges
    return tuple(P12), tuple(P21), v1, v2, sub, part_from_kinds(kinds)


def kernel_ok(res, base_edges, sub, part) -> str | None:
    """None if the kernel output is two valid (A+, A-)-paths covering exactly
    ``base_edges`` plus the consumed reserved edges, else a reason."""
    if len(res.paths) != 2:
        return "not two paths"
    for p in res.paths:
        if not is_valid_path(p):
            return f"invalid path {p}"
        if p[0] not in part.a_plus or p[-1] not in part.a_minus:
            return f"path {p} does not run from A+ to A-"
    for v, es in res.edges.items():
        if any(e not in sub.get(v, ()) for e in es):
            return f"consumed edge not reserved at {v}"
    want = Counter(base_edges)
    want.update(res.consumed())
    if edges_of(res.paths) != want:
        return "edge multiset mismatch"
    return None


# -- acceptance report ----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(idx: int, ok: bool, detail: str) -> None:
    line = f"criterion {idx}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

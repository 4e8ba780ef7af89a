"""Exact path number of tiny digraphs by exhaustive search."""

from __future__ import annotations

from .digraph import Digraph, total_excess
from .errors import OracleCapExceeded

DEFAULT_EDGE_CAP = 14


def brute_force_pn(D: Digraph, *, edge_cap: int = DEFAULT_EDGE_CAP) -> int:
    """Minimum number of edge-disjoint paths covering every edge of ``D``.

    Branches on the lowest-numbered remaining edge: some path of an optimal
    decomposition contains it, so every path through that edge is tried and
    the rest is solved recursively (memoized on the set of remaining edges).
    A branch is cut when it cannot beat the best answer so far, and the
    search at a node stops once it meets the lower bound
    ``sum over weak components of max(excess, 1, ceil(edges / (vertices - 1)))``.
    """
    if D.m > edge_cap:
        raise OracleCapExceeded(f"digraph has {D.m} edges, oracle cap is {edge_cap}")
    edges = list(D.edges())
    if not edges:
        return 0
    n = D.n
    m = len(edges)
    out_at = [[] for _ in range(n)]   # edge ids leaving each vertex
    in_at = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        out_at[u].append(i)
        in_at[v].append(i)

    def components(mask: int) -> list[tuple[int, int]]:
        """Weak components of the edge set: (edge mask, lower bound) pairs.

        The bound of a component is the largest of its excess, 1, and
        ``ceil(edges / (vertices - 1))`` since a path has at most
        ``vertices - 1`` edges.
        """
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ids = []
        mm = mask
        while mm:
            low = mm & -mm
            i = low.bit_length() - 1
            mm ^= low
            ids.append(i)
            u, v = edges[i]
            parent.setdefault(u, u)
            parent.setdefault(v, v)
            parent[find(u)] = find(v)
        groups: dict[int, list] = {}
        for i in ids:
            r = find(edges[i][0])
            g = groups.setdefault(r, [0, {}, 0])
            g[0] |= 1 << i
            u, v = edges[i]
            g[1][u] = g[1].get(u, 0) + 1
            g[1][v] = g[1].get(v, 0) - 1
            g[2] += 1
        out = []
        for cm, exc, ne in groups.values():
            ex = sum(x for x in exc.values() if x > 0)
            nv = len(exc)
            out.append((cm, max(ex, 1, -(-ne // (nv - 1)))))
        return out

    def lower_bound(mask: int) -> int:
        return sum(lb for _, lb in components(mask)) if mask else 0

    def paths_through(mask: int, e0: int) -> list[int]:
        """Edge masks of every path inside ``mask`` that contains edge ``e0``."""
        a, b = edges[e0]
        forwards: list[tuple[int, frozenset]] = []

        def fwd(v, used, seen):
            forwards.append((used, seen))
            for i in out_at[v]:
                if mask >> i & 1 and not used >> i & 1:
                    w = edges[i][1]
                    if w not in seen:
                        fwd(w, used | 1 << i, seen | {w})

        fwd(b, 1 << e0, frozenset((a, b)))
        result = []

        def back(v, used, seen):
            result.append(used)
            for i in in_at[v]:
                if mask >> i & 1 and not used >> i & 1:
                    x = edges[i][0]
                    if x not in seen:
                        back(x, used | 1 << i, seen | {x})

        for used, seen in forwards:
            back(a, used, seen)
        return result

    memo: dict[int, tuple[int, bool]] = {}   # mask -> (bound, exact?)

    def solve(mask: int, budget: int) -> int:
        """pn of ``mask`` if it is below ``budget``, otherwise some value >= budget."""
        if mask == 0:
            return 0
        comps = components(mask)
        if len(comps) > 1:
            total_lb = sum(lb for _, lb in comps)
            if total_lb >= budget:
                return total_lb
            total = 0
            for idx, (cm, lb) in enumerate(comps):
                rest_lb = sum(l2 for _, l2 in comps[idx + 1:])
                val = solve_connected(cm, lb, budget - total - rest_lb)
                total += val
                if total + rest_lb >= budget:
                    return total + rest_lb
            return total
        return solve_connected(mask, comps[0][1], budget)

    def solve_connected(mask: int, lb: int, budget: int) -> int:
        known = memo.get(mask)
        if known is not None:
            val, exact = known
            if exact or val >= budget:
                return val
            lb = max(lb, val)
        if lb >= budget:
            return lb
        e0 = (mask & -mask).bit_length() - 1
        best = budget
        options = []
        for pm in paths_through(mask, e0):
            rest = mask & ~pm
            options.append((lower_bound(rest), -bin(pm).count("1"), rest))
        options.sort()
        for rlb, _, rest in options:
            if 1 + rlb >= best:
                break
            val = 1 + solve(rest, best - 1)
            if val < best:
                best = val
                if best == lb:
                    break
        if best < budget:
            memo[mask] = (best, True)
        else:
            memo[mask] = (max(budget, lb), False)
        return best

    full = (1 << m) - 1
    return solve(full, m + 1)


def is_consistent(D: Digraph, *, edge_cap: int = DEFAULT_EDGE_CAP) -> bool:
    return brute_force_pn(D, edge_cap=edge_cap) == total_excess(D)

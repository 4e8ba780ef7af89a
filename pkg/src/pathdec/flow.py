"""Integer maximum flow (BFS-layered augmenting paths) and the cycle-to-vertex
assignment networks used by the absorption procedures."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

SOURCE, SINK = "s", "t"


class FlowNetwork:
    """Directed network with integer capacities.

    Nodes are arbitrary hashable labels, numbered in insertion order; arcs
    are kept in insertion order, and that order drives every traversal.
    """

    def __init__(self, source: Hashable = SOURCE, sink: Hashable = SINK):
        self.labels: list[Hashable] = []
        self.index: dict[Hashable, int] = {}
        self.arcs: list[tuple[int, int, int]] = []
        self.source = self.add_node(source)
        self.sink = self.add_node(sink)

    def add_node(self, label: Hashable) -> int:
        if label in self.index:
            return self.index[label]
        self.index[label] = len(self.labels)
        self.labels.append(label)
        return self.index[label]

    def add_arc(self, tail: Hashable, head: Hashable, cap: int) -> int:
        if cap < 0 or int(cap) != cap:
            raise ValueError(f"capacity must be a non-negative integer, got {cap}")
        u, v = self.add_node(tail), self.add_node(head)
        if v == self.source or u == self.sink:
            raise ValueError("source may not have in-arcs and sink may not have out-arcs")
        self.arcs.append((u, v, int(cap)))
        return len(self.arcs) - 1

    @property
    def node_count(self) -> int:
        return len(self.labels)

    def cut_capacity(self, side: set[int]) -> int:
        """Capacity of arcs leaving the node-index set ``side``."""
        return sum(c for u, v, c in self.arcs if u in side and v not in side)


@dataclass
class IntegerFlow:
    flow: list[int]
    value: int


def max_flow(net: FlowNetwork) -> IntegerFlow:
    """Dinic's algorithm; every arc flow is an integer."""
    nn = net.node_count
    # residual arcs: 2i forward, 2i+1 backward
    head, cap = [], []
    adj: list[list[int]] = [[] for _ in range(nn)]
    for u, v, c in net.arcs:
        adj[u].append(len(head))
        head.append(v)
        cap.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap.append(0)
    s, t = net.source, net.sink
    value = 0
    while True:
        level = [-1] * nn
        level[s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[head[a]] < 0:
                    level[head[a]] = level[u] + 1
                    dq.append(head[a])
        if level[t] < 0:
            break
        it = [0] * nn
        while True:
            pushed = _blocking_path(s, t, adj, head, cap, level, it)
            if not pushed:
                break
            value += pushed
    flow = [cap[2 * i + 1] for i in range(len(net.arcs))]
    return IntegerFlow(flow, value)


def _blocking_path(s, t, adj, head, cap, level, it) -> int:
    """Find one augmenting path in the level graph and push its bottleneck."""
    stack: list[int] = []  # residual arc indices along the current path
    u = s
    while True:
        if u == t:
            bottleneck = min(cap[a] for a in stack)
            for a in stack:
                cap[a] -= bottleneck
                cap[a ^ 1] += bottleneck
            return bottleneck
        advanced = False
        while it[u] < len(adj[u]):
            a = adj[u][it[u]]
            v = head[a]
            if cap[a] > 0 and level[v] == level[u] + 1:
                stack.append(a)
                u = v
                advanced = True
                break
            it[u] += 1
        if not advanced:
            if u == s:
                return 0
            level[u] = -1  # dead end
            a = stack.pop()
            u = head[a ^ 1]
            it[u] += 1


def residual_reachable(net: FlowNetwork, flow: IntegerFlow) -> set:
    """Labels of nodes reachable from the source in the residual network."""
    nn = net.node_count
    adj: list[list[int]] = [[] for _ in range(nn)]
    for (u, v, c), f in zip(net.arcs, flow.flow):
        if f < c:
            adj[u].append(v)
        if f > 0:
            adj[v].append(u)
    seen = [False] * nn
    seen[net.source] = True
    dq = deque([net.source])
    while dq:
        u = dq.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                dq.append(v)
    return {net.labels[i] for i in range(nn) if seen[i]}


def check_flow(net: FlowNetwork, flow: IntegerFlow) -> None:
    """Raise ValueError unless ``flow`` is a feasible integer flow of its stated value."""
    bal = [0] * net.node_count
    for (u, v, c), f in zip(net.arcs, flow.flow):
        if int(f) != f or not 0 <= f <= c:
            raise ValueError(f"arc {net.labels[u]}->{net.labels[v]} carries {f} outside [0, {c}]")
        bal[u] -= f
        bal[v] += f
    for i, b in enumerate(bal):
        if i not in (net.source, net.sink) and b:
            raise ValueError(f"conservation fails at {net.labels[i]}")
    if -bal[net.source] != flow.value:
        raise ValueError("flow value differs from net outflow of the source")


# -- assignment networks ------------------------------------------------------

def _lookup(x, key):
    if isinstance(x, Mapping):
        return x[key]
    if callable(x):
        return x(key)
    return x


def build_fp(cycles: Sequence[Sequence[int]], g, h) -> FlowNetwork:
    """Assignment network: source -> cycle node (cap g), cycle -> each of its
    vertices (cap 1), vertex -> sink (cap h).

    ``g`` is keyed by cycle index and ``h`` by vertex; either may also be a
    constant or a callable.  Cycles are closed vertex tuples.  Node labels
    are ``"s"``, ``"t"``, ``("C", i)`` and ``("v", b)``.
    """
    net = FlowNetwork()
    vsets = [sorted(set(c[:-1])) for c in cycles]
    for i in range(len(cycles)):
        net.add_arc(SOURCE, ("C", i), _lookup(g, i))
    allv = sorted(set().union(*vsets)) if vsets else []
    for b in allv:
        net.add_node(("v", b))
    for i, vs in enumerate(vsets):
        for b in vs:
            net.add_arc(("C", i), ("v", b), 1)
    for b in allv:
        net.add_arc(("v", b), SINK, _lookup(h, b))
    return net


def decompose_unit_flows(net: FlowNetwork, flow: IntegerFlow) -> list[tuple[int, int]]:
    """(cycle index, vertex) pairs carried by the unit cycle-to-vertex arcs."""
    out = []
    for (u, v, _c), f in zip(net.arcs, flow.flow):
        lu, lv = net.labels[u], net.labels[v]
        if f and isinstance(lu, tuple) and lu[0] == "C" and isinstance(lv, tuple) and lv[0] == "v":
            out.extend([(lu[1], lv[1])] * f)
    return out


def min_cut_side(net: FlowNetwork, flow: IntegerFlow) -> set:
    """Source side of a minimum cut (labels), given a maximum flow."""
    return residual_reachable(net, flow)

"""Absorbing cycles into reserved structure edges.

The two kernels turn a cycle (or a pair of opposite paths between two
vertices) plus one or two reserved paths per endpoint into exactly two
(A+, A-)-paths.  The three procedures drive the kernels over collections of
long, medium and short cycles while tracking which reserved edges are still
free.

Paths are vertex tuples, cycles are closed vertex tuples.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .absorber import AbsorbingStructure, AvailabilityLedger
from .cycles import peel_cycles
from .digraph import MINUS, PLUS, ZERO, Cycle, Digraph, Edge, Path, VertexPartition, count_in, path_edges
from .errors import AbsorptionError, ContractViolation
from .flow import build_fp, decompose_unit_flows, max_flow, residual_reachable


@dataclass(frozen=True)
class Breach:
    """A precondition that did not hold at run time."""
    lemma: str
    condition: str
    witness: dict = field(default_factory=dict)
    fatal: bool = True

    def text(self) -> str:
        wit = " ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.lemma}: {self.condition}" + (f" [{wit}]" if wit else "")


@dataclass
class KernelResult:
    paths: tuple[Path, Path]
    edges: dict[int, list[Edge]]   # owner vertex -> reserved edges used
    case: str

    @property
    def owners(self) -> tuple[int, ...]:
        return tuple(self.edges)

    def consumed(self) -> list[Edge]:
        return [e for es in self.edges.values() for e in es]


@dataclass
class AbsorptionOutcome:
    new_paths: list[Path] = field(default_factory=list)
    consumed_structure_edges: list[Edge] = field(default_factory=list)
    leftover_cycles: list[Cycle] = field(default_factory=list)
    breaches: list[Breach] = field(default_factory=list)
    rounds: int = 0


# -- cycle helpers ------------------------------------------------------------

def _arc(C: Sequence[int], i: int, j: int) -> list[int]:
    """Vertices of closed cycle C from position i forward to position j (inclusive)."""
    L = len(C) - 1
    out = [C[i]]
    while i != j:
        i = (i + 1) % L
        out.append(C[i])
    return out


def _positions(C: Sequence[int]) -> dict[int, int]:
    return {v: i for i, v in enumerate(C[:-1])}


def _edge_text(edges) -> str:
    return ",".join(f"{u}>{w}" for u, w in edges) or "-"


# -- kernels ------------------------------------------------------------------

def absorb_one_cycle(C: Cycle, S, sub: dict[int, list[Edge]], part: VertexPartition) -> KernelResult:
    """Merge cycle ``C`` with one reserved edge at each of two vertices of ``S``.

    ``sub[v]`` lists the reserved edges usable at ``v`` (edges from ``v``
    into A- if ``v`` is in A+, from A+ into ``v`` if ``v`` is in A-).  First
    looks for two vertices whose reserved edges leave the cycle; failing
    that, for two reserved chords whose endpoints alternate around ``C``.
    Vertices are tried in ascending order.
    """
    pos = _positions(C)
    order = sorted(v for v in S if v in pos)
    off: list[tuple[int, Edge]] = []
    for v in order:
        for e in sub.get(v, ()):
            other = e[1] if e[0] == v else e[0]
            if other not in pos:
                off.append((v, e))
                break
        if len(off) == 2:
            break
    if len(off) == 2:
        (v1, e1), (v2, e2) = off
        i1, i2 = pos[v1], pos[v2]
        P, Pp = _arc(C, i1, i2), _arc(C, i2, i1)

        def plus_minus(v, e):
            if e[0] == v:   # v in A+, e = v x
                return [v, e[1]], [v]
            return [v], [e[0], v]

        p1p, p1m = plus_minus(v1, e1)
        p2p, p2m = plus_minus(v2, e2)
        path1 = tuple(p1m[:-1] + P + p2p[1:])
        path2 = tuple(p2m[:-1] + Pp + p1p[1:])
        return KernelResult((path1, path2), {v1: [e1], v2: [e2]}, "off-cycle")

    chords = [(v, e) for v in order for e in sub.get(v, ()) if e[0] in pos and e[1] in pos]
    L = len(C) - 1

    def between(x, a, b):
        return 0 < (x - a) % L < (b - a) % L

    for i, (va, ea) in enumerate(chords):
        a, b = pos[ea[0]], pos[ea[1]]
        for vb, eb in chords[i + 1:]:
            if vb == va:
                continue
            c, d = pos[eb[0]], pos[eb[1]]
            if len({a, b, c, d}) < 4 or between(c, a, b) == between(d, a, b):
                continue
            if between(d, a, b):
                w, y, z, x = a, b, c, d
            else:
                w, y, z, x = c, d, a, b
            path1 = (C[w],) + tuple(_arc(C, y, z)) + (C[x],)
            path2 = tuple(_arc(C, z, y))
            return KernelResult((path1, path2), {va: [ea], vb: [eb]}, "crossing")

    counts = {v: len(sub.get(v, ())) for v in order}
    raise ContractViolation(
        "no off-cycle pair and no crossing pair of reserved edges for this cycle",
        cycle_length=L, candidates=counts)


def absorb_pair(P12: Path, P21: Path, v1: int, v2: int, sub: dict[int, list[Edge]],
                part: VertexPartition) -> KernelResult:
    """Merge a (v1, v2)-path and an edge-disjoint (v2, v1)-path with reserved
    paths at ``v1`` and ``v2`` into two (A+, A-)-paths.

    At an A+ vertex one out-edge is used, at an A- vertex one in-edge, at an
    A0 vertex one of each.  An out-edge of ``v_i`` must avoid the other
    path's vertices and an in-edge must avoid ``P_i``'s own vertices.
    """
    if v1 == v2:
        raise ContractViolation("absorb_pair needs two distinct vertices", vertex=v1)
    if P12[0] != v1 or P12[-1] != v2 or P21[0] != v2 or P21[-1] != v1:
        raise ContractViolation("paths do not run between the given vertices",
                                p12=P12, p21=P21, v1=v1, v2=v2)
    paths = {1: P12, 2: P21}
    vs = {1: v1, 2: v2}
    plus: dict[int, list[int]] = {}
    minus: dict[int, list[int]] = {}
    used: dict[int, list[Edge]] = {}
    for i in (1, 2):
        v = vs[i]
        own, other = set(paths[i]), set(paths[3 - i])
        kind = part.kind(v)
        edges = sub.get(v, ())
        plus[i], minus[i], used[i] = [v], [v], []
        if kind in (PLUS, ZERO):
            e = next((e for e in edges if e[0] == v and e[1] not in other), None)
            if e is None:
                raise ContractViolation(f"no usable reserved out-edge at {v}", vertex=v,
                                        candidates=sum(1 for e in edges if e[0] == v))
            plus[i] = [v, e[1]]
            used[i].append(e)
        if kind in (MINUS, ZERO):
            e = next((e for e in edges if e[1] == v and e[0] not in own), None)
            if e is None:
                raise ContractViolation(f"no usable reserved in-edge at {v}", vertex=v,
                                        candidates=sum(1 for e in edges if e[1] == v))
            minus[i] = [e[0], v]
            used[i].append(e)
    P = tuple(minus[1][:-1] + list(P12) + plus[2][1:])
    Pp = tuple(minus[2][:-1] + list(P21) + plus[1][1:])
    return KernelResult((P, Pp), {v1: used[1], v2: used[2]}, "pair")


# -- long cycles --------------------------------------------------------------

def absorb_long(cycles: Sequence[Cycle], structure: AbsorbingStructure, part: VertexPartition,
                kappa: int, *, strict: bool = True, trace: Callable[[str], None] | None = None,
                ledger: AvailabilityLedger | None = None) -> AbsorptionOutcome:
    """Absorb each cycle into two reserved edges, one cycle at a time.

    A vertex is usable for a cycle while it still has ``kappa + 2`` free
    reserved edges.  Leftover reserved edges become single-edge paths.
    """
    ledger = ledger or AvailabilityLedger(structure, part, kappa)
    out = AbsorptionOutcome()
    for idx, C in enumerate(cycles):
        dot = [v for v in C[:-1] if part.in_dot(v)]
        ell = len(dot)
        if strict:
            S = [v for v in dot if v in ledger and ledger.a(v) >= kappa + 2]
            if len(S) * kappa < ell + kappa:   # |S| >= ell/kappa + 1
                raise AbsorptionError(
                    f"cycle {idx}: only {len(S)} usable vertices, need ell/kappa + 1 with ell={ell}",
                    lemma="long-absorption", cycle=idx, usable=len(S), ell=ell)
            sub = ledger.substructure(S, kappa + 2)
        else:
            S = [v for v in dot if v in ledger and ledger.a(v) >= 1]
            sub = ledger.substructure(S)
        res = _run_cycle_kernel(C, S, sub, part, idx, "long-absorption")
        _commit(res, ledger, out, trace, "long", str(idx))
    out.new_paths.extend(ledger.remaining_paths())
    return out


def _run_cycle_kernel(C, S, sub, part, idx, lemma) -> KernelResult:
    try:
        return absorb_one_cycle(C, S, sub, part)
    except ContractViolation as exc:
        raise AbsorptionError(f"cycle {idx}: {exc}", lemma=lemma, cycle=idx, **exc.details) from None


def _commit(res: KernelResult, ledger: AvailabilityLedger, out: AbsorptionOutcome,
            trace, kind: str, cid: str) -> None:
    for v, es in res.edges.items():
        ledger.consume(v, es)
    out.new_paths.extend(res.paths)
    out.consumed_structure_edges.extend(res.consumed())
    if trace is not None:
        v1, v2 = res.owners
        trace(f"{kind} cycle={cid} v1={v1} v2={v2} edges={_edge_text(res.consumed())}")


# -- medium cycles ------------------------------------------------------------

def project_cycle(C: Cycle, part: VertexPartition) -> Cycle:
    """The cycle's A+ u A- vertices in cyclic order, as a closed tuple."""
    vs = [v for v in C[:-1] if part.in_dot(v)]
    return tuple(vs) + (vs[0],) if vs else ()


def medium_quota(ell: int, kappa: int) -> int:
    """ceil(ell / kappa) + 1, in exact integer arithmetic."""
    return -(-ell // kappa) + 1


def absorb_medium(cycles: Sequence[Cycle], structure: AbsorbingStructure, part: VertexPartition,
                  kappa: int, *, strict: bool = True, trace: Callable[[str], None] | None = None,
                  ledger: AvailabilityLedger | None = None) -> AbsorptionOutcome:
    """Assign each cycle ``ceil(ell/kappa) + 1`` of its vertices by a max-flow in
    which every vertex serves at most ``kappa`` cycles, then absorb each cycle
    through its assigned vertices."""
    ledger = ledger or AvailabilityLedger(structure, part, kappa)
    out = AbsorptionOutcome()
    if not cycles:
        out.new_paths.extend(ledger.remaining_paths())
        return out
    aux = [project_cycle(C, part) for C in cycles]
    g = {i: medium_quota(len(a) - 1, kappa) for i, a in enumerate(aux)}
    net = build_fp(aux, g, kappa)
    flow = max_flow(net)
    need = sum(g.values())
    if flow.value < need:
        side = residual_reachable(net, flow)
        witness = dict(flow=flow.value, required=need,
                       cut_cycles=sorted(lab[1] for lab in side if isinstance(lab, tuple) and lab[0] == "C"),
                       cut_vertices=sorted(lab[1] for lab in side if isinstance(lab, tuple) and lab[0] == "v"))
        if strict:
            raise AbsorptionError(f"assignment flow {flow.value} < {need}: not saturating",
                                  lemma="medium-absorption", **witness)
        out.breaches.append(Breach("medium-absorption", "assignment flow saturates every cycle",
                                   dict(flow=flow.value, required=need), fatal=False))
    assigned: dict[int, list[int]] = {i: [] for i in range(len(cycles))}
    for i, v in decompose_unit_flows(net, flow):
        assigned[i].append(v)
    for idx, C in enumerate(cycles):
        V_C = sorted(assigned[idx])
        if strict:
            short = [v for v in V_C if ledger.a(v) < kappa + 2]
            if short:
                raise AbsorptionError(f"cycle {idx}: assigned vertex {short[0]} has fewer than kappa+2 free edges",
                                      lemma="medium-absorption", cycle=idx, vertex=short[0],
                                      available=ledger.a(short[0]))
            res = _run_cycle_kernel(C, V_C, ledger.substructure(V_C, kappa + 2), part, idx,
                                    "medium-absorption")
        else:
            S = [v for v in V_C if v in ledger and ledger.a(v) >= 1]
            try:
                res = absorb_one_cycle(C, S, ledger.substructure(S), part)
            except ContractViolation:
                S = sorted(v for v in C[:-1] if part.in_dot(v) and v in ledger and ledger.a(v) >= 1)
                res = _run_cycle_kernel(C, S, ledger.substructure(S), part, idx, "medium-absorption")
        _commit(res, ledger, out, trace, "medium", str(idx))
    out.new_paths.extend(ledger.remaining_paths())
    return out


# -- short cycles -------------------------------------------------------------

@dataclass
class RoundState:
    q_paths: list[Path]
    ledger: AvailabilityLedger
    working: list[Cycle]
    promoted: list[Cycle]
    round: int = 0

    def edge_multiset(self) -> Counter:
        total: Counter = Counter()
        for p in self.q_paths:
            total.update(path_edges(p))
        total.update(self.ledger.remaining_edges())
        for C in self.working:
            total.update(path_edges(C))
        for C in self.promoted:
            total.update(path_edges(C))
        return total


def _cycle_split(C: Cycle, v1: int, v2: int) -> tuple[Path, Path]:
    pos = _positions(C)
    i, j = pos[v1], pos[v2]
    return tuple(_arc(C, i, j)), tuple(_arc(C, j, i))


def _walk_pair(C1: Cycle, C2: Cycle, v1: int, v2: int):
    """The two walks v1 C1 v1' C2 v2 and v2 C2 v2' C1 v1 plus the leftover edges."""
    p1, p2 = _positions(C1), _positions(C2)
    L1, L2 = len(C1) - 1, len(C2) - 1

    def first_common(C, pos, L, start, other):
        i = pos[start]
        while C[i] not in other:
            i = (i + 1) % L
        return C[i]

    v1p = first_common(C1, p1, L1, v1, p2)
    v2p = first_common(C2, p2, L2, v2, p1)
    P12 = tuple(_arc(C1, p1[v1], p1[v1p])) + tuple(_arc(C2, p2[v1p], p2[v2]))[1:]
    P21 = tuple(_arc(C2, p2[v2], p2[v2p])) + tuple(_arc(C1, p1[v2p], p1[v1]))[1:]
    rest = Counter(path_edges(C1)) + Counter(path_edges(C2))
    rest.subtract(path_edges(P12))
    rest.subtract(path_edges(P21))
    return P12, P21, [e for e, k in sorted(rest.items()) for _ in range(k)]


def absorb_short(cycles: Sequence[Cycle], structure: AbsorbingStructure, part: VertexPartition,
                 kappa: int, *, c_prime: float = 1.0, strict: bool = True,
                 trace: Callable[[str], None] | None = None, max_rounds: int = 1000) -> AbsorptionOutcome:
    """Absorb cycles that visit at most ``kappa`` vertices of A+ u A-.

    Works in rounds.  Each round assigns up to two vertices to every working
    cycle by a max-flow (two per cycle, ``kappa`` per vertex), absorbs the
    cycles holding two vertices unreachable in the residual network, merges
    pairs of one-vertex cycles that meet only inside the reachable set,
    and re-peels everything else into cycles for the next round.  Re-peeled
    cycles visiting more than ``kappa`` vertices of A+ u A- are handed back
    as ``leftover_cycles``.  Free reserved paths are emitted at the end.
    """
    ledger = AvailabilityLedger(structure, part, kappa)
    out = AbsorptionOutcome()
    state = RoundState([], ledger, list(cycles), [])
    initial = state.edge_multiset()
    n_total = part.n

    def fail(msg, **w):
        raise AbsorptionError(f"round {state.round}: {msg}", lemma="short-absorption",
                              round=state.round, **w)

    def note(condition, fatal, **w):
        b = Breach("short-absorption", condition, dict(round=state.round, **w), fatal=fatal and strict)
        out.breaches.append(b)
        if b.fatal:
            fail(condition, **w)

    while state.working:
        state.round += 1
        if state.round > max_rounds:
            fail("round limit reached")
        C_list = state.working
        VC = sorted(set(v for C in C_list for v in C[:-1]))
        n_prime = len(VC)
        edges_before = sum(len(C) - 1 for C in C_list)
        # invariant (c): cycle count against c' n' ln n'
        if n_prime > 1 and len(C_list) > c_prime * n_prime * math.log(n_prime):
            note("|C| <= c' n' ln n'", fatal=False, cycles=len(C_list), n_prime=n_prime)
        # invariant (e)
        dplus = Counter(v for C in C_list for v in C[:-1])
        for v in VC:
            r = ledger.r(v)
            if not (dplus[v] <= r or r == kappa):
                note("d+(v) <= r(v) or r(v) = kappa", fatal=True, vertex=v, dplus=dplus[v], r=r)
                break

        if strict:
            h = kappa
        else:
            h = {v: min(kappa, max(ledger.r(v), 0)) for v in VC}
        net = build_fp(C_list, 2, h)
        flow = max_flow(net)
        reach = residual_reachable(net, flow)
        T = {lab[1] for lab in reach if isinstance(lab, tuple) and lab[0] == "v"}
        if 2 * len(T) > n_prime:
            note("|T| <= n'/2", fatal=True, T=len(T), n_prime=n_prime)
        assigned: dict[int, list[int]] = {i: [] for i in range(len(C_list))}
        for i, v in decompose_unit_flows(net, flow):
            assigned[i].append(v)
        tprime = {i: sorted(v for v in vs if v not in T) for i, vs in assigned.items()}

        residual: Counter = Counter()
        done = [False] * len(C_list)

        def sub_for(vertices, k):
            if strict:
                for v in vertices:
                    if ledger.a(v) < k + 1:
                        fail(f"vertex {v} has {ledger.a(v)} free reserved paths, needs {k + 1}",
                             vertex=v, available=ledger.a(v))
                return _truncated_sub(ledger, vertices, k + 1)
            return ledger.substructure(vertices)

        # cycles holding two unreachable vertices
        for i, C in enumerate(C_list):
            if len(tprime[i]) != 2:
                continue
            v1, v2 = tprime[i]
            P12, P21 = _cycle_split(C, v1, v2)
            try:
                res = absorb_pair(P12, P21, v1, v2, sub_for((v1, v2), kappa), part)
            except ContractViolation as exc:
                if strict:
                    fail(f"cycle {i}: {exc}", cycle=i, **exc.details)
                continue
            _commit(res, ledger, out, trace, "short2", f"r{state.round}.{i}")
            done[i] = True

        # pairs of one-vertex cycles meeting only inside T
        ones = [i for i in range(len(C_list)) if len(tprime[i]) == 1]
        vsets = {i: set(C_list[i][:-1]) for i in ones}
        alive = set(ones)
        merged = True
        while merged:
            merged = False
            order = sorted(alive)
            for a_i, i in enumerate(order):
                for j in order[a_i + 1:]:
                    common = vsets[i] & vsets[j]
                    if not common or not common <= T:
                        continue
                    v1, v2 = tprime[i][0], tprime[j][0]
                    P12, P21, rest = _walk_pair(C_list[i], C_list[j], v1, v2)
                    try:
                        res = absorb_pair(P12, P21, v1, v2, sub_for((v1, v2), 2 * kappa), part)
                    except ContractViolation as exc:
                        if strict:
                            fail(f"cycles {i},{j}: {exc}", cycle=i, other=j, **exc.details)
                        continue
                    _commit(res, ledger, out, trace, "short1", f"r{state.round}.{i}+{j}")
                    residual.update(rest)
                    done[i] = done[j] = True
                    alive.discard(i)
                    alive.discard(j)
                    merged = True
                    break
                if merged:
                    break

        for i, C in enumerate(C_list):
            if not done[i]:
                residual.update(path_edges(C))
        R = Digraph(n_total)
        for (u, w), k in sorted(residual.items()):
            for _ in range(k):
                R.add_edge(u, w)
        new_cycles = peel_cycles(R).cycles
        state.working = []
        for C in new_cycles:
            (state.promoted if count_in(C[:-1], part) > kappa else state.working).append(C)
        state.q_paths = out.new_paths

        if state.edge_multiset() != initial:
            fail("edge bookkeeping broken: Q + free structure + cycles != input")
        n_after = len({x for e, k in residual.items() if k > 0 for x in e})
        if n_after >= n_prime and R.m:
            note("|V(R)| < |V(C)|", fatal=True, before=n_prime, after=n_after)
        edges_after = R.m
        if edges_after >= edges_before:
            fail("no progress: no cycle could be absorbed this round",
                 cycles=len(C_list), edges=edges_before)

    out.rounds = state.round
    out.leftover_cycles = list(state.promoted)
    out.new_paths.extend(ledger.remaining_paths())
    return out


def _truncated_sub(ledger: AvailabilityLedger, vertices, k: int) -> dict[int, list[Edge]]:
    """First ``k`` free reserved paths at each vertex (both halves at A0 vertices)."""
    sub = {}
    for v in vertices:
        edges = ledger.edges(v)
        if ledger.part.kind(v) == ZERO:
            ins = [e for e in edges if e[1] == v][:k]
            outs = [e for e in edges if e[0] == v][:k]
            sub[v] = ins + outs
        else:
            sub[v] = edges[:k]
    return sub

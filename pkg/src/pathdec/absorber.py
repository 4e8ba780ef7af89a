"""Absorbing structures: reserved (A+, A-)-paths of length one or two hung on
each vertex of a domain, plus the ledger that tracks which are still unused.

For ``z`` in A+ the structure holds ``t`` edges from ``z`` into A-; for ``z``
in A- it holds ``t`` edges from A+ into ``z``; for ``z`` in A0 it holds ``t``
edges from A+ into ``z`` and ``t`` edges from ``z`` into A-, paired up into
``t`` two-edge paths through ``z``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from . import rng as rngmod
from .digraph import MINUS, PLUS, ZERO, Digraph, Edge, Path, VertexPartition
from .errors import AbsorptionError, ContractViolation, StructureBuildError
from .flow import SINK, SOURCE, FlowNetwork, max_flow


@dataclass
class AbsorbingStructure:
    t: int
    f: dict[int, list[Edge]] = field(default_factory=dict)

    @property
    def z(self) -> set[int]:
        return set(self.f)

    def e_ab(self) -> Counter:
        out: Counter = Counter()
        for edges in self.f.values():
            out.update(edges)
        return out

    def edge_list(self) -> list[Edge]:
        return [e for v in sorted(self.f) for e in self.f[v]]

    def incidence(self) -> Counter:
        """Number of structure edges touching each vertex."""
        inc: Counter = Counter()
        for edges in self.f.values():
            for u, w in edges:
                inc[u] += 1
                inc[w] += 1
        return inc

    def lines(self) -> list[str]:
        return [f"{v}: " + " ".join(f"{u}>{w}" for u, w in self.f[v]) for v in sorted(self.f)]

    def text(self) -> str:
        return f"t {self.t}\n" + "".join(line + "\n" for line in self.lines())

    @classmethod
    def parse(cls, text: str) -> "AbsorbingStructure":
        rows = [r for r in text.splitlines() if r.strip()]
        t = int(rows[0].split()[1])
        f = {}
        for row in rows[1:]:
            v, _, rest = row.partition(":")
            f[int(v)] = [tuple(int(x) for x in tok.split(">")) for tok in rest.split()]
        return cls(t, f)


# -- validation ---------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_structure(s: AbsorbingStructure, D: Digraph, part: VertexPartition) -> ValidationReport:
    """Check the four defining conditions and that every edge lies in ``D``."""
    problems: list[str] = []
    t = s.t
    for z in sorted(s.f):
        edges = s.f[z]
        k = part.kind(z)
        if k == PLUS:
            bad = [e for e in edges if e[0] != z or part.kind(e[1]) != MINUS]
            if bad or len(edges) != t:
                problems.append(f"A1 z={z} size={len(edges)} t={t} bad={bad[:3]}")
        elif k == MINUS:
            bad = [e for e in edges if e[1] != z or part.kind(e[0]) != PLUS]
            if bad or len(edges) != t:
                problems.append(f"A2 z={z} size={len(edges)} t={t} bad={bad[:3]}")
        else:
            ins = [e for e in edges if e[1] == z and part.kind(e[0]) == PLUS]
            outs = [e for e in edges if e[0] == z and part.kind(e[1]) == MINUS]
            if len(ins) != t or len(outs) != t or len(ins) + len(outs) != len(edges):
                problems.append(f"A3 z={z} in={len(ins)} out={len(outs)} size={len(edges)} t={t}")
    # A4: the f-sets must be pairwise disjoint (as a multiset no copy may be
    # claimed twice beyond what the digraph holds)
    owner: dict[Edge, list[int]] = {}
    for z, edges in s.f.items():
        for e in edges:
            owner.setdefault(e, []).append(z)
    eab = s.e_ab()
    for e, cnt in sorted(eab.items()):
        have = D.multiplicity(*e) if 0 <= e[0] < D.n and 0 <= e[1] < D.n else 0
        if have == 0:
            problems.append(f"membership edge={e[0]}>{e[1]} not in digraph")
        elif cnt > have:
            problems.append(f"A4 edge={e[0]}>{e[1]} claimed by {sorted(owner[e])} but multiplicity {have}")
    return ValidationReport(not problems, problems)


# -- construction -------------------------------------------------------------

def _np_estimate(D: Digraph, p: float | None) -> float:
    if p is not None:
        return D.n * p
    return D.m / max(D.n - 1, 1)


def build_dotA_structure(D: Digraph, part: VertexPartition, kappa: int, seed: int, *,
                         t: int | None = None, p: float | None = None,
                         incidence_cap=None, forbidden: Counter | None = None,
                         attempts: int = 20) -> AbsorbingStructure:
    """Reserve ``t = 12 kappa`` edges between A+ and A- for every vertex of A+ u A-.

    Each attempt keeps every A+ -> A- edge with probability
    ``min(1, 120 kappa / np)``, assigns kept edges to a random endpoint, lets
    each vertex take its first ``t`` assigned edges in ascending
    (head, tail) order, and then tops up short vertices from unused edges,
    preferring partners with the lowest current load.  If every attempt
    leaves a vertex short, an exact flow-based assignment is tried on a
    fresh subsample and then on all candidates.  ``incidence_cap``
    (default ``150 kappa``; an int or a per-vertex callable) bounds how many
    structure edges may touch each vertex.
    """
    t = 12 * kappa if t is None else t
    cap_of = _cap_function(incidence_cap, 150 * kappa)
    forbidden = forbidden or Counter()
    domain = sorted(part.a_dot)
    if not domain:
        return AbsorbingStructure(t, {})
    cands = []
    for u in sorted(part.a_plus):
        for w, k in sorted(D.out_neighbors(u).items()):
            if part.kind(w) == MINUS:
                cands.extend([(u, w)] * (k - forbidden.get((u, w), 0)))
    q = min(1.0, 120.0 * kappa / max(_np_estimate(D, p), 1e-12))
    own_key = {PLUS: lambda e: (e[1], e[0]), MINUS: lambda e: (e[1], e[0])}

    last_fail = None
    for attempt in range(attempts):
        gen = rngmod.make_rng(seed, rngmod.DOT_A_STRUCTURE, attempt)
        keep = gen.random(len(cands)) < q
        to_tail = gen.random(len(cands)) < 0.5
        offered: dict[int, list[int]] = {v: [] for v in domain}
        for i, e in enumerate(cands):
            if keep[i]:
                offered[e[0] if to_tail[i] else e[1]].append(i)
        used = [False] * len(cands)
        load: Counter = Counter()
        f: dict[int, list[Edge]] = {v: [] for v in domain}

        def take(v, i):
            u, w = cands[i]
            used[i] = True
            load[u] += 1
            load[w] += 1
            f[v].append((u, w))

        for v in domain:
            key = own_key[part.kind(v)]
            for i in sorted(offered[v], key=lambda i: key(cands[i])):
                if len(f[v]) == t:
                    break
                u, w = cands[i]
                if load[u] < cap_of(u) and load[w] < cap_of(w):
                    take(v, i)
        incident: dict[int, list[int]] = {v: [] for v in domain}
        for i, (u, w) in enumerate(cands):
            incident[u].append(i)
            incident[w].append(i)
        short = None
        for v in domain:
            need = t - len(f[v])
            if need <= 0:
                continue
            if load[v] + need > cap_of(v):
                short = (v, len(incident[v]))
                break
            pool = []
            for i in incident[v]:
                if used[i]:
                    continue
                other = cands[i][1] if cands[i][0] == v else cands[i][0]
                if load[other] < cap_of(other):
                    pool.append((load[other], cands[i][1], cands[i][0], i))
            pool.sort()
            for _, _, _, i in pool:
                if len(f[v]) == t:
                    break
                u, w = cands[i]
                other = w if u == v else u
                if load[other] < cap_of(other):
                    take(v, i)
            if len(f[v]) < t:
                short = (v, len(incident[v]))
                break
        if short is None:
            return AbsorbingStructure(t, f)
        last_fail = short
        # exact fallback on the same subsample, then on all candidates
        for qq in ((q, 1.0) if q < 1.0 else (1.0,)):
            keep = gen.random(len(cands)) < qq
            got = _dotA_by_flow(cands, [i for i in range(len(cands)) if keep[i]], domain, t, cap_of)
            if got is not None:
                return AbsorbingStructure(t, got)
    v, c = last_fail
    raise StructureBuildError(
        f"vertex {v} cannot collect {t} structure edges ({c} candidate edges) after {attempts} attempts",
        vertex=v, candidates=c, lemma="dot-structure")


def _dotA_by_flow(cands, kept, domain, t, cap_of):
    """Assign kept edges to endpoints by maximum flow (a b-matching).

    Kept edges are first thinned, highest index first, until every vertex
    touches at most ``cap_of(v)`` of them; incidence can then never exceed
    the cap however the edges are assigned.  Returns ``None`` when some
    vertex cannot reach ``t`` edges.
    """
    deg: Counter = Counter()
    for i in kept:
        deg[cands[i][0]] += 1
        deg[cands[i][1]] += 1
    thin = []
    for i in reversed(kept):
        u, w = cands[i]
        if deg[u] > cap_of(u) or deg[w] > cap_of(w):
            deg[u] -= 1
            deg[w] -= 1
        else:
            thin.append(i)
    thin.reverse()
    if any(deg[v] < t for v in domain):
        return None
    net = FlowNetwork()
    for i in thin:
        u, w = cands[i]
        net.add_arc(SOURCE, ("e", i), 1)
        net.add_arc(("e", i), ("v", u), 1)
        net.add_arc(("e", i), ("v", w), 1)
    for v in domain:
        net.add_arc(("v", v), SINK, t)
    flow = max_flow(net)
    if flow.value < t * len(domain):
        return None
    f: dict[int, list[Edge]] = {v: [] for v in domain}
    for (a, b, _c), x in zip(net.arcs, flow.flow):
        la, lb = net.labels[a], net.labels[b]
        if x and la[0] == "e" and lb[0] == "v":
            f[lb[1]].append(cands[la[1]])
    for v in domain:
        f[v].sort(key=lambda e: (e[1], e[0]))
    return f


def build_A0_structure(D: Digraph, part: VertexPartition, kappa: int, lam: float, seed: int, *,
                       t: int | None = None, p: float | None = None,
                       incidence_cap=None, forbidden: Counter | None = None,
                       attempts: int = 20) -> AbsorbingStructure:
    """Reserve ``t = 3 kappa`` in-edges from A+ and out-edges to A- at every A0 vertex.

    Edges already used elsewhere are excluded through ``forbidden``.  Each
    vertex of A+ u A- may touch at most ``incidence_cap`` (default
    ``5 kappa``) of the chosen edges.  ``lam`` only enters the feasibility
    diagnostics; the construction itself does not need it.
    """
    t = 3 * kappa if t is None else t
    cap_of = _cap_function(incidence_cap, 5 * kappa)
    forbidden = forbidden or Counter()
    domain = sorted(part.a_zero)
    if not domain:
        return AbsorbingStructure(t, {})
    in_c: dict[int, list[Edge]] = {}
    out_c: dict[int, list[Edge]] = {}
    for z in domain:
        in_c[z] = [(x, z) for x, k in sorted(D.in_neighbors(z).items()) if part.kind(x) == PLUS
                   for _ in range(k - forbidden.get((x, z), 0))]
        out_c[z] = [(z, y) for y, k in sorted(D.out_neighbors(z).items()) if part.kind(y) == MINUS
                    for _ in range(k - forbidden.get((z, y), 0))]
    q = min(1.0, 12.0 * kappa / max(_np_estimate(D, p), 1e-12))

    last_fail = None
    for attempt in range(attempts):
        gen = rngmod.make_rng(seed, rngmod.A0_STRUCTURE, attempt)
        load: Counter = Counter()
        f: dict[int, list[Edge]] = {}
        short = None
        for z in domain:
            chosen = []
            for lst, end in ((in_c[z], 0), (out_c[z], 1)):
                keep = gen.random(len(lst)) < q
                picked = []
                taken = [False] * len(lst)
                for i, e in enumerate(lst):
                    if len(picked) == t:
                        break
                    if keep[i] and load[e[end]] < cap_of(e[end]):
                        picked.append(e)
                        taken[i] = True
                        load[e[end]] += 1
                if len(picked) < t:
                    pool = sorted((load[e[end]], e, i) for i, e in enumerate(lst) if not taken[i])
                    for _, e, i in pool:
                        if len(picked) == t:
                            break
                        if load[e[end]] < cap_of(e[end]):
                            picked.append(e)
                            load[e[end]] += 1
                if len(picked) < t:
                    short = (z, len(lst))
                    break
                chosen.extend(sorted(picked))
            if short is not None:
                break
            f[z] = chosen
        if short is None:
            return AbsorbingStructure(t, f)
        last_fail = short
    z, c = last_fail
    raise StructureBuildError(
        f"vertex {z} cannot collect {t} structure edges on one side ({c} candidate edges) "
        f"after {attempts} attempts",
        vertex=z, candidates=c, lemma="zero-structure")


def _cap_function(cap, default):
    if cap is None:
        return lambda v: default
    if callable(cap):
        return cap
    return lambda v: cap


# -- split / merge ------------------------------------------------------------

def split_structure(s: AbsorbingStructure, kappa: int):
    """Cut every f(v) of a (12 kappa)-structure into consecutive parts of
    sizes 7 kappa - 1, 2 kappa + 1 and 3 kappa."""
    if s.t != 12 * kappa:
        raise ContractViolation(f"split needs t = 12 kappa = {12 * kappa}, got t = {s.t}", t=s.t)
    sizes = (7 * kappa - 1, 2 * kappa + 1, 3 * kappa)
    parts = [AbsorbingStructure(k, {}) for k in sizes]
    for v in sorted(s.f):
        edges = s.f[v]
        if len(edges) != s.t:
            raise ContractViolation(f"f({v}) has {len(edges)} edges, expected {s.t}", vertex=v)
        lo = 0
        for part, k in zip(parts, sizes):
            part.f[v] = list(edges[lo:lo + k])
            lo += k
    return tuple(parts)


def merge_structures(a: AbsorbingStructure, b: AbsorbingStructure) -> AbsorbingStructure:
    if a.z & b.z:
        raise ContractViolation("structures share domain vertices", vertices=sorted(a.z & b.z))
    common = set(a.e_ab()) & set(b.e_ab())
    if common:
        raise ContractViolation("structures share edges", edges=sorted(common))
    if not a.f:
        t = b.t
    elif not b.f:
        t = a.t
    elif a.t != b.t:
        raise ContractViolation(f"cannot merge structures with t={a.t} and t={b.t}")
    else:
        t = a.t
    f = {v: list(e) for v, e in a.f.items()}
    f.update({v: list(e) for v, e in b.f.items()})
    return AbsorbingStructure(t, dict(sorted(f.items())))


# -- availability -------------------------------------------------------------

class AvailabilityLedger:
    """Unused structure edges per domain vertex.

    ``a(v)`` counts the absorbing paths still available at ``v`` (for an A0
    vertex, the number of unused in-edges, which always equals the number of
    unused out-edges).  ``r(v) = a(v) - 2 kappa``.
    """

    def __init__(self, s: AbsorbingStructure, part: VertexPartition, kappa: int = 0):
        self.t = s.t
        self.part = part
        self.kappa = kappa
        self._avail: dict[int, list[Edge]] = {v: sorted(e) for v, e in s.f.items()}

    def __contains__(self, v) -> bool:
        return v in self._avail

    @property
    def domain(self) -> list[int]:
        return sorted(self._avail)

    def a(self, v: int) -> int:
        edges = self._avail.get(v, ())
        if v in self._avail and self.part.kind(v) == ZERO:
            return sum(1 for e in edges if e[1] == v)
        return len(edges)

    def r(self, v: int) -> int:
        return self.a(v) - 2 * self.kappa

    def edges(self, v: int) -> list[Edge]:
        return list(self._avail.get(v, ()))

    def consume(self, v: int, edges) -> None:
        lst = self._avail.get(v)
        for e in edges:
            if lst is None or e not in lst:
                raise AbsorptionError(f"ledger underflow at vertex {v}: edge {e} not available",
                                      lemma="short-absorption", vertex=v, edge=e)
            lst.remove(e)

    def remaining_edges(self) -> Counter:
        out: Counter = Counter()
        for edges in self._avail.values():
            out.update(edges)
        return out

    def remaining_paths(self) -> list[Path]:
        """Unused structure edges as (A+, A-)-paths; A0 edges paired in sorted order."""
        paths: list[Path] = []
        for v in sorted(self._avail):
            edges = self._avail[v]
            if self.part.kind(v) == ZERO:
                ins = sorted(e for e in edges if e[1] == v)
                outs = sorted(e for e in edges if e[0] == v)
                if len(ins) != len(outs):
                    raise ContractViolation(f"unbalanced A0 ledger at {v}", vertex=v)
                paths.extend((x, v, y) for (x, _), (_, y) in zip(ins, outs))
            else:
                paths.extend(edges)
        return paths

    def substructure(self, vertices, k: int | None = None) -> dict[int, list[Edge]]:
        """Available edges of the given vertices, at most ``k`` paths' worth each."""
        out = {}
        for v in vertices:
            edges = self._avail.get(v, [])
            if k is not None and self.part.kind(v) != ZERO:
                edges = edges[:k]
            out[v] = list(edges)
        return out


def max_incidence(s: AbsorbingStructure, vertices) -> int:
    inc = s.incidence()
    return max((inc[v] for v in vertices), default=0)


def kappa_int(kappa: float) -> int:
    return max(1, math.ceil(kappa - 1e-9))

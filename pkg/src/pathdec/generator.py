"""Random digraphs, the bipartite-plus-Eulerian example class, parameter
formulas and class-membership reports."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import rng as rngmod
from .digraph import MINUS, PLUS, ZERO, Digraph, VertexPartition, edge_counts, excess, excess_vector

Mode = Literal["plain", "pseudorandom"]


# -- generation ---------------------------------------------------------------

def gen_dnp(n: int, p: float, seed: int) -> Digraph:
    """Binomial random digraph: each of the n(n-1) ordered pairs independently with prob. ``p``.

    Rows are drawn in tail order from the ``DNP`` Philox stream, so the
    output depends only on ``(n, p, seed)``.
    """
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    gen = rngmod.make_rng(seed, rngmod.DNP, n, rngmod.float_key(p))
    tails, heads = [], []
    for u in range(n):
        row = gen.random(n) < p
        row[u] = False
        hs = np.flatnonzero(row)
        tails.append(np.full(len(hs), u, dtype=np.int64))
        heads.append(hs.astype(np.int64))
    if n == 0:
        return Digraph(0, simple=True)
    return Digraph.from_arrays(n, np.concatenate(tails), np.concatenate(heads), simple=True)


def gen_example_class(n: int, t: int, eulerian_degree: int, seed: int,
                      *, max_cycle_len: int | None = None) -> Digraph:
    """Edge-disjoint union of a t-regular bipartite digraph oriented from the
    left half to the right half and a random Eulerian digraph whose in- and
    out-degrees are at most ``eulerian_degree``.

    The halves are a seeded random split of the vertices; the bipartite part
    is a circulant on randomly ordered halves.  The Eulerian part overlays
    random cycles, rejecting any cycle that would reuse an edge or exceed the
    degree cap, and stops after 200 consecutive rejections.
    """
    if n < 0 or n % 2:
        raise ValueError(f"n must be even and non-negative, got {n}")
    if t < 0 or t > n // 2:
        raise ValueError(f"t must lie in [0, n/2], got t={t} for n={n}")
    if eulerian_degree < 0 or eulerian_degree > 3 * t:
        raise ValueError(f"eulerian_degree must lie in [0, 3t], got {eulerian_degree}")
    gen = rngmod.make_rng(seed, rngmod.EXAMPLE_CLASS, n, t, eulerian_degree)
    half = n // 2
    order = gen.permutation(n)
    left, right = order[:half].tolist(), order[half:].tolist()
    D = Digraph(n, simple=True)
    for i, u in enumerate(left):
        for j in range(t):
            D.add_edge(u, right[(i + j) % half])

    cap = eulerian_degree
    if cap == 0 or n < 2:
        return D
    if max_cycle_len is None:
        max_cycle_len = max(3, math.isqrt(n))
    deg = [0] * n
    failures = 0
    while failures < 200:
        avail = [v for v in range(n) if deg[v] < cap]
        if len(avail) < 2:
            break
        hi = min(len(avail), max_cycle_len)
        length = int(gen.integers(2, hi + 1))
        pick = gen.choice(len(avail), size=length, replace=False)
        cyc = [avail[i] for i in pick.tolist()]
        pairs = [(cyc[i], cyc[(i + 1) % length]) for i in range(length)]
        if any(D.has_edge(u, v) for u, v in pairs):
            failures += 1
            continue
        for u, v in pairs:
            D.add_edge(u, v)
        for v in cyc:
            deg[v] += 1
        failures = 0
    return D


# -- parameters ---------------------------------------------------------------

@dataclass(frozen=True)
class Parameters:
    n: int
    p: float
    kappa: float
    lam: float
    N: float
    c_prime: float = 1.0
    mode: Mode = "plain"
    overridden: bool = False
    density_ok: bool = True          # C2 (plain) or C'2 (pseudorandom) at (n, p)
    random_kappa: float | None = None
    random_lambda: float | None = None

    @property
    def np_(self) -> float:
        return self.n * self.p

    @property
    def kappa_int(self) -> int:
        """Integer multiplicity used for structure sizes (kappa rounded up)."""
        return max(1, math.ceil(self.kappa - 1e-9))


def compute_parameters(n: int, p: float, mode: Mode = "plain", *, c_prime: float = 1.0,
                       kappa: float | None = None, lam: float | None = None) -> Parameters:
    """Parameter values for the deterministic class at ``(n, p)``.

    ``kappa``/``lam`` override the formula values; the override is recorded.
    The random-graph values of kappa and lambda are always reported alongside.
    """
    if n < 3 or not 0.0 < p < 1.0:
        raise ValueError(f"need n >= 3 and 0 < p < 1, got n={n}, p={p}")
    if mode not in ("plain", "pseudorandom"):
        raise ValueError(f"unknown mode {mode!r}")
    log_n = math.log(n)
    N = c_prime * n * log_n
    if mode == "plain":
        k_formula = 3.0 * N ** 0.4
        density_ok = n * p >= 365.0 * N ** 0.4
    else:
        k_formula = 6.0 * (N * N * p) ** 0.2
        density_ok = p >= n ** (-1.0 / 3.0) * log_n ** 4
    k = k_formula if kappa is None else float(kappa)
    lam_value = min(n * p / 3.0, k * k / 12.0) if lam is None else float(lam)
    return Parameters(
        n=n, p=p, kappa=k, lam=lam_value, N=N, c_prime=c_prime, mode=mode,
        overridden=kappa is not None or lam is not None,
        density_ok=density_ok,
        random_kappa=math.sqrt(n * p * (1 - p)) / (155.0 * log_n ** 0.75),
        random_lambda=5.0 * math.sqrt(n / (1 - p)) * log_n ** 2,
    )


def parameter_conditions(params: Parameters, kappa: float, N: float | None = None) -> dict[str, list[tuple[str, bool]]]:
    """Hypotheses of each construction stage, evaluated at the given kappa.

    Keys are stage names; values are ``(condition, holds)`` pairs.  ``N``
    defaults to ``params.N``.
    """
    n, p = params.n, params.p
    np_ = n * p
    lam = params.lam
    N = params.N if N is None else N
    log_n = math.log(n)
    if params.mode == "pseudorandom":
        medium_floor = max(12.0, math.sqrt(12 * lam), (7200 * N * N * p) ** 0.2,
                           math.sqrt(12 / (25 * p)) * log_n)
        medium_text = "kappa >= max(12, sqrt(12 lambda), (7200 N^2 p)^(1/5), sqrt(12/(25p)) ln n)"
    else:
        medium_floor = max(12.0, math.sqrt(12 * lam), (72 * N * N) ** 0.2)
        medium_text = "kappa >= max(12, sqrt(12 lambda), (72 N^2)^(1/5))"
    return {
        "dot-structure": [
            ("kappa > 100 ln n", kappa > 100 * log_n),
            ("kappa <= np/120", kappa <= np_ / 120),
        ],
        "zero-structure": [
            ("kappa > 8 ln(4n)", kappa > 8 * math.log(4 * n)),
            ("kappa <= np/12", kappa <= np_ / 12),
            ("lambda <= np/3", lam <= np_ / 3 + 1e-9),
            ("kappa lambda >= 4 np ln(2n)", kappa * lam >= 4 * np_ * math.log(2 * n)),
        ],
        "long-absorption": [
            ("kappa >= 10", kappa >= 10),
            ("kappa < sqrt(N)", kappa < math.sqrt(N)),
        ],
        "medium-absorption": [(medium_text, kappa >= medium_floor)],
        "short-absorption": [("kappa >= 4N/n", kappa >= 4 * N / n)],
    }


# -- class membership ---------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """One violating vertex (or vertex set) for a class property.

    The violation is ``value < bound`` when ``relation == "<"`` and
    ``value > bound`` when ``relation == ">"``.
    """
    prop: int
    quantity: str
    value: float
    bound: float
    relation: str
    vertex: int | None = None
    subset: tuple[int, ...] | None = None

    def text(self) -> str:
        where = f"v={self.vertex}" if self.vertex is not None else f"|U|={len(self.subset)}"
        return f"{where} {self.quantity}={_num(self.value)} {self.relation} {_num(self.bound)}"


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.6g}"


@dataclass
class ClassReport:
    holds: dict[int, bool | None]
    witnesses: dict[int, Witness] = field(default_factory=dict)
    vacuous: set[int] = field(default_factory=set)
    p5_sampled: bool = True

    @property
    def holds_p1(self): return self.holds[1]

    @property
    def holds_p2(self): return self.holds[2]

    @property
    def holds_p3(self): return self.holds[3]

    @property
    def holds_p4(self): return self.holds[4]

    @property
    def holds_p5(self): return self.holds[5]

    def is_class_member(self, pseudorandom: bool = False) -> bool:
        keys = (1, 2, 3, 4, 5) if pseudorandom else (1, 2, 3, 4)
        return all(self.holds[k] for k in keys)

    def lines(self) -> list[str]:
        out = []
        for k in range(1, 6):
            h = self.holds[k]
            if h is None:
                out.append(f"P{k} SKIPPED")
            elif h:
                note = []
                if k in self.vacuous:
                    note.append("vacuous")
                if k == 5 and self.p5_sampled:
                    note.append("sampled")
                out.append(f"P{k} PASS" + (" " + ",".join(note) if note else ""))
            else:
                out.append(f"P{k} FAIL {self.witnesses[k].text()}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def p1_threshold(kappa: float) -> int:
    return math.ceil(155 * kappa - 1e-9)


def classify(D: Digraph, part: VertexPartition, params: Parameters, *,
             p5_samples: int | None = None, seed: int = 0) -> ClassReport:
    """Evaluate the class properties P1-P4 exactly and P5 by sampling.

    ``p5_samples`` defaults to 200 in pseudorandom mode and to 0 (P5 not
    checked, reported as skipped) in plain mode.  The sampled check draws
    that many random subsets at each size ``s0, 2 s0, 4 s0, ...`` below n
    (``s0 = ceil(ln n / (50 p))``), checks the full vertex set once, and also
    checks every prefix of a greedy min-degree peeling order.
    """
    if not part.covers(D.n):
        raise ValueError("partition does not cover the vertex set")
    n = D.n
    np_ = params.n * params.p
    kind = np.zeros(n, dtype=np.int8)
    kind[list(part.a_plus)] = PLUS
    kind[list(part.a_minus)] = MINUS
    tails, heads = D.edge_arrays()
    kt, kh = kind[tails], kind[heads]
    out_to_minus = np.bincount(tails[kh == MINUS], minlength=n)
    in_from_plus = np.bincount(heads[kt == PLUS], minlength=n)
    out_to_zero = np.bincount(tails[kh == ZERO], minlength=n)
    in_from_zero = np.bincount(heads[kt == ZERO], minlength=n)
    ex = excess_vector(D)
    thr = p1_threshold(params.kappa)

    holds: dict[int, bool | None] = {}
    wit: dict[int, Witness] = {}
    vacuous: set[int] = set()

    def first_violation(k, verts, checks):
        for v in verts:
            for quantity, value, bound, rel in checks(v):
                bad = value < bound if rel == "<" else value > bound
                if bad:
                    holds[k] = False
                    wit[k] = Witness(k, quantity, float(value), float(bound), rel, vertex=int(v))
                    return
        holds[k] = True

    plus, minus, zero = sorted(part.a_plus), sorted(part.a_minus), sorted(part.a_zero)
    first_violation(1, plus, lambda v: [("ex", ex[v], thr, "<"),
                                       ("out_to_minus", out_to_minus[v], np_ / 4, "<"),
                                       ("out_to_minus", out_to_minus[v], np_, ">")])
    first_violation(2, minus, lambda v: [("ex", -ex[v], thr, "<"),
                                        ("in_from_plus", in_from_plus[v], np_ / 4, "<"),
                                        ("in_from_plus", in_from_plus[v], np_, ">")])
    first_violation(3, plus + minus, lambda v: [("out_to_zero", out_to_zero[v], params.lam, ">"),
                                               ("in_from_zero", in_from_zero[v], params.lam, ">")])
    first_violation(4, zero, lambda v: [("in_from_plus", in_from_plus[v], np_ / 3, "<"),
                                       ("out_to_minus", out_to_minus[v], np_ / 3, "<")])
    if not plus:
        vacuous.add(1)
    if not minus:
        vacuous.add(2)
    if not plus and not minus:
        vacuous.add(3)
    if not zero:
        vacuous.add(4)

    if p5_samples is None:
        p5_samples = 200 if params.mode == "pseudorandom" else 0
    if p5_samples <= 0:
        holds[5] = None
    else:
        w5 = _check_p5(D, params.p, p5_samples, seed)
        holds[5] = w5 is None
        if w5 is not None:
            wit[5] = w5
    return ClassReport(holds, wit, vacuous, p5_sampled=True)


def _check_p5(D: Digraph, p: float, samples: int, seed: int) -> Witness | None:
    n = D.n
    if n == 0 or p <= 0:
        return None
    s0 = max(1, math.ceil(math.log(max(n, 2)) / (50 * p)))

    def check(U) -> Witness | None:
        U = np.asarray(U)
        e = _induced_count(D, U)
        bound = 100 * len(U) ** 2 * p
        if e > bound:
            return Witness(5, "e_U", float(e), float(bound), ">", subset=tuple(sorted(U.tolist())))
        return None

    gen = rngmod.make_rng(seed, rngmod.P5_SAMPLING, n)
    size = s0
    while size < n:
        for _ in range(samples):
            w = check(gen.choice(n, size=size, replace=False))
            if w is not None:
                return w
        size *= 2
    if s0 <= n:
        w = check(np.arange(n))
        if w is not None:
            return w
    # greedy densest-subgraph peeling: check every suffix of the removal order
    order = _peeling_order(D)
    remaining_edges = D.m
    tails, heads = D.edge_arrays()
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    # an edge survives while both endpoints are still present
    death = np.minimum(pos[tails], pos[heads])
    alive_after = remaining_edges - np.cumsum(np.bincount(death, minlength=n))
    for i in range(n):
        size = n - i - 1
        if size >= s0 and alive_after[i] > 100 * size * size * p:
            subset = order[i + 1:]
            return Witness(5, "e_U", float(alive_after[i]), float(100 * size * size * p), ">",
                           subset=tuple(sorted(subset.tolist())))
    return None


def _induced_count(D: Digraph, U: np.ndarray) -> int:
    mask = np.zeros(D.n, dtype=bool)
    mask[U] = True
    tails, heads = D.edge_arrays()
    return int(np.count_nonzero(mask[tails] & mask[heads]))


def _peeling_order(D: Digraph) -> np.ndarray:
    """Vertices in the order a min-total-degree peeling removes them."""
    n = D.n
    deg = [D.out_degree(v) + D.in_degree(v) for v in range(n)]
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * n
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        for nbrs in (D.out_neighbors(v), D.in_neighbors(v)):
            for w, k in nbrs.items():
                if not removed[w]:
                    deg[w] -= k
                    heapq.heappush(heap, (deg[w], w))
    return np.asarray(order, dtype=np.int64)


def recheck_witness(D: Digraph, part: VertexPartition, params: Parameters, w: Witness) -> bool:
    """Recompute a witness's quantity from scratch; True if it still violates."""
    v = w.vertex
    if w.quantity == "ex":
        value = excess(D, v) if w.prop == 1 else -excess(D, v)
    elif w.quantity == "out_to_minus":
        value = edge_counts(D, {v}, part.a_minus)
    elif w.quantity == "in_from_plus":
        value = edge_counts(D, part.a_plus, {v})
    elif w.quantity == "out_to_zero":
        value = edge_counts(D, {v}, part.a_zero)
    elif w.quantity == "in_from_zero":
        value = edge_counts(D, part.a_zero, {v})
    elif w.quantity == "e_U":
        value = edge_counts(D, w.subset)
    else:
        raise ValueError(f"unknown witness quantity {w.quantity!r}")
    return value < w.bound if w.relation == "<" else value > w.bound

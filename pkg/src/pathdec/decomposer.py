"""End-to-end perfect path decomposition for the deterministic digraph class.

Pipeline: reserve absorbing structures, strip greedy excess paths from the
rest, split what is left (an Eulerian digraph) into cycles, and absorb the
cycles back into the reserved edges.  Every run is checked by
:func:`verify_decomposition` before it is returned.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Literal

from .absorber import (build_A0_structure, build_dotA_structure, merge_structures, split_structure,
                       validate_structure)
from .absorption import Breach, absorb_long, absorb_medium, absorb_short
from .cycles import classify_cycles, peel_cycles
from .digraph import (Digraph, Path, VertexPartition, count_in, excess_vector, is_acyclic,
                      is_eulerian, partition_by_excess, path_edges, total_excess)
from .errors import AbsorptionError, StructureBuildError
from .generator import Parameters, classify, compute_parameters, p1_threshold, parameter_conditions

Mode = Literal["strict", "permissive"]


# -- greedy extraction --------------------------------------------------------

def greedy_excess_paths(D: Digraph) -> tuple[list[Path], Digraph]:
    """Strip paths from positive- to negative-excess vertices until every
    vertex is balanced.

    Single edges from a positive to a negative vertex are taken first (tails
    and heads ascending).  Then, repeatedly, a depth-first search from the
    vertex of largest excess (lowest index on ties), scanning out-neighbours
    in ascending order, stops at the first negative-excess vertex it reaches
    and removes that search path.  Each path lowers the total excess by one,
    so exactly ``total_excess(D)`` paths come out and the remainder is
    Eulerian.
    """
    R = D.copy()
    ex = excess_vector(R).tolist()
    paths: list[Path] = []
    for u in range(R.n):
        if ex[u] <= 0:
            continue
        for w in sorted(R.out_neighbors(u)):
            while ex[u] > 0 and ex[w] < 0 and R.has_edge(u, w):
                R.remove_edge(u, w)
                paths.append((u, w))
                ex[u] -= 1
                ex[w] += 1
            if ex[u] == 0:
                break
    while True:
        s = max(range(R.n), key=lambda v: (ex[v], -v), default=None)
        if s is None or ex[s] <= 0:
            break
        path = _dfs_to_negative(R, s, ex)
        R.remove_edges(path_edges(path))
        paths.append(path)
        ex[s] -= 1
        ex[path[-1]] += 1
    return paths, R


def _dfs_to_negative(R: Digraph, s: int, ex: list[int]) -> Path:
    parent = {s: None}
    stack = [(s, iter(sorted(R.out_neighbors(s))))]
    while stack:
        u, it = stack[-1]
        nxt = next((w for w in it if w not in parent), None)
        if nxt is None:
            stack.pop()
            continue
        parent[nxt] = u
        if ex[nxt] < 0:
            out = [nxt]
            while parent[out[-1]] is not None:
                out.append(parent[out[-1]])
            return tuple(reversed(out))
        stack.append((nxt, iter(sorted(R.out_neighbors(nxt)))))
    raise RuntimeError(f"no negative-excess vertex reachable from {s}")  # impossible by degree counting


# -- results ------------------------------------------------------------------

@dataclass
class Decomposition:
    paths: list[Path]
    source_excess: int

    def __len__(self) -> int:
        return len(self.paths)


@dataclass
class VerifyReport:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_decomposition(D: Digraph, dec) -> VerifyReport:
    """Check that ``dec`` (a Decomposition or list of paths) is a perfect
    decomposition of ``D``: valid paths, exact edge partition, and exactly
    ``total_excess(D)`` paths."""
    paths = dec.paths if isinstance(dec, Decomposition) else list(dec)
    problems: list[str] = []
    used: Counter = Counter()
    for i, p in enumerate(paths):
        if len(p) < 2:
            problems.append(f"path {i} has no edges")
            continue
        if len(set(p)) != len(p):
            problems.append(f"path {i} repeats a vertex: {' '.join(map(str, p))}")
        if any(not 0 <= v < D.n for v in p):
            problems.append(f"path {i} uses a vertex outside 0..{D.n - 1}")
            continue
        used.update(path_edges(p))
    have = D.edge_multiset()
    for e, k in sorted(used.items()):
        if k > have.get(e, 0):
            if have.get(e, 0) == 0:
                problems.append(f"edge {e[0]}>{e[1]} is not in the digraph")
            else:
                problems.append(f"edge {e[0]}>{e[1]} covered {k} times, multiplicity {have[e]}")
    for e, k in sorted(have.items()):
        if used.get(e, 0) < k:
            problems.append(f"edge {e[0]}>{e[1]} not covered")
    ex = total_excess(D)
    if len(paths) != ex:
        problems.append(f"path count {len(paths)} != excess {ex}")
    return VerifyReport(not problems, problems)


@dataclass
class StageReport:
    stage: str
    success: bool
    breaches: list[Breach] = field(default_factory=list)
    seconds: float = 0.0
    info: dict = field(default_factory=dict)

    def text(self, timing: bool = True) -> str:
        head = f"stage {self.stage}: {'ok' if self.success else 'FAILED'}"
        if timing:
            head += f" ({self.seconds:.3f}s)"
        if self.info:
            head += " " + " ".join(f"{k}={v}" for k, v in self.info.items())
        lines = [head]
        for b in self.breaches:
            tag = "breach" if b.fatal else "warning"
            lines.append(f"  {tag} {b.text()}")
        return "\n".join(lines)


@dataclass
class RunResult:
    decomposition: Decomposition | None
    stages: list[StageReport] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)
    internal_error: bool = False

    @property
    def success(self) -> bool:
        return self.decomposition is not None

    @property
    def failure(self) -> StageReport | None:
        return next((s for s in self.stages if not s.success), None)

    def report(self, timing: bool = True) -> str:
        return "\n".join(s.text(timing) for s in self.stages) + "\n"


class _Abort(Exception):
    pass


# -- pipeline -----------------------------------------------------------------

def perfect_decompose(D: Digraph, part: VertexPartition | None = None, params: Parameters | None = None,
                      seed: int = 0, *, mode: Mode = "strict", threshold: int | None = None,
                      kappa: float | None = None, lam: float | None = None, c_prime: float = 1.0,
                      p: float | None = None, trace: bool = False) -> RunResult:
    """Run the absorption pipeline on ``D``.

    ``strict`` stops at the first breached hypothesis.  ``permissive``
    records hypothesis breaches as warnings and keeps going, with relaxed
    partition threshold (``ceil(17 kappa)``) and incidence caps sized to the
    actual vertex excesses; its output is still verified exactly.
    ``params`` defaults to :func:`compute_parameters` at the edge density of
    ``D`` with the given overrides.
    """
    if mode not in ("strict", "permissive"):
        raise ValueError(f"unknown mode {mode!r}")
    strict = mode == "strict"
    run = RunResult(None)
    tracer = run.trace.append if trace else None
    t0 = time.perf_counter()

    def stage(name, ok=True, breaches=(), **info):
        nonlocal t0
        now = time.perf_counter()
        rep = StageReport(name, ok, list(breaches), now - t0, info)
        t0 = now
        run.stages.append(rep)
        if not ok:
            raise _Abort
        return rep

    def hard(name, lemma, condition, **witness):
        stage(name, False, [Breach(lemma, condition, witness, fatal=True)])

    try:
        n, m = D.n, D.m
        ex_total = total_excess(D)
        if m == 0:
            stage("input", m=0, excess=0)
            return _finish(run, D, [], stage)
        if is_eulerian(D):
            hard("input", "excess lower bound",
                 "no perfect decomposition exists unless edgeless (Eulerian digraph with edges)",
                 m=m, excess=0)
        stage("input", m=m, excess=ex_total)

        if is_acyclic(D):
            paths, _rest = greedy_excess_paths(D)
            msg = "acyclic input: greedy extraction is already perfect"
            run.warnings.append(msg)
            breaches = [Breach("class-membership", "P1 vacuous or not checked on acyclic fast path",
                               {}, fatal=False)] if strict else []
            stage("acyclic-fast-path", breaches=breaches, paths=len(paths))
            return _finish(run, D, paths, stage)

        if params is None:
            if n < 3:
                hard("parameters", "parameter formulas", "need n >= 3", n=n)
            dens = p if p is not None else m / (n * (n - 1))
            dens = min(max(dens, 1e-12), 1 - 1e-12)
            params = compute_parameters(n, dens, c_prime=c_prime, kappa=kappa, lam=lam)
        k = params.kappa_int
        stage("parameters", kappa=f"{params.kappa:.4g}", kappa_int=k, lam=f"{params.lam:.4g}",
              N=f"{params.N:.4g}", p=f"{params.p:.4g}")

        if part is None:
            thr = threshold if threshold is not None else (
                p1_threshold(params.kappa) if strict else math.ceil(17 * params.kappa - 1e-9))
            part = partition_by_excess(D, thr)
        else:
            thr = threshold
        stage("partition", a_plus=len(part.a_plus), a_minus=len(part.a_minus),
              a_zero=len(part.a_zero), threshold=thr)

        report = classify(D, part, params, p5_samples=0 if params.mode == "plain" else None, seed=seed)
        cls_breaches = [Breach("class-membership", f"P{i}", {"witness": report.witnesses[i].text()},
                               fatal=strict)
                        for i in (1, 2, 3, 4, 5) if report.holds[i] is False]
        for b in cls_breaches:
            run.warnings.append(b.text())
        stage("classify", ok=not (strict and cls_breaches), breaches=cls_breaches)

        cond = parameter_conditions(params, params.kappa)
        hyp = [Breach(lemma, text, {"kappa": f"{params.kappa:.4g}"}, fatal=strict)
               for lemma, items in cond.items() for text, ok in items if not ok]
        for b in hyp:
            run.warnings.append(b.text())
        stage("hypotheses", ok=not (strict and hyp), breaches=hyp)

        ex = excess_vector(D).tolist()
        has_zero = bool(part.a_zero)
        if strict:
            dot_cap, zero_cap = 150 * k, None
        else:
            reserve = 5 * k if has_zero else 0
            dot_cap = lambda v: min(150 * k, abs(ex[v]) - reserve - 1)
        try:
            s_dot = build_dotA_structure(D, part, k, seed, p=params.p, incidence_cap=dot_cap)
        except StructureBuildError as exc:
            hard("dot-structure", exc.lemma, "every vertex of A+ u A- gets 12 kappa reserved edges",
                 vertex=exc.vertex, candidates=exc.candidates)
        inc_dot = s_dot.incidence()
        if not strict:
            zero_cap = lambda v: min(5 * k, abs(ex[v]) - 1 - inc_dot[v])
        stage("dot-structure", edges=sum(len(e) for e in s_dot.f.values()))
        try:
            s_zero = build_A0_structure(D, part, k, params.lam, seed, p=params.p,
                                        incidence_cap=zero_cap, forbidden=s_dot.e_ab())
        except StructureBuildError as exc:
            hard("zero-structure", exc.lemma, "every A0 vertex gets 3 kappa reserved in- and out-edges",
                 vertex=exc.vertex, candidates=exc.candidates)
        stage("zero-structure", edges=sum(len(e) for e in s_zero.f.values()))

        for name, s in (("dot-structure", s_dot), ("zero-structure", s_zero)):
            rep = validate_structure(s, D, part)
            if not rep.ok:
                hard("validate", name, "built structure is valid", problem=rep.problems[0])
        both = s_dot.e_ab() + s_zero.e_ab()
        if any(k2 > D.multiplicity(*e) for e, k2 in both.items()):
            hard("validate", "zero-structure", "structures are edge-disjoint")
        s1, s2, s3 = split_structure(s_dot, k)
        s3 = merge_structures(s3, s_zero)
        stage("split", long=s1.t, medium=s2.t, short=s3.t)

        Dp = D.copy()
        Dp.remove_edges(e for e, c in sorted(both.items()) for _ in range(c))
        exp = excess_vector(Dp).tolist()
        for v in sorted(part.a_dot):
            if ex[v] * exp[v] <= 0:
                hard("sign-check", "dot-structure", "removing reserved edges keeps the sign of ex(v)",
                     vertex=v, before=ex[v], after=exp[v])
        stage("sign-check")

        greedy_paths, Dstar = greedy_excess_paths(Dp)
        stage("greedy", paths=len(greedy_paths), remainder_edges=Dstar.m)

        bundle = peel_cycles(Dstar)
        N_work = max(len(bundle), params.c_prime * n * math.log(n))
        short, medium, long_ = classify_cycles(bundle, part, k, N_work)
        stage("peel", cycles=len(bundle), short=len(short), medium=len(medium), long=len(long_),
              N=f"{N_work:.4g}")

        try:
            out3 = absorb_short(short, s3, part, k, c_prime=params.c_prime, strict=strict, trace=tracer)
        except AbsorptionError as exc:
            hard("short", exc.lemma, str(exc), **_flat(exc.witness))
        star = out3.leftover_cycles
        for C in star:
            (long_ if count_in(C[:-1], part) * k >= N_work else medium).append(C)
        stage("short", breaches=out3.breaches, rounds=out3.rounds, promoted=len(star),
              paths=len(out3.new_paths))

        try:
            out1 = absorb_long(long_, s1, part, k, strict=strict, trace=tracer)
        except AbsorptionError as exc:
            hard("long", exc.lemma, str(exc), **_flat(exc.witness))
        stage("long", cycles=len(long_), paths=len(out1.new_paths))
        try:
            out2 = absorb_medium(medium, s2, part, k, strict=strict, trace=tracer)
        except AbsorptionError as exc:
            hard("medium", exc.lemma, str(exc), **_flat(exc.witness))
        stage("medium", breaches=out2.breaches, cycles=len(medium), paths=len(out2.new_paths))

        paths = greedy_paths + out1.new_paths + out2.new_paths + out3.new_paths
        return _finish(run, D, paths, stage)
    except _Abort:
        return run


def _flat(witness: dict) -> dict:
    return {k: (v if isinstance(v, (int, float, str)) else str(v)) for k, v in witness.items()}


def _finish(run: RunResult, D: Digraph, paths, stage) -> RunResult:
    rep = verify_decomposition(D, paths)
    if not rep.ok:
        run.internal_error = True
        stage("verify", False, [Breach("verification", "assembled paths form a perfect decomposition",
                                       {"problem": rep.problems[0]})])
    stage("verify", paths=len(paths))
    run.decomposition = Decomposition(list(paths), total_excess(D))
    return run

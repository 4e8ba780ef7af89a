"""Seeded Monte-Carlo estimates of how often D(n, p) is consistent."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from scipy.stats import binomtest

from . import rng as rngmod
from .decomposer import perfect_decompose
from .digraph import total_excess
from .errors import OracleCapExceeded
from .generator import gen_dnp
from .oracle import brute_force_pn

CSV_HEADER = "n,p,trials,fraction,ci_lo,ci_hi,method"
MONTECARLO_EDGE_CAP = 30   # every digraph on at most 6 vertices


@dataclass
class Row:
    n: int
    p: float
    trials: int
    method: str
    consistent: int | None      # None: skipped (oracle cap exceeded)
    ci: tuple[float, float] | None = None

    @property
    def fraction(self) -> float | None:
        return None if self.consistent is None else self.consistent / self.trials

    def csv(self) -> str:
        if self.consistent is None:
            return f"{self.n},{self.p:g},{self.trials},skipped,,,{self.method}"
        lo, hi = self.ci
        return f"{self.n},{self.p:g},{self.trials},{self.fraction:.6f},{lo:.6f},{hi:.6f},{self.method}"


def trial_seed(seed: int, n: int, p: float, trial: int) -> int:
    gen = rngmod.make_rng(seed, rngmod.MONTECARLO, n, rngmod.float_key(p), trial)
    return int(gen.integers(0, 2**63 - 1))


def _one_trial(n: int, p: float, seed: int, trial: int, method: str, edge_cap: int) -> bool | None:
    s = trial_seed(seed, n, p, trial)
    D = gen_dnp(n, p, s)
    if method == "oracle":
        try:
            return brute_force_pn(D, edge_cap=edge_cap) == total_excess(D)
        except OracleCapExceeded:
            return None
    return perfect_decompose(D, seed=s, mode="permissive").success


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("PATHDEC_THREADS", "1")))
    except ValueError:
        return 1


def estimate(n: int, p: float, trials: int, seed: int, method: str = "oracle",
             edge_cap: int = MONTECARLO_EDGE_CAP, threads: int | None = None) -> Row:
    """Fraction of ``trials`` independent D(n, p) samples that are consistent.

    ``oracle`` computes the path number exactly; ``constructive`` counts a
    trial as consistent when the permissive pipeline returns a verified
    perfect decomposition (a lower estimate).  Trial ``i`` always sees the
    same digraph, whatever the thread count or trial order.  The interval
    is the 95% Wilson score interval.
    """
    if method not in ("oracle", "constructive"):
        raise ValueError(f"unknown method {method!r}")
    if trials < 1:
        raise ValueError("trials must be positive")
    threads = threads or thread_count()
    args = [(n, p, seed, t, method, edge_cap) for t in range(trials)]
    if threads == 1:
        results = [_one_trial(*a) for a in args]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda a: _one_trial(*a), args))
    if any(r is None for r in results):
        return Row(n, p, trials, method, None)
    k = sum(1 for r in results if r)
    ci = binomtest(k, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return Row(n, p, trials, method, k, (float(ci.low), float(ci.high)))


def run(n_list, p_list, trials: int, seed: int, method: str = "oracle",
        edge_cap: int = MONTECARLO_EDGE_CAP) -> str:
    """CSV text with one row per (n, p) pair, n-major."""
    lines = [CSV_HEADER]
    for n in n_list:
        for p in p_list:
            lines.append(estimate(n, p, trials, seed, method, edge_cap).csv())
    return "\n".join(lines) + "\n"

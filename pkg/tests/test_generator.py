from __future__ import annotations

import pytest

from pathdec.digraph import Digraph, VertexPartition, excess, partition_by_excess
from pathdec.generator import (classify, compute_parameters, gen_dnp, gen_example_class,
                               parameter_conditions, recheck_witness)


def test_dnp_extremes():
    assert gen_dnp(5, 1.0, 0).m == 20
    assert gen_dnp(5, 0.0, 0).m == 0
    assert gen_dnp(0, 0.5, 0).m == 0


def test_dnp_is_deterministic_and_seed_sensitive():
    a, b, c = gen_dnp(30, 0.3, 7), gen_dnp(30, 0.3, 7), gen_dnp(30, 0.3, 8)
    assert a == b
    assert a != c


def test_dnp_edge_count_is_binomial():
    # mean n(n-1)p = 9900 * 0.2 = 1980, sd about 40; allow 5 sd
    D = gen_dnp(100, 0.2, 3)
    assert abs(D.m - 1980) < 200
    assert all(not D.has_edge(v, v) for v in range(100))


def test_dnp_rejects_bad_p():
    with pytest.raises(ValueError):
        gen_dnp(5, 1.5, 0)


def test_example_class_structure():
    n, t, deg = 40, 6, 3
    D = gen_example_class(n, t, deg, seed=2)
    ex = [excess(D, v) for v in range(n)]
    assert sorted(ex) == [-t] * (n // 2) + [t] * (n // 2)
    plus = {v for v in range(n) if ex[v] > 0}
    # what is left after removing t out-edges per left vertex is Eulerian with degrees <= cap
    eul_out = [D.out_degree(v) - (t if v in plus else 0) for v in range(n)]
    eul_in = [D.in_degree(v) - (t if v not in plus else 0) for v in range(n)]
    assert eul_out == eul_in
    assert 0 < max(eul_out) <= deg


def test_example_class_six_vertices():
    # t-regular bipartite part on 3 + 3 vertices: 3 * 2 = 6 edges, excess 6
    D = gen_example_class(6, 2, 0, seed=0)
    assert D.m == 6
    part = partition_by_excess(D, 2)
    assert len(part.a_plus) == 3 and len(part.a_minus) == 3


def test_example_class_eulerian_part_only():
    D = gen_example_class(20, 0, 0, seed=1)
    assert D.m == 0
    with pytest.raises(ValueError):
        gen_example_class(7, 2, 0, 0)
    with pytest.raises(ValueError):
        gen_example_class(10, 6, 0, 0)
    with pytest.raises(ValueError):
        gen_example_class(10, 2, 7, 0)


def test_example_class_deterministic():
    assert gen_example_class(60, 5, 4, 9) == gen_example_class(60, 5, 4, 9)


def test_parameter_formulas():
    # n = 1000, p = 1/2: N = 1000 ln 1000 = 6907.755..., kappa = 3 N^(2/5) = 103.0045...
    P = compute_parameters(1000, 0.5)
    assert P.N == pytest.approx(6907.755279, rel=1e-9)
    assert P.kappa == pytest.approx(103.004461, rel=1e-6)
    assert P.lam == pytest.approx(500 / 3)          # min(np/3, kappa^2/12 = 884.2)
    assert not P.density_ok                          # np = 500 < 365 N^(2/5) = 12532.2
    assert P.random_kappa == pytest.approx(0.0239406, rel=1e-5)
    assert P.random_lambda == pytest.approx(10669.864, rel=1e-6)
    Q = compute_parameters(1000, 0.5, "pseudorandom")
    assert Q.kappa == pytest.approx(179.341182, rel=1e-6)
    assert not Q.density_ok                          # p < n^(-1/3) ln^4 n = 227.7


def test_parameter_overrides_and_ranges():
    P = compute_parameters(100, 0.5, kappa=4)
    assert P.kappa == 4 and P.lam == pytest.approx(16 / 12) and P.overridden
    assert P.kappa_int == 4
    assert compute_parameters(100, 0.5, kappa=3.2).kappa_int == 4
    with pytest.raises(ValueError):
        compute_parameters(2, 0.5)
    with pytest.raises(ValueError):
        compute_parameters(10, 1.0)


def test_parameter_conditions_fail_at_desk_scale():
    P = compute_parameters(400, 0.3, kappa=3)
    cond = parameter_conditions(P, P.kappa)
    assert set(cond) == {"dot-structure", "zero-structure", "long-absorption",
                         "medium-absorption", "short-absorption"}
    assert not all(ok for items in cond.values() for _, ok in items)


def _planted(n_side=4, n_zero=2):
    """A+ = 0..k-1 sending to A- = k..2k-1; A0 vertices get edges from A+ and to A-."""
    k = n_side
    edges = [(u, w) for u in range(k) for w in range(k, 2 * k)]
    zero = list(range(2 * k, 2 * k + n_zero))
    for z in zero:
        edges += [(u, z) for u in range(k)] + [(z, w) for w in range(k, 2 * k)]
    D = Digraph(2 * k + n_zero, edges)
    part = VertexPartition(frozenset(range(k)), frozenset(range(k, 2 * k)), frozenset(zero))
    return D, part


def test_classify_reports_witnesses_that_recheck():
    D, part = _planted()
    P = compute_parameters(D.n, 0.5, kappa=1.0)
    rep = classify(D, part, P)
    # ex(v) = 4 + 2 = 6 < 155 for v in A+: P1 fails at the lowest vertex
    assert rep.holds_p1 is False and rep.witnesses[1].vertex == 0
    assert rep.holds_p5 is None
    for k, w in rep.witnesses.items():
        assert recheck_witness(D, part, P, w)
    lines = rep.lines()
    assert lines[0].startswith("P1 FAIL v=0 ex=6 < 155")
    assert lines[4] == "P5 SKIPPED"


def test_classify_passes_with_low_threshold_kappa():
    D, part = _planted()
    P = compute_parameters(D.n, 0.5, kappa=0.01)   # threshold ceil(1.55) = 2
    rep = classify(D, part, P)
    np_ = D.n * 0.5                                 # 5: bounds np/4 = 1.25, np = 5, np/3 = 1.67
    assert rep.holds_p1 and rep.holds_p2 and rep.holds_p4
    # P3: e(v, A0) = 2 <= lambda fails since lambda = min(np/3, kappa^2/12) is tiny
    assert rep.holds_p3 is False
    assert np_ == 5


def test_p5_detects_dense_subset():
    # complete digraph on 10 vertices: e(U) = |U|(|U|-1) exceeds 100 |U|^2 p only when p < 1/100
    D = gen_dnp(10, 1.0, 0)
    P = compute_parameters(10, 0.5, "pseudorandom", kappa=1)
    part = partition_by_excess(D, 1)
    assert classify(D, part, P, p5_samples=20).holds_p5 is True
    P_small = compute_parameters(10, 0.005, "pseudorandom", kappa=1)
    rep = classify(D, part, P_small, p5_samples=20)
    # smallest sampled size is ceil(ln 10 / 0.25) = 10; e(V) = 90 > 50
    assert rep.holds_p5 is False and rep.witnesses[5].value == 90
    assert recheck_witness(D, part, P_small, rep.witnesses[5])


def test_high_threshold_makes_p1_p2_vacuous():
    D = gen_example_class(20, 2, 4, 0)
    part = partition_by_excess(D, 100)
    assert not part.a_plus and not part.a_minus
    rep = classify(D, part, compute_parameters(20, 0.1, kappa=1))
    assert {1, 2, 3} <= rep.vacuous
    assert rep.lines()[0] == "P1 PASS vacuous"
    # A+ is empty, so no A0 vertex receives np/3 edges from it
    assert rep.holds_p4 is False

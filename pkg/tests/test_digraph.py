from __future__ import annotations

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathdec import formats
from pathdec.digraph import (Digraph, VertexPartition, edge_counts, excess, excess_vector, is_acyclic,
                             is_eulerian, partition_by_excess, total_excess)


def test_excess_of_path_and_triangle():
    P = Digraph(3, [(0, 1), (1, 2)])
    assert [excess(P, v) for v in range(3)] == [1, 0, -1]
    assert total_excess(P) == 1
    T = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    assert total_excess(T) == 0 and is_eulerian(T)


def test_excess_out_of_range():
    with pytest.raises(ValueError):
        excess(Digraph(2), 5)


def test_multiplicity_and_removal():
    D = Digraph(2, [(0, 1), (0, 1), (1, 0)])
    assert D.multiplicity(0, 1) == 2 and D.m == 3
    D.remove_edge(0, 1)
    assert D.multiplicity(0, 1) == 1 and D.out_degree(0) == 1
    with pytest.raises(ValueError):
        D.remove_edge(1, 1)


def test_simple_rejects_duplicates_and_loops():
    D = Digraph(3, simple=True)
    D.add_edge(0, 1)
    with pytest.raises(ValueError):
        D.add_edge(0, 1)
    with pytest.raises(ValueError):
        D.add_edge(2, 2)


def test_from_arrays_matches_incremental():
    tails, heads = np.array([0, 1, 2, 0]), np.array([1, 2, 0, 2])
    A = Digraph.from_arrays(3, tails, heads)
    B = Digraph(3, [(0, 1), (1, 2), (2, 0), (0, 2)])
    assert A == B
    assert A.out_degrees() == [2, 1, 1]
    with pytest.raises(ValueError):
        Digraph.from_arrays(3, [0, 0], [1, 1])


def test_edge_counts_requires_disjoint():
    D = Digraph(4, [(0, 2), (0, 3), (1, 2), (2, 3)])
    assert edge_counts(D, {0, 1}, {2, 3}) == 3
    assert edge_counts(D, {2, 3}) == 1
    with pytest.raises(ValueError):
        edge_counts(D, {0, 2}, {2})


def test_partition_by_excess():
    D = Digraph(4, [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)])
    part = partition_by_excess(D, 2)
    assert part.a_plus == {0} and part.a_minus == {3} and part.a_zero == {1, 2}
    assert part.covers(4)
    with pytest.raises(ValueError):
        partition_by_excess(D, 0)
    with pytest.raises(ValueError):
        VertexPartition({0}, {0}, set())


def test_is_acyclic():
    assert is_acyclic(Digraph(3, [(0, 1), (1, 2), (0, 2)]))
    assert not is_acyclic(Digraph(2, [(0, 1), (1, 0)]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))))
def test_excess_sums_to_zero_and_format_round_trip(data):
    n, pairs = data
    D = Digraph(n, [(u, v) for u, v in pairs if u != v])
    assert int(excess_vector(D).sum()) == 0
    assert 2 * total_excess(D) == int(np.abs(excess_vector(D)).sum())
    assert formats.parse_edge_list(formats.format_edge_list(D)) == D


def test_edge_list_format_errors():
    with pytest.raises(formats.FormatError):
        formats.parse_edge_list("")
    with pytest.raises(formats.FormatError):
        formats.parse_edge_list("3 2\n0 1\n")
    with pytest.raises(formats.FormatError):
        formats.parse_edge_list("2 1\n0 0\n")
    D = formats.parse_edge_list("# comment\n3 2\n0 1\n1 2\n")
    assert D.m == 2


def test_paths_format_round_trip():
    buf = io.StringIO()
    formats.write_paths([(0, 1, 2), (3, 4)], buf)
    assert buf.getvalue() == "paths 2\n0 1 2\n3 4\n"
    assert formats.parse_paths(buf.getvalue()) == [(0, 1, 2), (3, 4)]
    with pytest.raises(formats.FormatError):
        formats.parse_paths("paths 2\n0 1\n")

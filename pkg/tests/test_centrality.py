import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citecology.centrality import betweenness, format_centrality
from citecology.exceptions import DegenerateGraphError
from citecology.similarity import SimilarityGraph

import oracles


def graph(n, edges, names=None):
    names = names or tuple(f"N{i}" for i in range(n))
    return SimilarityGraph(names, tuple((min(a, b), max(a, b), 1.0) for a, b in edges), 0.2)


def normalized(n, edges):
    return [v / ((n - 1) * (n - 2) / 2) for v in oracles.all_shortest_paths_betweenness(n, edges)]


def test_path_graph():
    rep = betweenness(graph(3, [(0, 1), (1, 2)], ("A", "B", "C")))
    assert rep["B"].normalized == 1.0
    assert rep["A"].normalized == 0.0 and rep["C"].normalized == 0.0
    assert [e.journal for e in rep.entries] == ["B", "A", "C"]


def test_star():
    rep = betweenness(graph(4, [(0, 1), (0, 2), (0, 3)], ("X", "L1", "L2", "L3")))
    assert rep["X"].normalized == 1.0
    assert all(rep[leaf].normalized == 0.0 for leaf in ("L1", "L2", "L3"))


def test_four_cycle():
    rep = betweenness(graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))
    assert normalized(4, [(0, 1), (1, 2), (2, 3), (0, 3)]) == [1 / 6] * 4
    assert all(e.normalized == pytest.approx(1 / 6, abs=1e-15) for e in rep.entries)
    assert all(e.raw == 0.5 for e in rep.entries)


def test_too_small():
    with pytest.raises(DegenerateGraphError):
        betweenness(graph(2, [(0, 1)]))


def test_components_counted():
    rep = betweenness(graph(5, [(0, 1), (1, 2)]))
    assert rep.components == 3


def test_isolated_node_only_changes_denominator():
    edges = [(0, 1), (1, 2), (2, 3), (1, 3)]
    a = betweenness(graph(4, edges))
    b = betweenness(graph(5, edges))
    for e in a.entries:
        assert b[e.journal].raw == e.raw
        assert b[e.journal].normalized == pytest.approx(e.raw / 6, abs=1e-15)
    assert b["N4"].raw == 0.0


def test_csv_layout():
    text = format_centrality(betweenness(graph(3, [(0, 1), (1, 2)], ("A", "B", "C"))))
    assert text.splitlines() == [
        "journal,raw,normalized,percent",
        "B,1.0,1.0,100.0",
        "A,0.0,0.0,0.0",
        "C,0.0,0.0,0.0",
    ]


small_graphs = st.integers(3, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.sampled_from(list(itertools.combinations(range(n), 2))), unique=True),
    )
)


@given(small_graphs)
@settings(max_examples=300, deadline=None)
def test_matches_brute_force(g):
    n, edges = g
    rep = betweenness(graph(n, edges))
    expected = normalized(n, edges)
    for i in range(n):
        assert abs(rep[f"N{i}"].normalized - expected[i]) <= 1e-12


@given(small_graphs, st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_relabeling_equivariance(g, rnd):
    n, edges = g
    perm = list(range(n))
    rnd.shuffle(perm)
    a = betweenness(graph(n, edges))
    b = betweenness(graph(n, [(perm[x], perm[y]) for x, y in edges]))
    for i in range(n):
        assert b[f"N{perm[i]}"].raw == pytest.approx(a[f"N{i}"].raw, abs=1e-12)


def test_deterministic():
    rng = random.Random(3)
    edges = [e for e in itertools.combinations(range(40), 2) if rng.random() < 0.1]
    assert betweenness(graph(40, edges)) == betweenness(graph(40, edges))

import itertools

import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from bibnet.coauthor import (
    UndirectedGraph,
    average_path_length,
    betweenness,
    coauthor_graph,
    connected_components,
    degree_distribution,
    diameter,
    graph_from_edges,
    undirected,
)
from bibnet.errors import DisconnectedGraphError, ValidationError
from bibnet.netcore import build_affiliation
from oracles import betweenness_by_enumeration, floyd_warshall, random_connected_graph


def _graph(n, edges):
    return graph_from_edges([(str(a), str(b)) for a, b in edges], nodes=[str(i) for i in range(n)])


def path_graph(n):
    return _graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return _graph(n, itertools.combinations(range(n), 2))


def test_three_authors_one_paper_is_triangle(authors):
    g = coauthor_graph(authors)
    assert g.edge_count == 3
    assert {w for *_, w in g.edges()} == {1.0}
    assert g.paper_counts.values.tolist() == [1, 1, 1]


def test_joint_papers_become_weights():
    aff = build_affiliation([("a", "p1"), ("b", "p1"), ("a", "p2"), ("b", "p2"), ("c", "p2")])
    g = coauthor_graph(aff)
    assert g.adjacency[g.index("a"), g.index("b")] == 2
    assert g.adjacency[g.index("a"), g.index("c")] == 1


def test_two_authors_single_edge():
    g = coauthor_graph(build_affiliation([("a", "p"), ("b", "p")]))
    assert g.edges() == [(0, 1, 1.0)]


def test_weighted_affiliation_rejected():
    with pytest.raises(ValidationError):
        coauthor_graph(build_affiliation([("a", "p", 2), ("b", "p")]))


def test_rejects_asymmetric_and_self_edges():
    with pytest.raises(ValidationError):
        UndirectedGraph(("a", "b"), sp.csr_matrix(np.array([[0, 1], [0, 0]])))
    with pytest.raises(ValidationError):
        UndirectedGraph(("a",), sp.csr_matrix(np.array([[1]])))
    with pytest.raises(ValidationError):
        graph_from_edges([("a", "a")])


def test_nrays_splits_into_two_components(nrays):
    rep = connected_components(undirected(nrays))
    assert [set(c) for c in rep.components] == [{str(i) for i in range(5, 13)}, {"1", "2", "3", "4"}]
    assert rep.main_share == pytest.approx(8 / 12)
    assert sum(rep.shares) == pytest.approx(1)


def test_isolates_are_singletons():
    rep = connected_components(_graph(4, [(0, 1)]))
    assert rep.sizes == [2, 1, 1]
    assert rep.main == ("0", "1")


@pytest.mark.parametrize("n", [2, 3, 6, 10])
def test_path_graph_closed_forms(n):
    g = path_graph(n)
    assert diameter(g) == n - 1
    assert average_path_length(g) == pytest.approx((n + 1) / 3)
    expected = [i * (n - 1 - i) for i in range(n)]
    np.testing.assert_allclose(betweenness(g).values, expected)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_complete_graph_closed_forms(n):
    g = complete_graph(n)
    assert diameter(g) == 1
    assert average_path_length(g) == 1.0
    assert not betweenness(g).values.any()


def test_star_betweenness():
    g = _graph(5, [(0, i) for i in range(1, 5)])
    b = betweenness(g)
    assert b.values[0] == 6
    assert betweenness(g, normalized=True).values[0] == pytest.approx(1.0)


def test_distances_on_component(nrays):
    g = undirected(nrays)
    with pytest.raises(DisconnectedGraphError):
        diameter(g)
    main = connected_components(g).main
    fw = floyd_warshall(8, [(a - 5, b - 5) for a, b in [(6, 5), (7, 5), (8, 7), (9, 8), (10, 8),
                                                         (10, 9), (11, 8), (11, 9), (12, 8), (12, 9), (12, 10)]])
    assert diameter(g, main) == fw.max() == 4
    assert average_path_length(g, main) == pytest.approx(fw.sum() / (8 * 7))


def test_single_node_errors():
    g = _graph(1, [])
    assert diameter(g) == 0
    with pytest.raises(ValidationError):
        average_path_length(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.floats(0, 0.6), st.integers(0, 2**31))
def test_metrics_match_oracles(n, p, seed):
    rng = np.random.default_rng(seed)
    edges = random_connected_graph(rng, n, p)
    g = _graph(n, edges)
    fw = floyd_warshall(n, edges)
    assert diameter(g) == fw.max()
    assert average_path_length(g) == pytest.approx(fw.sum() / (n * (n - 1)), abs=1e-12)
    np.testing.assert_allclose(betweenness(g).values, betweenness_by_enumeration(n, edges), atol=1e-12)


def test_betweenness_matches_networkx_on_larger_graph():
    rng = np.random.default_rng(5)
    edges = random_connected_graph(rng, 40, 0.08)
    ref = nx.betweenness_centrality(nx.Graph(edges), normalized=False)
    np.testing.assert_allclose(betweenness(_graph(40, edges)).values, [ref[i] for i in range(40)], atol=1e-9)


def test_distances_cross_batches(monkeypatch):
    import bibnet.coauthor as mod

    monkeypatch.setattr(mod, "_BFS_BATCH", 3)
    rng = np.random.default_rng(9)
    edges = random_connected_graph(rng, 11, 0.1)
    fw = floyd_warshall(11, edges)
    assert average_path_length(_graph(11, edges)) == pytest.approx(fw.sum() / 110)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**31), st.randoms(use_true_random=False))
def test_metrics_permutation_invariant(n, seed, rnd):
    rng = np.random.default_rng(seed)
    edges = random_connected_graph(rng, n, 0.3)
    perm = list(range(n))
    rnd.shuffle(perm)
    g, h = _graph(n, edges), _graph(n, [(perm[a], perm[b]) for a, b in edges])
    assert diameter(g) == diameter(h)
    assert average_path_length(g) == pytest.approx(average_path_length(h))
    bg, bh = betweenness(g).values, betweenness(h).values
    np.testing.assert_allclose([bh[perm[i]] for i in range(n)], bg, atol=1e-12)


def test_degree_distribution():
    rep = degree_distribution(_graph(5, [(0, i) for i in range(1, 5)]))
    assert rep.histogram == {1: 4, 4: 1}
    assert rep.max_degree == 4
    assert rep.mean_degree == pytest.approx(8 / 5)


def test_degree_counts_neighbours_not_weight():
    g = graph_from_edges([("a", "b", 3), ("b", "c")])
    assert degree_distribution(g).histogram == {1: 2, 2: 1}

# test_graph_core.py
import math

import networkx as nx
import numpy as np
import pytest

from generators import random_gnm
from graph_core import (
    INFINITY,
    Graph,
    SpannerDomainError,
    all_pairs_distances,
    bfs,
    edge_from_index,
    edge_index,
    encoding_bits,
    girth,
    max_edges,
    verify_additive,
    verify_multiplicative,
)


def _path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_graph_normalizes_edges():
    g = Graph.from_edges(4, [(2, 1), (0, 3), (1, 2)])
    assert g.m == 2
    assert g.sorted_edges == ((0, 3), (1, 2))
    assert g.has_edge(2, 1)
    assert list(g.degrees()) == [1, 1, 1, 1]


def test_graph_rejects_bad_edges():
    with pytest.raises(SpannerDomainError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(SpannerDomainError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(SpannerDomainError):
        Graph.from_edges(3, [(0, 1), (1, 0)], strict=True)


def test_distances_on_path():
    dist = all_pairs_distances(_path(5))
    assert dist[0, 4] == 4
    assert dist.row(2) == [2, 1, 0, 1, 2]


def test_distances_disconnected_are_infinite():
    g = Graph.from_edges(4, [(0, 1)])
    dist = all_pairs_distances(g)
    assert dist[0, 2] == INFINITY
    assert math.isinf(dist[2, 3])


def test_bfs_matches_networkx():
    g = random_gnm(40, 90, seed=3)
    tree = bfs(g, 0)
    expected = nx.single_source_shortest_path_length(g.to_networkx(), 0)
    for v in range(g.n):
        assert tree.depth[v] == expected.get(v)
    assert tree.size == len(expected)
    assert nx.is_forest(nx.Graph(tree.edges()))


def test_bfs_bad_root():
    with pytest.raises(SpannerDomainError):
        bfs(_path(3), 3)


@pytest.mark.parametrize("n", [3, 4, 7, 10])
def test_girth_of_cycle(n):
    assert girth(_cycle(n)) == n


def test_girth_of_forest_is_infinite():
    assert girth(_path(6)) == INFINITY
    assert girth(Graph(0)) == INFINITY


def test_girth_heawood_graph():
    heawood = nx.heawood_graph()
    g = Graph.from_edges(heawood.number_of_nodes(), heawood.edges())
    assert girth(g) == 6


def test_girth_matches_networkx_on_random_graphs():
    for seed in range(5):
        g = random_gnm(30, 45, seed)
        expected = nx.girth(g.to_networkx())
        assert girth(g) == expected


def test_verify_additive_and_multiplicative():
    g = _cycle(6)
    h = _path(6)  # без ребра (5, 0): d_H(0,5) = 5 при d_G = 1
    assert not verify_additive(g, h, 3)
    assert verify_additive(g, h, 4)
    assert not verify_multiplicative(g, h, 4)
    assert verify_multiplicative(g, h, 5)


def test_verify_requires_subgraph():
    with pytest.raises(SpannerDomainError):
        verify_additive(_path(4), _cycle(4), 0)
    with pytest.raises(SpannerDomainError):
        verify_multiplicative(_path(4), _path(5), 1)


def test_verify_ignores_disconnected_pairs():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert verify_additive(g, g, 0)
    assert verify_multiplicative(g, g, 1)


def test_encoding_bits():
    assert encoding_bits(2) == 1
    assert encoding_bits(16) == 4
    assert encoding_bits(17) == 5
    with pytest.raises(SpannerDomainError):
        encoding_bits(1)


def test_edge_index_is_bijection():
    n = 9
    indices = [edge_index(u, v, n) for u in range(n) for v in range(u + 1, n)]
    assert indices == list(range(max_edges(n)))
    for index in range(max_edges(n)):
        u, v = edge_from_index(index, n)
        assert edge_index(u, v, n) == index


def test_edge_index_out_of_range():
    with pytest.raises(SpannerDomainError):
        edge_index(0, 5, 5)
    with pytest.raises(SpannerDomainError):
        edge_from_index(10, 5)


def test_csr_is_symmetric():
    g = random_gnm(20, 40, seed=1)
    matrix = g.to_csr().toarray()
    assert np.array_equal(matrix, matrix.T)
    assert int(matrix.sum()) == 2 * g.m


if __name__ == '__main__':
    test_graph_normalizes_edges()
    test_girth_heawood_graph()
    test_edge_index_is_bijection()
    print("✅ graph_core OK")

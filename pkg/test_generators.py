# test_generators.py
import networkx as nx
import pytest

from generators import (
    PartitionMode,
    biregular_girth6,
    complete_bipartite,
    hard_instance_mult3,
    lift_spanner,
    make_rng,
    partition_edges,
    projective_incidence,
    random_gnm,
    split_duplicated_instance,
)
from graph_core import SpannerDomainError, girth, verify_multiplicative


def test_complete_bipartite():
    g = complete_bipartite(3, 4)
    assert g.n == 7
    assert g.m == 12
    assert girth(g) == 4


def test_random_gnm_exact_and_deterministic():
    g = random_gnm(50, 200, seed=5)
    assert g.m == 200
    assert g == random_gnm(50, 200, seed=5)
    assert g != random_gnm(50, 200, seed=6)


def test_random_gnm_bounds():
    assert random_gnm(10, 0, seed=1).m == 0
    assert random_gnm(10, 45, seed=1).m == 45
    with pytest.raises(SpannerDomainError):
        random_gnm(10, 46, seed=1)


def test_make_rng_streams_independent():
    a = make_rng(1, 2).integers(0, 1 << 30, size=4).tolist()
    b = make_rng(1, 3).integers(0, 1 << 30, size=4).tolist()
    assert a != b
    assert a == make_rng(1, 2).integers(0, 1 << 30, size=4).tolist()


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_projective_incidence(q):
    g = projective_incidence(q)
    points = q * q + q + 1
    assert g.n == 2 * points
    assert g.m == points * (q + 1)
    assert set(g.degrees().tolist()) == {q + 1}
    assert girth(g) == 6


def test_projective_q2_is_heawood():
    g = projective_incidence(2)
    assert nx.is_isomorphic(g.to_networkx(), nx.heawood_graph())


def test_projective_rejects_non_prime():
    with pytest.raises(SpannerDomainError):
        projective_incidence(4)
    with pytest.raises(SpannerDomainError):
        projective_incidence(1)


def test_biregular_girth6():
    q, split = 5, 3
    g = biregular_girth6(q, split)
    points = q * q + q + 1
    degrees = g.degrees().tolist()
    assert g.n == points + split * points
    assert set(degrees[:points]) == {q + 1}
    assert set(degrees[points:]) == {(q + 1) // split}
    assert girth(g) >= 6


def test_biregular_requires_divisor():
    with pytest.raises(SpannerDomainError):
        biregular_girth6(5, 4)


def test_hard_instance_mult3():
    g, partition = hard_instance_mult3(2, 4)
    partition.validate(g)
    assert not partition.has_duplicates()
    assert partition.sizes() == [21] * 4
    assert g.n == 4 * 7 + 7


@pytest.mark.parametrize("mode", PartitionMode.ALL)
def test_partition_covers_graph(mode):
    g = random_gnm(30, 80, seed=2)
    partition = partition_edges(g, 5, mode, seed=2)
    partition.validate(g)
    assert partition.allow_duplication == (mode == PartitionMode.DUPLICATED_RANDOM)
    assert partition == partition_edges(g, 5, mode, seed=2)


def test_adversarial_partition_groups_by_vertex():
    g = random_gnm(30, 80, seed=4)
    partition = partition_edges(g, 4, PartitionMode.ADVERSARIAL_BY_VERTEX, seed=4)
    owner = {}
    for player, edges in enumerate(partition.assignment):
        for u, _ in edges:
            assert owner.setdefault(u, player) == player


def test_partition_rejects_bad_arguments():
    g = random_gnm(10, 10, seed=1)
    with pytest.raises(SpannerDomainError):
        partition_edges(g, 0, PartitionMode.DISJOINT_RANDOM, seed=1)
    with pytest.raises(SpannerDomainError):
        partition_edges(g, 2, "round-robin", seed=1)


def test_split_duplicated_instance_and_lift():
    g = random_gnm(16, 40, seed=8)
    partition = partition_edges(g, 5, PartitionMode.DUPLICATED_RANDOM, seed=8)
    split_graph, split_partition, groups = split_duplicated_instance(g, partition)

    split_partition.validate(split_graph)
    assert not split_partition.has_duplicates()
    assert split_graph.n == g.n * 3
    assert split_graph.m == sum(partition.sizes())

    # Весь расщеплённый граф поднимается ровно в g
    lifted = lift_spanner(split_graph, groups, g)
    assert lifted == g
    assert verify_multiplicative(g, lifted, 1)


if __name__ == '__main__':
    test_projective_incidence(2)
    test_hard_instance_mult3()
    test_split_duplicated_instance_and_lift()
    print("✅ generators OK")

# test_protocols.py
import networkx as nx
import pytest

from generators import (
    EdgePartition,
    PartitionMode,
    complete_bipartite,
    hard_instance_mult3,
    partition_edges,
    projective_incidence,
    random_gnm,
)
from graph_core import (
    Graph,
    SpannerDomainError,
    bfs,
    encoding_bits,
    girth,
    verify_additive,
    verify_multiplicative,
)
from protocols import (
    PROTOCOLS,
    baswana_sen,
    cluster_pair_keys,
    degree_exchange,
    dist_bfs,
    get_protocol,
    greedy_filter,
    run_split_protocol,
    simultaneous_mult,
    stretch_target,
    verify_result,
)
from sampling_params import SamplingPlan
from simnet import Mode, ProtocolContext, ProtocolViolation, run_protocol
from utils import ceil_log2

MODES = (PartitionMode.DISJOINT_RANDOM, PartitionMode.DUPLICATED_RANDOM)


def _instance(n, m, s, mode, seed):
    g = random_gnm(n, m, seed)
    return g, partition_edges(g, s, mode, seed)


def _instances(count, seed0=0):
    """Случайные (граф, разбиение) с n ≤ 64 и m до n^1.5"""
    for seed in range(seed0, seed0 + count):
        n = 8 + seed * 7 % 57
        m = min(n * (n - 1) // 2, int(n ** 1.5) - seed % 5)
        s = (1, 2, 4, 8)[seed % 4]
        yield _instance(n, m, s, MODES[seed % 2], seed)


# === Общие шаги ===

def test_degree_exchange():
    g, partition = _instance(30, 70, 4, PartitionMode.DISJOINT_RANDOM, 1)
    ctx = ProtocolContext(g.n, partition, seed=1)
    degrees = degree_exchange(ctx)
    assert degrees.tolist() == g.degrees().tolist()
    # n степеней по ⌈log2 n⌉ бит вверх от каждого и вниз каждому
    assert ctx.transcript.total_bits == 2 * 4 * 30 * 5


def test_degree_exchange_clips_duplicates():
    g = complete_bipartite(1, 3)
    edges = g.sorted_edges
    partition = EdgePartition(s=2, n=4, assignment=(edges, edges), allow_duplication=True)
    degrees = degree_exchange(ProtocolContext(4, partition, seed=1))
    assert degrees.tolist() == [3, 2, 2, 2]


def test_dist_bfs_matches_centralized():
    for g, partition in _instances(100):
        ctx = ProtocolContext(g.n, partition, seed=0)
        tree = dist_bfs(ctx, 0)
        expected = bfs(g, 0)
        assert tree.depth == expected.depth
        assert set(tree.edges()) <= g.edges
        assert nx.is_forest(nx.Graph(tree.edges()))

        depth = max(d for d in expected.depth if d is not None)
        s, n = partition.s, g.n
        overhead = 3 * s * (depth + 1) * ceil_log2(n + 1)
        assert ctx.transcript.total_bits <= 4 * s * n * encoding_bits(n) + overhead


def test_truncated_bfs_budget():
    g, partition = _instance(40, 150, 3, PartitionMode.DISJOINT_RANDOM, 2)
    full = bfs(g, 5)
    tree = dist_bfs(ProtocolContext(g.n, partition, seed=0), 5, budget=10)
    assert tree.size == min(10, full.size)
    # Уровни заполняются по порядку: глубина каждой вершины совпадает с эталоном
    for v in tree.covered():
        assert tree.depth[v] == full.depth[v]


def test_dist_bfs_on_path_and_square():
    path = Graph.from_edges(6, [(i, i + 1) for i in range(5)])
    partition = partition_edges(path, 2, PartitionMode.DISJOINT_RANDOM, seed=1)
    tree = dist_bfs(ProtocolContext(6, partition, seed=1), 0)
    assert tree.depth == (0, 1, 2, 3, 4, 5)

    square = complete_bipartite(2, 2)
    partition = partition_edges(square, 2, PartitionMode.DISJOINT_RANDOM, seed=1)
    tree = dist_bfs(ProtocolContext(4, partition, seed=1), 0)
    assert tree.depth == (0, 2, 1, 1)


# === Аддитивные ===

@pytest.mark.slow
def test_additive2_events_imply_stretch():
    verified = 0
    for seed in range(100):
        g, partition = _instance(64, 600, (2, 4)[seed % 2], MODES[seed % 2], seed)
        result = run_protocol("additive2", g, partition, seed)
        ok = verify_result(g, result)
        if result.events_hold:
            assert ok
        verified += ok
        assert result.h.is_subgraph_of(g)
    assert verified >= 99


def test_additive_k_delegates_below_six():
    g, partition = _instance(30, 120, 2, PartitionMode.DISJOINT_RANDOM, 3)
    result = run_protocol("additive-k", g, partition, seed=3, k=4)
    assert result.protocol == "additive-k"
    assert result.details["delegated"]
    assert stretch_target("additive-k", 4) == ("additive", 4)
    assert verify_result(g, result)


def test_additive2_keeps_low_degree_graph():
    g = complete_bipartite(2, 2)
    partition = EdgePartition(s=1, n=4, assignment=(g.sorted_edges,), allow_duplication=False)
    result = run_protocol("additive2", g, partition, seed=1)
    assert result.h == g


@pytest.mark.slow
def test_additive_k8_events_imply_stretch():
    verified = 0
    for seed in range(100):
        g, partition = _instance(64, 600, (2, 4)[seed % 2], MODES[seed % 2], seed)
        result = run_protocol("additive-k", g, partition, seed, k=8)
        ok = verify_additive(g, result.h, 8)
        if result.events_hold:
            assert ok
        verified += ok
        assert "missing_edges_hit" in result.events
    assert verified >= 99


def test_additive_k_rejects_zero():
    g, partition = _instance(10, 10, 1, PartitionMode.DISJOINT_RANDOM, 1)
    with pytest.raises(SpannerDomainError):
        run_protocol("additive-k", g, partition, seed=1, k=0)


# === Мультипликативные ===

def test_greedy_filter_girth():
    g = random_gnm(40, 300, seed=4)
    for k in (2, 3):
        forest = greedy_filter(g.sorted_edges, k)
        h = Graph(g.n, frozenset(forest))
        assert girth(h) > 2 * k
        assert verify_multiplicative(g, h, 2 * k - 1)


@pytest.mark.slow
def test_greedy_soundness_and_size():
    for index, (g, partition) in enumerate(_instances(200, seed0=1000)):
        k = (2, 3, 4)[index % 3]
        result = run_protocol("greedy", g, partition, seed=index, k=k)
        assert verify_multiplicative(g, result.h, 2 * k - 1)
        assert girth(result.h) > 2 * k
        assert result.h.m <= g.n ** (1 + 1 / k) + g.n


def test_greedy_small_batch():
    for index, (g, partition) in enumerate(_instances(12)):
        k = (2, 3, 4)[index % 3]
        result = run_protocol("greedy", g, partition, seed=index, k=k)
        assert verify_result(g, result)
        assert girth(result.h) > 2 * k


def test_greedy_on_triangle_and_square():
    triangle = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    partition = EdgePartition(
        s=1, n=3, assignment=(triangle.sorted_edges,), allow_duplication=False
    )
    result = run_protocol("greedy", triangle, partition, seed=1, k=2)
    assert result.h == Graph.from_edges(3, [(0, 1), (0, 2)])

    square = complete_bipartite(2, 2)
    partition = partition_edges(square, 2, PartitionMode.DISJOINT_RANDOM, seed=1)
    result = run_protocol("greedy", square, partition, seed=1, k=2)
    assert result.h.m == 3
    assert verify_multiplicative(square, result.h, 3)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_greedy_keeps_girth6_graph(q):
    g = projective_incidence(q)
    partition = partition_edges(g, 4, PartitionMode.DISJOINT_RANDOM, seed=q)
    result = run_protocol("greedy", g, partition, seed=q, k=2)
    assert result.h == g


def test_greedy_relay_rounds():
    g, partition = _instance(20, 60, 4, PartitionMode.DISJOINT_RANDOM, 5)
    result = run_protocol("greedy", g, partition, seed=5, k=2)
    # Три пересылки (вверх + вниз) и финальная отправка
    assert result.transcript.messages == 2 * 3 + 1
    assert result.transcript.rounds == 4


def test_simultaneous_protocol():
    g, partition = _instance(30, 120, 3, PartitionMode.DUPLICATED_RANDOM, 6)
    result = run_protocol("simultaneous", g, partition, seed=6, k=2)
    assert verify_result(g, result)
    assert result.transcript.messages == 3
    assert result.transcript.bits_down == 0


def test_simultaneous_requires_mode():
    g, partition = _instance(10, 10, 2, PartitionMode.DISJOINT_RANDOM, 1)
    ctx = ProtocolContext(g.n, partition, seed=1, mode=Mode.INTERACTIVE)
    with pytest.raises(ProtocolViolation):
        simultaneous_mult(ctx, 2)


# === Baswana-Sen ===

def test_cluster_pair_keys():
    final = {0: 0, 1: 0, 2: 5}
    assert cluster_pair_keys(final, final, 1, 2, odd=True) == [(0, 5), (0, 5)]
    assert cluster_pair_keys(final, final, 0, 1, odd=True) == []
    other = {0: 0, 1: 1, 2: 2}
    assert cluster_pair_keys(final, other, 1, 2, odd=False) == [(0, 2), (5, 1)]
    assert cluster_pair_keys({}, other, 1, 2, odd=False) == []


@pytest.mark.slow
@pytest.mark.parametrize("k", [3, 4, 5])
def test_baswana_sen_events_imply_stretch(k):
    verified = 0
    for seed in range(100):
        g, partition = _instance(64, 800, (2, 4)[seed % 2], MODES[seed % 2], seed)
        result = run_protocol("baswana-sen", g, partition, seed, k=k)
        ok = verify_result(g, result)
        if result.events_hold:
            assert ok
        verified += ok
        assert result.h.is_subgraph_of(g)
    assert verified >= 99


def test_baswana_sen_small_batch():
    for seed in range(6):
        n = 24 + (seed * 5) % 41
        g, partition = _instance(n, int(n ** 1.5), (2, 4)[seed % 2], MODES[seed % 2], seed)
        result = run_protocol("baswana-sen", g, partition, seed, k=3 + seed % 3)
        verify_result(g, result)
        if result.events_hold:
            assert result.verified
        assert result.h.is_subgraph_of(g)


def test_baswana_sen_cluster_radius():
    g, partition = _instance(60, 400, 2, PartitionMode.DISJOINT_RANDOM, 7)
    result = run_protocol("baswana-sen", g, partition, seed=7, k=5)
    for state in result.details["levels"]:
        for v, (center, depth) in state.membership.items():
            assert depth <= state.radius_bound
            assert state.cluster_of(v) == center


def test_baswana_sen_requires_k3():
    g, partition = _instance(10, 10, 2, PartitionMode.DISJOINT_RANDOM, 1)
    with pytest.raises(SpannerDomainError):
        run_protocol("baswana-sen", g, partition, seed=1, k=2)


def test_baswana_sen_keeps_low_degree_graph():
    cycle = Graph.from_edges(30, [(i, (i + 1) % 30) for i in range(30)])
    partition = partition_edges(cycle, 2, PartitionMode.DISJOINT_RANDOM, seed=2)
    result = run_protocol("baswana-sen", cycle, partition, seed=2, k=3)
    assert result.h == cycle


def test_baswana_sen_players_keep_sampled_clusters():
    g, partition = _instance(60, 400, 2, PartitionMode.DISJOINT_RANDOM, 7)
    ctx = ProtocolContext(g.n, partition, seed=7)
    result = baswana_sen(ctx, 5)
    last = set(result.details["levels"][-1].centers)
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            assert view.memory["sampled"] == last
            assert set(view.memory["levels"][-1].values()) <= last


# === Реестр и проверка ===

def test_registry():
    assert set(PROTOCOLS) == {
        "additive2", "additive-k", "greedy", "baswana-sen", "simultaneous", "send-all",
    }
    assert get_protocol("simultaneous").mode == Mode.SIMULTANEOUS
    with pytest.raises(SpannerDomainError):
        get_protocol("bfs")


def test_stretch_targets():
    assert stretch_target("additive2") == ("additive", 2)
    assert stretch_target("additive-k", 8) == ("additive", 8)
    assert stretch_target("greedy", 3) == ("multiplicative", 5)
    assert stretch_target("send-all") == ("additive", 0)
    with pytest.raises(SpannerDomainError):
        stretch_target("baswana-sen")


def test_missing_k_is_domain_error():
    g, partition = _instance(10, 10, 2, PartitionMode.DISJOINT_RANDOM, 1)
    with pytest.raises(SpannerDomainError):
        run_protocol("greedy", g, partition, seed=1)


def test_split_protocol_lifts_spanner():
    g, partition = _instance(30, 120, 4, PartitionMode.DUPLICATED_RANDOM, 11)
    result = run_split_protocol("send-all", g, partition, seed=11)
    assert result.h == g
    assert result.details["split_n"] == g.n * 2

    result = run_split_protocol("greedy", g, partition, seed=11, k=2)
    assert result.h.is_subgraph_of(g)
    assert verify_result(g, result)


def test_hard_instance_keeps_base_edges():
    g, partition = hard_instance_mult3(2, 4)
    result = run_protocol("additive2", g, partition, seed=1)
    if verify_multiplicative(g, result.h, 3):
        assert result.h.m >= 21


def test_free_randomness_lowers_cost():
    g, partition = _instance(40, 250, 4, PartitionMode.DISJOINT_RANDOM, 9)
    paid = run_protocol("additive2", g, partition, seed=9)
    free = run_protocol("additive2", g, partition, seed=9, free_randomness=True)
    assert free.h == paid.h
    assert free.transcript.total_bits < paid.transcript.total_bits


def test_sampling_plan_constant_scales_roots():
    g, partition = _instance(40, 250, 4, PartitionMode.DISJOINT_RANDOM, 9)
    small = run_protocol("additive2", g, partition, seed=9, plan=SamplingPlan(c=0.1))
    large = run_protocol("additive2", g, partition, seed=9, plan=SamplingPlan(c=2.0))
    assert len(small.details["roots"]) < len(large.details["roots"])


def test_empty_graph():
    g = Graph(0)
    partition = EdgePartition(s=2, n=0, assignment=((), ()), allow_duplication=False)
    result = run_protocol("additive2", g, partition, seed=1)
    assert result.h.m == 0


if __name__ == '__main__':
    test_degree_exchange()
    test_dist_bfs_matches_centralized()
    test_additive2_events_imply_stretch()
    test_greedy_small_batch()
    print("✅ protocols OK")

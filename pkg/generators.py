# generators.py
"""
Генераторы входов: случайные графы, экстремальные графы обхвата 6,
жёсткий инстанс для ×3 и разбиения рёбер между игроками
"""

import logging
import math
from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Set, Tuple

import numpy as np
from sympy import isprime

from graph_core import (
    Edge,
    Graph,
    SpannerDomainError,
    edge_from_index,
    max_edges,
    normalize_edge,
)

logger = logging.getLogger(__name__)

_SEED_MASK = (1 << 64) - 1


class PartitionMode:
    """Режимы раздачи рёбер игрокам"""
    DISJOINT_RANDOM = "disjoint-random"
    DUPLICATED_RANDOM = "duplicated-random"
    ADVERSARIAL_BY_VERTEX = "adversarial-by-vertex"

    ALL = (DISJOINT_RANDOM, DUPLICATED_RANDOM, ADVERSARIAL_BY_VERTEX)


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """
    Генератор на Philox (counter-based), без глобального состояния

    Args:
        seed: 64-битный сид запуска
        keys: метки подпотока (этап, игрок, ...), дают независимые потоки
    """
    sequence = np.random.SeedSequence(entropy=seed & _SEED_MASK, spawn_key=tuple(keys))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True)
class EdgePartition:
    """Раздача рёбер s игрокам (E_1..E_s)"""
    s: int
    n: int
    assignment: Tuple[Tuple[Edge, ...], ...]
    allow_duplication: bool

    def player_edges(self, player: int) -> Tuple[Edge, ...]:
        return self.assignment[player]

    def union(self) -> FrozenSet[Edge]:
        return frozenset(edge for edges in self.assignment for edge in edges)

    def sizes(self) -> List[int]:
        return [len(edges) for edges in self.assignment]

    def has_duplicates(self) -> bool:
        return sum(self.sizes()) != len(self.union())

    def validate(self, g: Graph):
        """Проверяет, что разбиение покрывает ровно рёбра g"""
        if self.n != g.n:
            raise SpannerDomainError(f"Разбиение на n={self.n}, граф на n={g.n}")
        if len(self.assignment) != self.s:
            raise SpannerDomainError(f"Ожидалось {self.s} игроков, задано {len(self.assignment)}")
        union = self.union()
        if union != g.edges:
            missing = len(g.edges - union)
            extra = len(union - g.edges)
            raise SpannerDomainError(
                f"Разбиение не совпадает с графом: нет {missing} рёбер, лишних {extra}"
            )
        if not self.allow_duplication and self.has_duplicates():
            raise SpannerDomainError("Ребро у нескольких игроков при allow_duplication=False")


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}: левая доля 0..a-1, правая a..a+b-1"""
    if a < 1 or b < 1:
        raise SpannerDomainError(f"K_(a,b) требует a, b ≥ 1, получено ({a}, {b})")
    return Graph(a + b, frozenset((u, a + v) for u in range(a) for v in range(b)))


def random_gnm(n: int, m: int, seed: int) -> Graph:
    """Равномерный простой граф ровно с m рёбрами"""
    total = max_edges(n)
    if m < 0 or m > total:
        raise SpannerDomainError(f"m={m} вне [0, {total}] для n={n}")
    if m == 0:
        return Graph(n)

    rng = make_rng(seed)
    indices = np.sort(rng.choice(total, size=m, replace=False))
    return Graph(n, frozenset(edge_from_index(int(i), n) for i in indices))


def _projective_points(q: int) -> np.ndarray:
    """Нормированные точки PG(2,q): первая ненулевая координата = 1, лексикографически"""
    points = [(0, 0, 1)]
    points.extend((0, 1, z) for z in range(q))
    points.extend((1, y, z) for y in range(q) for z in range(q))
    return np.array(points, dtype=np.int64)


def projective_incidence(q: int) -> Graph:
    """
    Граф инцидентности точек и прямых PG(2,q)

    Точки 0..N-1, прямые N..2N-1 (N = q²+q+1). Прямая задаётся тем же
    нормированным вектором; точка p лежит на прямой l iff p·l ≡ 0 (mod q).
    """
    if q < 2 or not isprime(q):
        raise SpannerDomainError(f"Поддерживаются только простые q, получено {q}")

    points = _projective_points(q)
    n_points = len(points)
    incidence = (points @ points.T) % q == 0
    rows, cols = np.nonzero(incidence)
    edges = frozenset((int(p), n_points + int(l)) for p, l in zip(rows, cols))

    logger.debug(f"📐 PG(2,{q}): {n_points} points, {len(edges)} incidences")
    return Graph(2 * n_points, edges)


def biregular_girth6(q: int, g: int) -> Graph:
    """
    Двудольный бирегулярный граф обхвата ≥ 6 расщеплением вершин

    Каждая прямая PG(2,q) делится на g копий по (q+1)/g последовательных
    рёбер (соседи по возрастанию). Точки 0..N-1 степени q+1,
    копии прямых N + l·g + c степени (q+1)/g.
    """
    if g < 1 or (q + 1) % g != 0:
        raise SpannerDomainError(f"g={g} должно делить q+1={q + 1}")

    base = projective_incidence(q)
    n_points = base.n // 2
    chunk = (q + 1) // g
    edges = set()

    for line in range(n_points):
        neighbors = base.adjacency[n_points + line]
        for position, point in enumerate(neighbors):
            copy = position // chunk
            edges.add((point, n_points + line * g + copy))

    return Graph(n_points + g * n_points, frozenset(edges))


def hard_instance_mult3(q: int, s: int, g: int = 1) -> Tuple[Graph, EdgePartition]:
    """
    Жёсткий инстанс для ×3-спаннера без дублирования

    s копий левой доли (точек) базового графа, общая правая доля.
    Игрок i владеет рёбрами своей копии: (i·N + a, s·N + x).
    """
    if s < 1:
        raise SpannerDomainError(f"s должно быть ≥ 1, получено {s}")

    base = biregular_girth6(q, g)
    n_left = q * q + q + 1
    n_right = base.n - n_left
    n = s * n_left + n_right

    assignment = []
    for player in range(s):
        owned = sorted(
            (player * n_left + a, s * n_left + (b - n_left)) for a, b in base.sorted_edges
        )
        assignment.append(tuple(owned))

    graph = Graph(n, frozenset(edge for edges in assignment for edge in edges))
    partition = EdgePartition(s=s, n=n, assignment=tuple(assignment), allow_duplication=False)
    logger.info(f"🧩 Hard instance q={q}, s={s}: n={n}, m={graph.m}")
    return graph, partition


def _vertex_hash(u: int, seed: int) -> int:
    """Перемешивание splitmix64 для adversarial-by-vertex"""
    x = (u + (seed & _SEED_MASK) * 0x9E3779B97F4A7C15 + 0x9E3779B97F4A7C15) & _SEED_MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _SEED_MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _SEED_MASK
    return x ^ (x >> 31)


def _random_nonempty_subset(rng: np.random.Generator, s: int) -> List[int]:
    """Равномерное непустое подмножество игроков"""
    if s <= 62:
        mask = int(rng.integers(1, 1 << s))
        return [i for i in range(s) if mask >> i & 1]
    while True:
        chosen = np.flatnonzero(rng.random(s) < 0.5)
        if len(chosen):
            return [int(i) for i in chosen]


def partition_edges(g: Graph, s: int, mode: str, seed: int) -> EdgePartition:
    """
    Раздаёт рёбра графа s игрокам

    Args:
        mode: disjoint-random | duplicated-random | adversarial-by-vertex
    """
    if s < 1:
        raise SpannerDomainError(f"s должно быть ≥ 1, получено {s}")
    if mode not in PartitionMode.ALL:
        raise SpannerDomainError(f"Неизвестный режим разбиения: {mode}")

    rng = make_rng(seed, 1)
    owned: List[List[Edge]] = [[] for _ in range(s)]

    if mode == PartitionMode.DISJOINT_RANDOM:
        players = rng.integers(0, s, size=g.m)
        for edge, player in zip(g.sorted_edges, players):
            owned[int(player)].append(edge)

    elif mode == PartitionMode.DUPLICATED_RANDOM:
        for edge in g.sorted_edges:
            for player in _random_nonempty_subset(rng, s):
                owned[player].append(edge)

    else:
        for edge in g.sorted_edges:
            owned[_vertex_hash(edge[0], seed) % s].append(edge)

    partition = EdgePartition(
        s=s,
        n=g.n,
        assignment=tuple(tuple(edges) for edges in owned),
        allow_duplication=(mode == PartitionMode.DUPLICATED_RANDOM),
    )
    logger.debug(f"🔀 Partition {mode}: s={s}, sizes={partition.sizes()}")
    return partition


# === Сведение «с дублированием» → «без дублирования» ===

def split_duplicated_instance(
    g: Graph, partition: EdgePartition
) -> Tuple[Graph, EdgePartition, Tuple[Tuple[int, ...], ...]]:
    """
    Заменяет каждую вершину v группой из r = ⌈√s⌉ вершин v·r..v·r+r-1

    j-й владелец ребра {u,v} (по порядку игроков) получает своё ребро
    (u·r + j div r, v·r + j mod r); копии разных игроков не пересекаются.

    Returns:
        (граф, разбиение без дублирования, группы вершин)
    """
    partition.validate(g)
    s = partition.s
    r = math.isqrt(s - 1) + 1

    holders = {edge: [] for edge in g.sorted_edges}
    for player, edges in enumerate(partition.assignment):
        for edge in edges:
            holders[edge].append(player)

    owned: List[List[Edge]] = [[] for _ in range(s)]
    for (u, v), players in holders.items():
        for j, player in enumerate(players):
            owned[player].append((u * r + j // r, v * r + j % r))

    n_split = g.n * r
    split_partition = EdgePartition(
        s=s,
        n=n_split,
        assignment=tuple(tuple(sorted(edges)) for edges in owned),
        allow_duplication=False,
    )
    split_graph = Graph(n_split, split_partition.union())
    groups = tuple(tuple(range(v * r, v * r + r)) for v in range(g.n))
    return split_graph, split_partition, groups


def lift_spanner(
    h_split: Graph, groups: Sequence[Sequence[int]], g: Graph
) -> Graph:
    """
    Переносит спаннер расщеплённого графа обратно: {u,v} ∈ H iff
    в H' есть ребро между группами S_u и S_v

    Мультипликативное растяжение сохраняется (путь в H' проецируется
    на путь не длиннее в H).
    """
    owner = {}
    for v, members in enumerate(groups):
        for member in members:
            owner[member] = v

    lifted: Set[Edge] = set()
    for a, b in h_split.edges:
        lifted.add(normalize_edge(owner[a], owner[b]))

    h = Graph(g.n, frozenset(lifted))
    if not h.is_subgraph_of(g):
        raise SpannerDomainError("Поднятый спаннер не подграф исходного графа")
    return h

# streaming.py
"""
Turnstile-поток рёбер, ℓ0-семплер и многопроходный спаннер на семплерах
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from config import DEFAULT_C_SLOTS
from generators import make_rng
from graph_core import Edge, Graph, SpannerDomainError, edge_from_index, edge_index, max_edges
from protocols import cluster_pair_keys

logger = logging.getLogger(__name__)

# Простое Мерсенна для полиномиальных хэшей; произведения < 2^62 влезают в int64
PRIME = (1 << 31) - 1

# Номера подпотоков Philox
_STREAM_HASH = 3
_STREAM_QUERY = 5
_STREAM_CENTERS = 11


# === Поток ===

@dataclass(frozen=True)
class TurnstileStream:
    """Обновления (номер ребра, ±1); граф - рёбра с положительным итогом"""
    n: int
    updates: Tuple[Tuple[int, int], ...] = ()

    @property
    def dim(self) -> int:
        return max_edges(self.n)

    def net_counts(self) -> Dict[int, int]:
        counts: Counter = Counter()
        for index, delta in self.updates:
            counts[index] += delta
        return {index: count for index, count in counts.items() if count != 0}

    def validate(self):
        """Номера в [0, C(n,2)), delta = ±1, итоговые счётчики ≥ 0"""
        dim = self.dim
        for position, (index, delta) in enumerate(self.updates):
            if not 0 <= index < dim:
                raise SpannerDomainError(f"Обновление {position}: номер {index} вне [0, {dim})")
            if delta not in (1, -1):
                raise SpannerDomainError(f"Обновление {position}: delta={delta}, ожидалось ±1")
        negative = [index for index, count in self.net_counts().items() if count < 0]
        if negative:
            raise SpannerDomainError(f"Отрицательный итог у рёбер {sorted(negative)[:3]}")

    def net_graph(self) -> Graph:
        self.validate()
        edges = frozenset(
            edge_from_index(index, self.n)
            for index, count in self.net_counts().items() if count > 0
        )
        return Graph(self.n, edges)


def validate_stream(stream: TurnstileStream):
    stream.validate()


def net_graph(stream: TurnstileStream) -> Graph:
    return stream.net_graph()


def churned_stream(g: Graph, churn: float, seed: int) -> TurnstileStream:
    """
    Вставки всех рёбер g плюс round(churn·m) шумовых пар (+e, −e)
    на случайных номерах; порядок перемешан. Итоговый граф равен g.
    """
    if churn < 0:
        raise SpannerDomainError(f"churn должно быть ≥ 0, получено {churn}")

    rng = make_rng(seed, 2)
    updates = [(edge_index(u, v, g.n), 1) for u, v in g.sorted_edges]
    noise = round(churn * g.m)
    if noise and max_edges(g.n):
        for index in rng.integers(0, max_edges(g.n), size=noise):
            updates.append((int(index), 1))
            updates.append((int(index), -1))

    # Удаление не должно опережать свою вставку: переставляем пары как блоки
    blocks: List[List[Tuple[int, int]]] = [[update] for update in updates[: g.m]]
    blocks.extend(updates[i: i + 2] for i in range(g.m, len(updates), 2))
    order = rng.permutation(len(blocks))
    shuffled = tuple(update for position in order for update in blocks[position])
    return TurnstileStream(n=g.n, updates=shuffled)


# === ℓ0-семплер ===

def _poly(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Полином степени 3 по модулю PRIME (схема Горнера), coef[..., 0..3]"""
    acc = coef[..., 3]
    for c in (2, 1, 0):
        acc = (acc * x + coef[..., c]) % PRIME
    return acc


def sampler_shape(dim: int, delta: float, groups: int = 1) -> Tuple[int, int, int]:
    """(копии, группы, уровни) для размерности dim и вероятности ошибки delta"""
    if not 0 < delta < 1:
        raise SpannerDomainError(f"δ должно быть в (0, 1), получено {delta}")
    reps = max(1, math.ceil(math.log2(1 / delta)))
    if groups > 1:
        reps *= 2
    return reps, groups, dim.bit_length() + 1


def sampler_words(dim: int, delta: float, groups: int = 1) -> int:
    """Память семплера в машинных словах: четыре счётчика на ячейку"""
    reps, groups, levels = sampler_shape(dim, delta, groups)
    return 4 * reps * groups * levels


class L0Sampler:
    """
    Линейный скетч вектора длины dim: возвращает случайный индекс
    с ненулевым значением или None

    Индекс i попадает на уровни 0..j, пока h(i) < PRIME >> j. На каждом
    уровне хранятся Σx, Σi·x, Σi²·x и отпечаток Σx·f(i) mod PRIME; по ним
    проверяется, что на уровне ровно один ненулевой индекс.

    В групповом режиме (groups > 1) ключ обновления хэшируется в одну
    из групп, и recover() восстанавливает по элементу из каждой группы.
    """

    def __init__(
        self,
        dim: int,
        delta: float = 0.01,
        seed: int = 0,
        groups: int = 1,
        stream_key: Sequence[int] = (),
    ):
        if dim < 0 or groups < 1:
            raise SpannerDomainError(f"Недопустимые параметры семплера dim={dim}, groups={groups}")
        self.dim = dim
        self.delta = delta
        self.seed = seed
        self.stream_key = tuple(stream_key)
        self.reps, self.groups, self.levels = sampler_shape(dim, delta, groups)

        rng = make_rng(seed, _STREAM_HASH, *self.stream_key)
        self._level_coef = rng.integers(1, PRIME, size=(self.reps, 4), dtype=np.int64)
        self._print_coef = rng.integers(1, PRIME, size=(self.reps, 4), dtype=np.int64)
        self._group_coef = rng.integers(1, PRIME, size=(self.reps, 4), dtype=np.int64)
        self._thresholds = np.array([PRIME >> j for j in range(self.levels)], dtype=np.int64)

        shape = (self.reps, self.groups, self.levels)
        self.s0 = np.zeros(shape, dtype=np.int64)
        self.s1 = np.zeros(shape, dtype=np.int64)
        self.s2 = np.zeros(shape, dtype=np.int64)
        self.fp = np.zeros(shape, dtype=np.int64)

    @property
    def words(self) -> int:
        return 4 * self.reps * self.groups * self.levels

    def update(self, index: int, delta: int, key: Optional[int] = None):
        self.update_many([index], [delta], None if key is None else [key])

    def update_many(
        self,
        indices: Iterable[int],
        deltas: Iterable[int],
        keys: Optional[Iterable[int]] = None,
    ):
        """
        Пакетное линейное обновление

        Args:
            keys: ключи групп (в групповом режиме), по умолчанию сам индекс
        """
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size == 0:
            return
        change = np.asarray(list(deltas), dtype=np.int64)
        bad = (idx < 0) | (idx >= self.dim)
        if bad.any():
            raise SpannerDomainError(f"Индекс {int(idx[bad][0])} вне [0, {self.dim})")

        x = idx % PRIME
        hashes = _poly(self._level_coef[:, None, :], x)            # (reps, u)
        inside = hashes[:, :, None] < self._thresholds              # (reps, u, levels)

        if self.groups > 1:
            group_keys = idx if keys is None else np.asarray(list(keys), dtype=np.int64)
            groups = _poly(self._group_coef[:, None, :], group_keys % PRIME) % self.groups
        else:
            groups = np.zeros(hashes.shape, dtype=np.int64)

        prints = _poly(self._print_coef[:, None, :], x)
        rep, item, level = np.nonzero(inside)
        cell = (rep, groups[rep, item], level)
        np.add.at(self.s0, cell, change[item])
        np.add.at(self.s1, cell, change[item] * idx[item])
        np.add.at(self.s2, cell, change[item] * idx[item] * idx[item])
        np.add.at(self.fp, cell, (change[item] % PRIME) * prints[rep, item] % PRIME)
        self.fp %= PRIME

    def merge(self, other: "L0Sampler") -> "L0Sampler":
        """Сумма скетчей с одинаковыми параметрами и сидами"""
        same = (
            self.dim == other.dim and self.seed == other.seed
            and self.stream_key == other.stream_key
            and self.delta == other.delta and self.groups == other.groups
        )
        if not same:
            raise SpannerDomainError("Слияние семплеров с разными параметрами")
        merged = L0Sampler(self.dim, self.delta, self.seed, self.groups, self.stream_key)
        merged.s0 = self.s0 + other.s0
        merged.s1 = self.s1 + other.s1
        merged.s2 = self.s2 + other.s2
        merged.fp = (self.fp + other.fp) % PRIME
        return merged

    def _one_sparse(self, rep: int, group: int, level: int) -> Optional[int]:
        """Индекс, если ячейка содержит ровно один ненулевой элемент"""
        c0 = int(self.s0[rep, group, level])
        if c0 == 0:
            return None
        c1 = int(self.s1[rep, group, level])
        if c1 % c0:
            return None
        index = c1 // c0
        if not 0 <= index < self.dim:
            return None
        if int(self.s2[rep, group, level]) != index * index * c0:
            return None
        expected = (c0 % PRIME) * int(_poly(self._print_coef[rep], np.int64(index))) % PRIME
        if int(self.fp[rep, group, level]) != expected:
            return None
        return index

    def _nonzero_levels(self, rep: int, group: int) -> np.ndarray:
        cells = (self.s0[rep, group] != 0) | (self.s1[rep, group] != 0) | (self.fp[rep, group] != 0)
        return np.flatnonzero(cells)

    def query(self, seed: int = 0) -> Optional[int]:
        """Индекс из носителя или None (пусто или отказ)"""
        order = make_rng(seed, _STREAM_QUERY).permutation(self.reps)
        for rep in order:
            for group in range(self.groups):
                nonzero = self._nonzero_levels(rep, group)
                if nonzero.size == 0:
                    continue
                index = self._one_sparse(rep, group, int(nonzero[-1]))
                if index is not None:
                    return index
        return None

    def recover(self) -> List[int]:
        """Все индексы, найденные в одноэлементных ячейках (групповой режим)"""
        found: Set[int] = set()
        reps, groups, levels = np.nonzero(self.s0 > 0)
        for rep, group, level in zip(reps, groups, levels):
            index = self._one_sparse(int(rep), int(group), int(level))
            if index is not None:
                found.add(index)
        return sorted(found)


def sampler_update(sampler: L0Sampler, index: int, delta: int):
    sampler.update(index, delta)


def sampler_query(sampler: L0Sampler, seed: int = 0) -> Optional[int]:
    return sampler.query(seed)


# === Спаннер по потоку ===

@dataclass
class StreamSpannerResult:
    h: Graph
    passes: int
    # Худшая оценка по формуле выделения, максимум по проходам
    space_words: int
    # Крупнейший реально построенный набор скетчей
    space_words_used: int
    clusters: List[int] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)


class _Pass:
    """
    Один проход по потоку: обновления раздаются семплерам по ключам.
    Семплеры строятся по одному повторным проигрыванием своих обновлений;
    из-за линейности это совпадает с одновременным ведением всех скетчей.
    """

    def __init__(self, stream: TurnstileStream, endpoints: Dict[int, Edge]):
        self.stream = stream
        self.endpoints = endpoints
        self.words_used = 0

    def route(self, router) -> Dict[Hashable, List[Tuple[int, int, int]]]:
        """router(u, v) → [(ключ семплера, ключ группы)]"""
        routed: Dict[Hashable, List[Tuple[int, int, int]]] = {}
        for index, delta in self.stream.updates:
            u, v = self.endpoints[index]
            for key, group_key in router(u, v):
                routed.setdefault(key, []).append((index, delta, group_key))
        return routed

    def build(
        self, updates: List[Tuple[int, int, int]], delta: float, seed: int,
        stream_key: Sequence[int], groups: int = 1,
    ) -> L0Sampler:
        sampler = L0Sampler(self.stream.dim, delta, seed, groups, stream_key)
        indices, deltas, keys = zip(*updates)
        sampler.update_many(indices, deltas, keys)
        self.words_used = max(self.words_used, sampler.words)
        return sampler


def stream_spanner(
    stream: TurnstileStream,
    k: int,
    seed: int,
    delta: Optional[float] = None,
    c_slots: float = DEFAULT_C_SLOTS,
) -> StreamSpannerResult:
    """
    (2k-1)-спаннер за ⌊k/2⌋+1 проходов

    Проход 1: центры с вероятностью n^(-1/k), семплер присоединения
    на вершину и банк восстановления соседей для вершин без центра.
    Проходы 2..ℓ: расширение кластеров. Последний проход: по ребру
    между каждой парой соседних кластеров.

    Args:
        delta: ошибка одного семплера, по умолчанию n^-3
        c_slots: константа числа ячеек банка ⌈c·n^(1/k)·ln n⌉
    """
    if k < 2:
        raise SpannerDomainError(f"stream_spanner требует k ≥ 2, получено {k}")
    stream.validate()

    n = stream.n
    n_eff = max(n, 2)
    delta = delta if delta is not None else float(n_eff) ** -3
    ell = k // 2
    odd = bool(k % 2)
    p = n_eff ** (-1 / k)
    slots = max(1, math.ceil(c_slots * n_eff ** (1 / k) * math.log(n_eff)))
    dim = stream.dim

    join_words = sampler_words(dim, delta)
    bank_words = sampler_words(dim, delta, slots)
    phase_space = n * join_words + n * bank_words

    endpoints = {index: edge_from_index(index, n) for index, _ in stream.updates}
    runner = _Pass(stream, endpoints)
    rng = make_rng(seed, _STREAM_CENTERS)
    spanner: Set[Edge] = set()
    passes = 0
    space_words = 0

    def recover_edges(updates, stream_key) -> List[Edge]:
        bank = runner.build(updates, delta, seed, stream_key, groups=slots)
        return [endpoints[index] for index in bank.recover() if index in endpoints]

    # Проход 1: начальные кластеры
    passes += 1
    centers = {int(v) for v in np.flatnonzero(rng.random(n) < p)}

    def join_router(u, v):
        routes = []
        if v in centers and u not in centers:
            routes.append((u, v))
        if u in centers and v not in centers:
            routes.append((v, u))
        return routes

    membership: Dict[int, Tuple[int, int]] = {c: (c, 0) for c in centers}
    join_updates = runner.route(join_router)
    for v in sorted(join_updates):
        index = runner.build(join_updates[v], delta, seed, (passes, 0, v)).query(seed)
        if index is not None:
            a, b = endpoints[index]
            w = b if a == v else a
            membership[v] = (w, 1)
            spanner.add((a, b))

    unclustered = [v for v in range(n) if v not in membership]
    unclustered_set = set(unclustered)
    if unclustered:
        incident = runner.route(
            lambda u, v: [(x, y) for x, y in ((u, v), (v, u)) if x in unclustered_set]
        )
        for v in unclustered:
            if v in incident:
                spanner.update(recover_edges(incident[v], (passes, 1, v)))
    space_words = max(space_words, phase_space)
    levels = [membership]
    logger.debug(
        f"🔁 stream pass 1: centers={len(centers)}, unclustered={len(unclustered)}"
    )

    # Проходы 2..ℓ: расширение
    for _ in range(ell - 1):
        passes += 1
        previous = levels[-1]
        prev_clusters = sorted({c for c, _ in previous.values()})
        draws = rng.random(len(prev_clusters))
        sampled = {c for c, x in zip(prev_clusters, draws) if x < p}
        candidates = {v for v, (c, _) in previous.items() if c not in sampled}

        def expand_router(u, v):
            routes = []
            for x, y in ((u, v), (v, u)):
                if x in candidates and y in previous:
                    # Группа - кластер соседа; ключ 0 - присоединение к выбранному
                    if previous[y][0] in sampled:
                        routes.append(((x, 0), previous[y][0]))
                    routes.append(((x, 1), previous[y][0]))
            return routes

        routed = runner.route(expand_router)
        current = {v: entry for v, entry in previous.items() if entry[0] in sampled}
        for v in sorted(candidates):
            if (v, 0) in routed:
                index = runner.build(routed[(v, 0)], delta, seed, (passes, 0, v)).query(seed)
                if index is not None:
                    a, b = endpoints[index]
                    w = b if a == v else a
                    current[v] = (previous[w][0], previous[w][1] + 1)
                    spanner.add((a, b))
                    continue
            if (v, 1) in routed:
                per_cluster: Dict[int, Edge] = {}
                for a, b in recover_edges(routed[(v, 1)], (passes, 1, v)):
                    w = b if a == v else a
                    cluster = previous[w][0]
                    if cluster not in per_cluster or (a, b) < per_cluster[cluster]:
                        per_cluster[cluster] = (a, b)
                spanner.update(per_cluster.values())
        levels.append(current)
        space_words = max(space_words, phase_space)
        logger.debug(
            f"🔁 stream pass {passes}: sampled={len(sampled)}, clustered={len(current)}"
        )

    # Последний проход: рёбра между парами кластеров
    passes += 1
    final = {v: c for v, (c, _) in levels[-1].items()}
    if odd:
        other = dict(final)
    elif len(levels) >= 2:
        other = {v: c for v, (c, _) in levels[-2].items()}
    else:
        other = {v: v for v in range(n)}
    # Вершины без центра после прохода 1 - одноэлементные кластеры
    for v in unclustered:
        final.setdefault(v, v)
        other.setdefault(v, v)

    pair_updates = runner.route(
        lambda u, v: [(key, 0) for key in cluster_pair_keys(final, other, u, v, odd)]
    )
    for key in sorted(pair_updates):
        index = runner.build(pair_updates[key], delta, seed, (passes, 2) + key).query(seed)
        if index is not None:
            spanner.add(endpoints[index])
    pairs = len(set(final.values())) * len(set(other.values()))
    space_words = max(space_words, pairs * join_words)

    h = Graph(n, frozenset(spanner))
    logger.info(
        f"✅ Stream spanner k={k}: n={n}, passes={passes}, |H|={h.m}, space={space_words} words"
    )
    return StreamSpannerResult(
        h=h,
        passes=passes,
        space_words=space_words,
        space_words_used=runner.words_used,
        clusters=[len({c for c, _ in level.values()}) for level in levels],
        details={"slots": slots, "delta": delta, "unclustered": unclustered},
    )

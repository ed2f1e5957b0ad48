# protocols.py
"""
Протоколы построения спаннеров в модели с координатором

Каждый протокол получает ProtocolContext и общается только через
каналы simnet; результат - SpannerResult с графом H и транскриптом.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

import numpy as np

from generators import EdgePartition, lift_spanner, split_duplicated_instance
from graph_core import (
    BfsTree,
    Edge,
    Graph,
    SpannerDomainError,
    normalize_edge,
    verify_additive,
    verify_multiplicative,
)
from sampling_params import get_additive2_params, get_additive_k_params, get_cluster_params
from simnet import (
    BitVectorMsg,
    EdgeListMsg,
    IntVectorMsg,
    Mode,
    PlayerView,
    ProtocolContext,
    ProtocolViolation,
    SpannerResult,
    VertexSetMsg,
    broadcast_from_coordinator,
    relay_player_to_player,
    run_protocol,
    send_to_coordinator,
    send_to_player,
)

logger = logging.getLogger(__name__)

# (центр кластера, глубина в дереве кластера)
Membership = Dict[int, Tuple[int, int]]


@dataclass
class ClusterState:
    """Кластеры уровня i; радиус каждого не больше i+1"""
    level: int
    centers: Tuple[int, ...]
    membership: Membership = field(default_factory=dict)

    @property
    def radius_bound(self) -> int:
        return self.level + 1

    def cluster_of(self, v: int) -> Optional[int]:
        entry = self.membership.get(v)
        return None if entry is None else entry[0]


# === Общие шаги ===

def degree_exchange(ctx: ProtocolContext) -> np.ndarray:
    """
    Игроки шлют векторы локальных степеней, координатор суммирует
    и рассылает. При дублировании рёбер степени завышены (обрезаются до n-1).

    Returns:
        массив степеней длины n, известный всем участникам
    """
    bound = max(ctx.n, 2)
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            local = view.local_degrees()
            send_to_coordinator(ctx, player, IntVectorMsg(tuple(int(d) for d in local), bound))

    total = np.zeros(ctx.n, dtype=np.int64)
    for _, msg in ctx.collect():
        total += np.array(msg.values, dtype=np.int64)
    degrees = np.minimum(total, max(ctx.n - 1, 0))

    broadcast_from_coordinator(ctx, IntVectorMsg(tuple(int(d) for d in degrees), bound))
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            view.memory["degrees"] = np.array(view.latest().values, dtype=np.int64)
    return degrees


def dist_bfs(ctx: ProtocolContext, root: int, budget: Optional[int] = None) -> BfsTree:
    """
    Распределённый BFS: координатор держит частичное дерево и активный
    слой, игроки сообщают по одному ребру к каждой новой вершине.

    Args:
        root: корень
        budget: предел числа вершин дерева (усечённый BFS); последний
            слой добирается по возрастанию номера вершины
    """
    if not 0 <= root < ctx.n:
        raise SpannerDomainError(f"Корень {root} вне диапазона [0, {ctx.n})")

    parent: List[Optional[int]] = [None] * ctx.n
    depth: List[Optional[int]] = [None] * ctx.n
    depth[root] = 0
    active = [root]
    size = 1
    first = True

    while active and (budget is None or size < budget):
        broadcast_from_coordinator(ctx, VertexSetMsg(tuple(active)))

        for player in range(ctx.s):
            with ctx.as_player(player) as view:
                if first:
                    view.memory["bfs_seen"] = set()
                seen: Set[int] = view.memory["bfs_seen"]
                layer = view.latest().vertices
                seen.update(layer)
                adjacency = view.adjacency
                reports: Dict[int, int] = {}
                for a in layer:
                    for w in adjacency.get(a, ()):
                        if w not in seen and w not in reports:
                            reports[w] = a
                found = tuple(sorted(normalize_edge(a, w) for w, a in reports.items()))
                send_to_coordinator(ctx, player, EdgeListMsg(found))
        first = False

        discovered: Dict[int, int] = {}
        for _, msg in ctx.collect():
            for x, y in msg.edges:
                a, w = (x, y) if depth[x] is not None else (y, x)
                if depth[w] is None and w not in discovered:
                    discovered[w] = a

        level = sorted(discovered)
        if budget is not None:
            level = level[: budget - size]
        for w in level:
            parent[w] = discovered[w]
            depth[w] = depth[discovered[w]] + 1
        size += len(level)
        active = level

    return BfsTree(root=root, parent=tuple(parent), depth=tuple(depth))


def _sample_vertices(ctx: ProtocolContext, count: int) -> Tuple[int, ...]:
    """count вершин с возвращением, без повторов по возрастанию"""
    if ctx.n == 0 or count <= 0:
        return ()
    draws = ctx.rng.integers(0, ctx.n, size=count)
    return tuple(sorted({int(v) for v in draws}))


def _ship_low_degree_edges(ctx: ProtocolContext, threshold: float) -> Set[Edge]:
    """Игроки шлют рёбра, у которых хотя бы один конец степени ≤ threshold"""
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            degrees = view.memory["degrees"]
            mine = tuple(
                (u, v) for u, v in view.edges
                if degrees[u] <= threshold or degrees[v] <= threshold
            )
            send_to_coordinator(ctx, player, EdgeListMsg(mine))

    shipped: Set[Edge] = set()
    for _, msg in ctx.collect():
        shipped.update(msg.edges)
    return shipped


def _empty_result(ctx: ProtocolContext, protocol: str, params: Dict[str, object]) -> SpannerResult:
    return SpannerResult(protocol=protocol, params=params, h=Graph(ctx.n), transcript=ctx.transcript)


# === Аддитивные спаннеры ===

def additive2(ctx: ProtocolContext) -> SpannerResult:
    """
    +2-спаннер: рёбра вершин малой степени плюс BFS-деревья
    из случайной выборки корней
    """
    if ctx.n == 0:
        return _empty_result(ctx, "additive2", {"beta": 2})

    params = get_additive2_params(ctx.n, ctx.s, ctx.plan)
    degrees = degree_exchange(ctx)
    spanner = _ship_low_degree_edges(ctx, params.threshold)
    e1_size = len(spanner)

    roots = _sample_vertices(ctx, params.full_bfs_count)
    broadcast_from_coordinator(ctx, VertexSetMsg(roots), shared_randomness=True)
    for root in roots:
        spanner.update(dist_bfs(ctx, root).edges())

    logger.debug(
        f"🧩 additive2: threshold={params.threshold:.1f}, |E1|={e1_size}, roots={len(roots)}"
    )
    return SpannerResult(
        protocol="additive2",
        params={"beta": 2},
        h=Graph(ctx.n, frozenset(spanner)),
        transcript=ctx.transcript,
        details={
            "threshold": params.threshold,
            "degrees": degrees.tolist(),
            "roots": list(roots),
            "low_degree_edges": e1_size,
        },
    )


def additive_k(ctx: ProtocolContext, k: int) -> SpannerResult:
    """
    +k-спаннер: полные BFS из R1, усечённые BFS (⌈n/k⌉ вершин) из R2.
    При k < 6 выполняется additive2.
    """
    if k < 1:
        raise SpannerDomainError(f"additive-k требует k ≥ 1, получено {k}")

    if k < 6:
        result = additive2(ctx)
        result.protocol = "additive-k"
        result.params = {"k": k}
        result.details["delegated"] = True
        return result

    if ctx.n == 0:
        return _empty_result(ctx, "additive-k", {"k": k})

    params = get_additive_k_params(ctx.n, ctx.s, k, ctx.plan)
    degrees = degree_exchange(ctx)
    low_degree = _ship_low_degree_edges(ctx, params.threshold)
    spanner = set(low_degree)

    full_roots = _sample_vertices(ctx, params.full_bfs_count)
    truncated_roots = _sample_vertices(ctx, params.truncated_bfs_count)
    broadcast_from_coordinator(ctx, VertexSetMsg(full_roots), shared_randomness=True)
    broadcast_from_coordinator(ctx, VertexSetMsg(truncated_roots), shared_randomness=True)

    for root in full_roots:
        spanner.update(dist_bfs(ctx, root).edges())
    for root in truncated_roots:
        spanner.update(dist_bfs(ctx, root, budget=params.truncated_size).edges())

    logger.debug(
        f"🧩 additive-k k={k}: threshold={params.threshold:.1f}, "
        f"|R1|={len(full_roots)}, |R2|={len(truncated_roots)}, size={params.truncated_size}"
    )
    return SpannerResult(
        protocol="additive-k",
        params={"k": k},
        h=Graph(ctx.n, frozenset(spanner)),
        transcript=ctx.transcript,
        details={
            "threshold": params.threshold,
            "degrees": degrees.tolist(),
            "roots": list(full_roots),
            "truncated_roots": list(truncated_roots),
            "truncated_size": params.truncated_size,
            "low_degree_edges": sorted(low_degree),
        },
    )


# === Мультипликативные спаннеры ===

def _within_distance(adjacency: Dict[int, Set[int]], u: int, v: int, limit: int) -> bool:
    """d(u, v) ≤ limit: двусторонний BFS, расширяется меньший фронт"""
    if u == v:
        return True
    seen_a, seen_b = {u}, {v}
    front_a, front_b = {u}, {v}
    steps = 0
    while steps < limit and front_a and front_b:
        if len(front_a) > len(front_b):
            seen_a, seen_b = seen_b, seen_a
            front_a, front_b = front_b, front_a
        nxt: Set[int] = set()
        for x in front_a:
            nxt.update(adjacency.get(x, ()))
        nxt -= seen_a
        steps += 1
        if nxt & seen_b:
            return True
        seen_a |= nxt
        front_a = nxt
    return False


def greedy_filter(edges, k: int, forest: Optional[Set[Edge]] = None) -> Set[Edge]:
    """
    Жадный фильтр: ребро принимается, если его концы в F на расстоянии ≥ 2k
    (иначе оно замкнуло бы цикл длины ≤ 2k)
    """
    forest = set() if forest is None else set(forest)
    adjacency: Dict[int, Set[int]] = {}
    for a, b in forest:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)

    for u, v in edges:
        if (u, v) in forest:
            continue
        if _within_distance(adjacency, u, v, 2 * k - 1):
            continue
        forest.add((u, v))
        adjacency.setdefault(u, set()).add(v)
        adjacency.setdefault(v, set()).add(u)
    return forest


def greedy_mult(ctx: ProtocolContext, k: int) -> SpannerResult:
    """(2k-1)-спаннер: F передаётся по кругу игроков, последний отдаёт координатору"""
    if k < 1:
        raise SpannerDomainError(f"greedy требует k ≥ 1, получено {k}")

    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            forest = set() if player == 0 else set(view.latest().edges)
            forest = greedy_filter(view.edges, k, forest)
            payload = EdgeListMsg(tuple(sorted(forest)))
            if player < ctx.s - 1:
                relay_player_to_player(ctx, player, player + 1, payload)
            else:
                send_to_coordinator(ctx, player, payload)

    _, final = ctx.collect()[-1]
    return SpannerResult(
        protocol="greedy",
        params={"k": k},
        h=Graph(ctx.n, frozenset(final.edges)),
        transcript=ctx.transcript,
    )


def simultaneous_mult(ctx: ProtocolContext, k: int) -> SpannerResult:
    """Каждый игрок локально строит жадный спаннер своих рёбер; H - объединение"""
    if ctx.mode != Mode.SIMULTANEOUS:
        raise ProtocolViolation("simultaneous требует одновременного режима")
    if k < 1:
        raise SpannerDomainError(f"simultaneous требует k ≥ 1, получено {k}")

    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            local = greedy_filter(view.edges, k)
            send_to_coordinator(ctx, player, EdgeListMsg(tuple(sorted(local))))

    spanner: Set[Edge] = set()
    for _, msg in ctx.collect():
        spanner.update(msg.edges)
    return SpannerResult(
        protocol="simultaneous",
        params={"k": k},
        h=Graph(ctx.n, frozenset(spanner)),
        transcript=ctx.transcript,
    )


def send_all(ctx: ProtocolContext) -> SpannerResult:
    """Базовая линия: все рёбра координатору"""
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            send_to_coordinator(ctx, player, EdgeListMsg(view.edges))

    edges: Set[Edge] = set()
    for _, msg in ctx.collect():
        edges.update(msg.edges)
    return SpannerResult(
        protocol="send-all",
        params={},
        h=Graph(ctx.n, frozenset(edges)),
        transcript=ctx.transcript,
    )


# === Baswana-Sen ===

def _broadcast_membership(ctx: ProtocolContext, membership: Membership):
    """Рассылает центр кластера каждой вершины (n - «вне кластеров»)"""
    values = tuple(membership[v][0] if v in membership else ctx.n for v in range(ctx.n))
    broadcast_from_coordinator(ctx, IntVectorMsg(values, ctx.n + 1))
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            received = view.latest().values
            current = {v: c for v, c in enumerate(received) if c < ctx.n}
            view.memory.setdefault("levels", []).append(current)


def _edges_to_adjacent_clusters(
    ctx: ProtocolContext,
    targets: Set[int],
    player_targets: Callable[[PlayerView], Set[int]],
    level_index: int,
    clusters: Dict[int, int],
) -> List[Edge]:
    """
    Для каждой вершины из targets игроки шлют по ребру в каждый
    соседний кластер уровня level_index; координатор оставляет первое

    Args:
        player_targets: как игрок восстанавливает targets из своих сообщений
        clusters: копия того же уровня у координатора
    """
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            local = view.memory["levels"][level_index]
            mine = player_targets(view)
            chosen: Dict[Tuple[int, int], Edge] = {}
            for v in view.vertices():
                if v not in mine:
                    continue
                for w in view.neighbors(v):
                    c = local.get(w)
                    if c is not None and (v, c) not in chosen:
                        chosen[(v, c)] = normalize_edge(v, w)
            send_to_coordinator(ctx, player, EdgeListMsg(tuple(sorted(set(chosen.values())))))

    found: Dict[Tuple[int, int], Edge] = {}
    for _, msg in ctx.collect():
        for x, y in msg.edges:
            # Оба конца могут быть в списке
            for v, w in ((x, y), (y, x)):
                if v in targets and w in clusters:
                    found.setdefault((v, clusters[w]), (x, y))
    return sorted(set(found.values()))


def _announced_vertices(view: PlayerView) -> Set[int]:
    return set(view.latest().vertices)


def baswana_sen(ctx: ProtocolContext, k: int) -> SpannerResult:
    """
    (2k-1)-спаннер кластеризацией: инициализация кластеров (порог d1),
    ℓ-1 итераций расширения (порог d2), соединение кластеров
    """
    if k < 3:
        raise SpannerDomainError(f"baswana-sen требует k ≥ 3, получено {k}")
    if ctx.n == 0:
        return _empty_result(ctx, "baswana-sen", {"k": k})

    params = get_cluster_params(ctx.n, ctx.s, k, ctx.plan)
    degrees = degree_exchange(ctx)

    # Фаза 1: рёбра малой степени и начальные кластеры радиуса 1
    spanner = _ship_low_degree_edges(ctx, params.d1)

    draws = ctx.rng.random(ctx.n)
    centers = tuple(int(v) for v in np.flatnonzero(draws < params.p0))
    broadcast_from_coordinator(ctx, VertexSetMsg(centers), shared_randomness=True)

    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            center_set = set(view.latest().vertices)
            offers = []
            for v in view.vertices():
                if v in center_set:
                    continue
                c = next((w for w in view.neighbors(v) if w in center_set), None)
                if c is not None:
                    offers.append(normalize_edge(v, c))
            send_to_coordinator(ctx, player, EdgeListMsg(tuple(offers)))

    center_set = set(centers)
    membership: Membership = {c: (c, 0) for c in centers}
    for _, msg in ctx.collect():
        for x, y in msg.edges:
            v, c = (x, y) if y in center_set else (y, x)
            if v not in membership:
                membership[v] = (c, 1)
                spanner.add((x, y))

    _broadcast_membership(ctx, membership)

    stranded = tuple(
        v for v in range(ctx.n) if v not in membership and degrees[v] > params.d1
    )
    if stranded:
        logger.debug(f"⚠️ baswana-sen: {len(stranded)} high-degree vertices without a center")
        level0 = {v: c for v, (c, _) in membership.items()}
        d1 = params.d1

        def stranded_here(view: PlayerView) -> Set[int]:
            levels0, known = view.memory["levels"][0], view.memory["degrees"]
            return {v for v in view.vertices() if v not in levels0 and known[v] > d1}

        spanner.update(_edges_to_adjacent_clusters(ctx, set(stranded), stranded_here, 0, level0))

    levels = [ClusterState(level=0, centers=centers, membership=dict(membership))]

    # Фаза 2: расширение кластеров
    for iteration in range(1, params.iterations + 1):
        previous = levels[-1]
        prev_clusters = sorted({c for c, _ in previous.membership.values()})
        draws = ctx.rng.random(len(prev_clusters))
        sampled = tuple(c for c, x in zip(prev_clusters, draws) if x < params.p_next)
        sampled_set = set(sampled)
        broadcast_from_coordinator(ctx, VertexSetMsg(sampled), shared_randomness=True)

        candidates = tuple(
            v for v in sorted(previous.membership) if previous.membership[v][0] not in sampled_set
        )

        for player in range(ctx.s):
            with ctx.as_player(player) as view:
                clusters = view.memory["levels"][-1]
                heard = set(view.latest().vertices)
                view.memory["sampled"] = heard
                asked = sorted(v for v, c in clusters.items() if c not in heard)
                flags = tuple(
                    any(clusters.get(w) in heard for w in view.neighbors(v)) for v in asked
                )
                send_to_coordinator(ctx, player, BitVectorMsg(flags))

        chooser: Dict[int, int] = {}
        for player, msg in ctx.collect():
            for v, flag in zip(candidates, msg.flags):
                if flag and v not in chooser:
                    chooser[v] = player

        requests: Dict[int, List[int]] = {}
        for v, player in chooser.items():
            requests.setdefault(player, []).append(v)
        for player in sorted(requests):
            send_to_player(ctx, player, VertexSetMsg(tuple(sorted(requests[player]))))
        for player in sorted(requests):
            with ctx.as_player(player) as view:
                clusters = view.memory["levels"][-1]
                heard = view.memory["sampled"]
                answer = []
                for v in view.latest().vertices:
                    w = next(w for w in view.neighbors(v) if clusters.get(w) in heard)
                    answer.append(normalize_edge(v, w))
                send_to_coordinator(ctx, player, EdgeListMsg(tuple(answer)))

        next_membership: Membership = {
            v: entry for v, entry in previous.membership.items() if entry[0] in sampled_set
        }
        for _, msg in ctx.collect():
            for x, y in msg.edges:
                v, w = (x, y) if x in chooser else (y, x)
                center, depth = previous.membership[w]
                next_membership[v] = (center, depth + 1)
                spanner.add((x, y))

        failing = tuple(v for v in candidates if v not in chooser)
        if failing:
            broadcast_from_coordinator(ctx, VertexSetMsg(failing))
            previous_clusters = {v: c for v, (c, _) in previous.membership.items()}
            spanner.update(_edges_to_adjacent_clusters(
                ctx, set(failing), _announced_vertices, -1, previous_clusters
            ))

        _broadcast_membership(ctx, next_membership)
        levels.append(ClusterState(level=iteration, centers=sampled, membership=next_membership))
        logger.debug(
            f"🔁 baswana-sen iteration {iteration}: clusters={len(sampled)}, "
            f"joined={len(chooser)}, removed={len(failing)}"
        )

    # Фаза 3: ребро между каждой парой соседних кластеров
    odd = params.odd
    for player in range(ctx.s):
        with ctx.as_player(player) as view:
            stored = view.memory["levels"]
            final = stored[-1]
            other = final if odd else stored[-2]
            chosen: Dict[Tuple[int, int], Edge] = {}
            for u, v in view.edges:
                for key in cluster_pair_keys(final, other, u, v, odd):
                    chosen.setdefault(key, (u, v))
            send_to_coordinator(ctx, player, EdgeListMsg(tuple(sorted(set(chosen.values())))))

    final_clusters = {v: c for v, (c, _) in levels[-1].membership.items()}
    other_level = levels[-1] if odd else levels[-2]
    other_clusters = {v: c for v, (c, _) in other_level.membership.items()}
    connected: Set[Tuple[int, int]] = set()
    for _, msg in ctx.collect():
        for u, v in msg.edges:
            keys = cluster_pair_keys(final_clusters, other_clusters, u, v, odd)
            fresh = [key for key in keys if key not in connected]
            if fresh:
                connected.update(fresh)
                spanner.add((u, v))

    logger.debug(
        f"🧩 baswana-sen k={k}: d1={params.d1:.1f}, centers={len(centers)}, "
        f"pairs={len(connected)}, |H|={len(spanner)}"
    )
    return SpannerResult(
        protocol="baswana-sen",
        params={"k": k},
        h=Graph(ctx.n, frozenset(spanner)),
        transcript=ctx.transcript,
        details={
            "d1": params.d1,
            "d2": params.d2,
            "degrees": degrees.tolist(),
            "centers": list(centers),
            "iterations": params.iterations,
            "levels": levels,
        },
    )


def cluster_pair_keys(final: Dict[int, int], other: Dict[int, int], u: int, v: int, odd: bool):
    """Пары кластеров (финальный уровень, второй уровень), соединяемые ребром (u, v)"""
    keys = []
    for a, b in ((u, v), (v, u)):
        ca, cb = final.get(a), other.get(b)
        if ca is None or cb is None or ca == cb:
            continue
        keys.append((min(ca, cb), max(ca, cb)) if odd else (ca, cb))
    return keys


# === Реестр ===

@dataclass(frozen=True)
class ProtocolSpec:
    """Имя протокола CLI → функция, режим и требования к k"""
    name: str
    func: Callable
    mode: str
    needs_k: bool

    def run(self, ctx: ProtocolContext, k: Optional[int] = None) -> SpannerResult:
        if not self.needs_k:
            return self.func(ctx)
        if k is None:
            raise SpannerDomainError(f"{self.name}: требуется --k")
        return self.func(ctx, k)


PROTOCOLS: Dict[str, ProtocolSpec] = {
    spec.name: spec
    for spec in (
        ProtocolSpec("additive2", additive2, Mode.INTERACTIVE, needs_k=False),
        ProtocolSpec("additive-k", additive_k, Mode.INTERACTIVE, needs_k=True),
        ProtocolSpec("greedy", greedy_mult, Mode.INTERACTIVE, needs_k=True),
        ProtocolSpec("baswana-sen", baswana_sen, Mode.INTERACTIVE, needs_k=True),
        ProtocolSpec("simultaneous", simultaneous_mult, Mode.SIMULTANEOUS, needs_k=True),
        ProtocolSpec("send-all", send_all, Mode.SIMULTANEOUS, needs_k=False),
    )
}


def get_protocol(name: str) -> ProtocolSpec:
    if name not in PROTOCOLS:
        raise SpannerDomainError(
            f"Неизвестный протокол {name!r}, доступны: {', '.join(PROTOCOLS)}"
        )
    return PROTOCOLS[name]


def run_split_protocol(
    protocol: str,
    g: Graph,
    partition: EdgePartition,
    seed: int,
    **kwargs,
) -> SpannerResult:
    """
    Запуск на разбиении с дублированием через расщепление вершин:
    протокол работает на экземпляре без дублирования, H поднимается обратно

    Копии с индексом 0 образуют копию G, поэтому d_H ≤ d_H' и растяжение
    (аддитивное и мультипликативное) сохраняется.
    """
    split_graph, split_partition, groups = split_duplicated_instance(g, partition)
    logger.info(f"🔀 Split {g.n} -> {split_graph.n} vertices for {protocol}")
    result = run_protocol(protocol, split_graph, split_partition, seed, **kwargs)
    result.h = lift_spanner(result.h, groups, g)
    result.details["split_n"] = split_graph.n
    return result


def stretch_target(protocol: str, k: Optional[int] = None) -> Tuple[str, int]:
    """(вид растяжения, граница) для проверки результата"""
    if protocol == "additive2":
        return "additive", 2
    if protocol == "send-all":
        return "additive", 0
    if k is None:
        raise SpannerDomainError(f"{protocol}: для границы растяжения нужен k")
    if protocol == "additive-k":
        # k < 6 исполняется как additive2: гарантия +2
        return "additive", max(k, 2)
    return "multiplicative", 2 * k - 1


def verify_result(g: Graph, result: SpannerResult) -> bool:
    """Проверяет растяжение H оракулом APSP и записывает result.verified"""
    kind, bound = stretch_target(result.protocol, result.params.get("k"))
    if kind == "additive":
        ok = verify_additive(g, result.h, bound)
    else:
        ok = verify_multiplicative(g, result.h, bound)
    result.verified = ok
    if not ok:
        logger.warning(f"⚠️ {result.protocol}: {kind} stretch {bound} violated on n={g.n}")
    return ok


# === События выборки ===

def _covered(g: Graph, vertices, sample: Set[int]) -> bool:
    """Каждая вершина из vertices имеет соседа в sample"""
    return all(any(w in sample for w in g.adjacency[v]) for v in vertices)


def sampling_events(protocol: str, g: Graph, result: SpannerResult) -> Dict[str, bool]:
    """
    События выборки, проверяемые постфактум (нужен сам граф g).
    При выполнении неинформационных событий растяжение гарантировано.
    """
    details = result.details
    if "degrees" not in details:
        return {}

    degrees = details["degrees"]
    if protocol == "additive2" or (protocol == "additive-k" and details.get("delegated")):
        high = [v for v in range(g.n) if degrees[v] > details["threshold"]]
        return {"high_degree_covered": _covered(g, high, set(details["roots"]))}

    if protocol == "additive-k":
        high = [v for v in range(g.n) if degrees[v] > details["threshold"]]
        truncated = set(details["truncated_roots"])
        low_degree = set(details["low_degree_edges"])
        missing = [edge for edge in g.sorted_edges if edge not in low_degree]
        hit = all(
            u in truncated or v in truncated
            or _covered(g, [u], truncated) or _covered(g, [v], truncated)
            for u, v in missing
        )
        return {
            "high_degree_covered": _covered(g, high, set(details["roots"])),
            "missing_edges_hit": hit,
        }

    if protocol == "baswana-sen":
        centers = set(details["centers"])
        high = [v for v in range(g.n) if degrees[v] > details["d1"] and v not in centers]
        return {"centers_cover_high_degree": _covered(g, high, centers)}

    return {}

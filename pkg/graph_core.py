# graph_core.py
"""
Граф, BFS/APSP, обхват и оракулы проверки растяжения спаннеров
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from utils import ceil_log2

logger = logging.getLogger(__name__)

# Расстояние между несвязными вершинами
INFINITY = math.inf

Edge = Tuple[int, int]


class SpannerDomainError(ValueError):
    """Недопустимые аргументы операции над графами"""


def normalize_edge(u: int, v: int) -> Edge:
    """Ребро в каноническом виде (u < v)"""
    if u == v:
        raise SpannerDomainError(f"Петля в вершине {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Неориентированный простой граф на вершинах 0..n-1"""
    n: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise SpannerDomainError(f"Отрицательное число вершин: {self.n}")
        normalized = set()
        for u, v in self.edges:
            edge = normalize_edge(int(u), int(v))
            if edge[0] < 0 or edge[1] >= self.n:
                raise SpannerDomainError(f"Ребро {edge} вне диапазона [0, {self.n})")
            normalized.add(edge)
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], strict: bool = False) -> "Graph":
        """
        Строит граф из списка рёбер

        Args:
            strict: запрещать повторы (после нормализации)
        """
        edges = [normalize_edge(int(u), int(v)) for u, v in edges]
        if strict and len(set(edges)) != len(edges):
            raise SpannerDomainError("Повторяющееся ребро")
        return cls(n, frozenset(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """Списки соседей по возрастанию"""
        nbrs: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(row)) for row in nbrs)

    def degrees(self) -> np.ndarray:
        return np.array([len(row) for row in self.adjacency], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and normalize_edge(u, v) in self.edges

    def is_subgraph_of(self, other: "Graph") -> bool:
        return self.n == other.n and self.edges <= other.edges

    def to_csr(self) -> csr_matrix:
        """Симметричная матрица смежности"""
        if self.m == 0:
            return csr_matrix((self.n, self.n), dtype=np.int8)
        pairs = np.array(self.sorted_edges, dtype=np.int64)
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.sorted_edges)
        return graph


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Попарные расстояния; INFINITY для несвязных пар"""
    n: int
    dist: np.ndarray

    def __getitem__(self, pair: Tuple[int, int]) -> float:
        value = self.dist[pair]
        return INFINITY if math.isinf(value) else int(value)

    def row(self, u: int) -> List[float]:
        return [INFINITY if math.isinf(x) else int(x) for x in self.dist[u]]


@dataclass(frozen=True)
class BfsTree:
    """Дерево BFS: родитель и глубина для каждой достижимой вершины"""
    root: int
    parent: Tuple[Optional[int], ...]
    depth: Tuple[Optional[int], ...]

    def edges(self) -> List[Edge]:
        return sorted(
            normalize_edge(v, p) for v, p in enumerate(self.parent) if p is not None
        )

    def covered(self) -> List[int]:
        return [v for v, d in enumerate(self.depth) if d is not None]

    @property
    def size(self) -> int:
        return sum(1 for d in self.depth if d is not None)


def bfs(g: Graph, root: int) -> BfsTree:
    """Централизованный эталонный BFS (соседи по возрастанию номера)"""
    if not 0 <= root < g.n:
        raise SpannerDomainError(f"Корень {root} вне диапазона [0, {g.n})")

    parent: List[Optional[int]] = [None] * g.n
    depth: List[Optional[int]] = [None] * g.n
    depth[root] = 0
    queue = deque([root])
    adjacency = g.adjacency

    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if depth[w] is None:
                depth[w] = depth[u] + 1
                parent[w] = u
                queue.append(w)

    return BfsTree(root=root, parent=tuple(parent), depth=tuple(depth))


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """APSP через невзвешенный BFS из scipy.sparse.csgraph"""
    if g.n == 0:
        return DistanceMatrix(0, np.zeros((0, 0)))
    dist = shortest_path(g.to_csr(), method="D", directed=False, unweighted=True)
    return DistanceMatrix(g.n, dist)


def girth(g: Graph) -> float:
    """
    Длина кратчайшего цикла (INFINITY для леса)

    BFS из каждой вершины; недревесное ребро (u, w) даёт цикл длины
    не больше depth[u] + depth[w] + 1, минимум по корням точен.
    """
    best = INFINITY
    adjacency = g.adjacency

    for root in range(g.n):
        if not adjacency[root]:
            continue
        depth = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            # Дальше короче цикла не найти
            if 2 * depth[u] >= best:
                break
            for w in adjacency[u]:
                if w not in depth:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, depth[u] + depth[w] + 1)

    return best


def check_subgraph(g: Graph, h: Graph):
    if h.n != g.n:
        raise SpannerDomainError(f"Разное число вершин: g.n={g.n}, h.n={h.n}")
    if not h.edges <= g.edges:
        extra = sorted(h.edges - g.edges)[:3]
        raise SpannerDomainError(f"H не подграф G, лишние рёбра: {extra}")


def _finite_pairs(g: Graph, h: Graph) -> Tuple[np.ndarray, np.ndarray]:
    d_g = all_pairs_distances(g).dist
    d_h = all_pairs_distances(h).dist
    mask = np.isfinite(d_g)
    return d_g[mask], d_h[mask]


def verify_additive(g: Graph, h: Graph, beta: int) -> bool:
    """d_H(u,v) ≤ d_G(u,v) + beta для всех пар с конечным d_G"""
    check_subgraph(g, h)
    d_g, d_h = _finite_pairs(g, h)
    ok = bool(np.all(d_h <= d_g + beta))
    logger.debug(f"{'✅' if ok else '❌'} additive +{beta} check on n={g.n}")
    return ok


def verify_multiplicative(g: Graph, h: Graph, alpha: int) -> bool:
    """d_H(u,v) ≤ alpha·d_G(u,v) для всех пар с конечным d_G"""
    check_subgraph(g, h)
    d_g, d_h = _finite_pairs(g, h)
    ok = bool(np.all(d_h <= alpha * d_g))
    logger.debug(f"{'✅' if ok else '❌'} multiplicative x{alpha} check on n={g.n}")
    return ok


def encoding_bits(n: int) -> int:
    """⌈log2 n⌉: цена номера вершины; ребро стоит вдвое больше"""
    if n < 2:
        raise SpannerDomainError(f"encoding_bits требует n ≥ 2, получено {n}")
    return ceil_log2(n)


def max_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(u: int, v: int, n: int) -> int:
    """Номер ребра {u,v} (u<v) в [0, C(n,2)): u·n − u(u+1)/2 + (v−u−1)"""
    u, v = normalize_edge(u, v)
    if v >= n or u < 0:
        raise SpannerDomainError(f"Ребро ({u}, {v}) вне диапазона [0, {n})")
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def edge_from_index(index: int, n: int) -> Edge:
    """Обратное к edge_index"""
    if not 0 <= index < max_edges(n):
        raise SpannerDomainError(f"Номер ребра {index} вне [0, {max_edges(n)})")
    # Строка u начинается с u·n − u(u+1)/2; берём приближение и уточняем
    u = int(n - 0.5 - math.sqrt((n - 0.5) ** 2 - 2 * index))
    u = max(0, min(u, n - 2))
    while u > 0 and u * n - u * (u + 1) // 2 > index:
        u -= 1
    while (u + 1) * n - (u + 1) * (u + 2) // 2 <= index:
        u += 1
    start = u * n - u * (u + 1) // 2
    return (u, index - start + u + 1)

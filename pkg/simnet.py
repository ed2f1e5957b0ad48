# simnet.py
"""
Модель с координатором: игроки с подмножествами рёбер, координатор,
каналы с побитовым учётом, счётчик раундов и одноранговый режим
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from generators import EdgePartition, make_rng
from graph_core import Edge, Graph, SpannerDomainError, encoding_bits
from sampling_params import SamplingPlan
from utils import ceil_log2

logger = logging.getLogger(__name__)

# Колонки CSV на один запуск
ROW_COLUMNS = [
    "protocol", "n", "m", "s", "k", "seed",
    "bits_up", "bits_down", "total_bits", "rounds", "messages",
    "spanner_edges", "verified",
]

UNCHECKED = "unchecked"

# События, не влияющие на корректность (только наблюдение)
INFORMATIONAL_EVENTS = frozenset({"missing_edges_hit"})


class ProtocolViolation(RuntimeError):
    """Нарушение модели: лишнее сообщение, чужие рёбра, запрет режима"""


class Mode:
    INTERACTIVE = "interactive"
    SIMULTANEOUS = "simultaneous"


# === Сообщения ===

@dataclass(frozen=True)
class VertexMsg:
    vertex: int

    def bits(self, n: int) -> int:
        return _unit(n)


@dataclass(frozen=True)
class EdgeMsg:
    edge: Edge

    def bits(self, n: int) -> int:
        return 2 * _unit(n)


@dataclass(frozen=True)
class BitMsg:
    bit: bool

    def bits(self, n: int) -> int:
        return 1


@dataclass(frozen=True)
class IntMsg:
    """Целое в [0, bound)"""
    value: int
    bound: int

    def bits(self, n: int) -> int:
        return ceil_log2(self.bound)


@dataclass(frozen=True)
class VertexSetMsg:
    """Префикс длины ⌈log2(n+1)⌉ плюс вершины"""
    vertices: Tuple[int, ...]

    def bits(self, n: int) -> int:
        return ceil_log2(n + 1) + len(self.vertices) * _unit(n)


@dataclass(frozen=True)
class EdgeListMsg:
    """Префикс длины 2⌈log2(n+1)⌉ (рёбер до n²) плюс рёбра"""
    edges: Tuple[Edge, ...]

    def bits(self, n: int) -> int:
        return 2 * ceil_log2(n + 1) + len(self.edges) * 2 * _unit(n)


@dataclass(frozen=True)
class IntVectorMsg:
    """Вектор фиксированной длины из целых в [0, bound), без префикса"""
    values: Tuple[int, ...]
    bound: int

    def bits(self, n: int) -> int:
        return len(self.values) * ceil_log2(self.bound)


@dataclass(frozen=True)
class BitVectorMsg:
    flags: Tuple[bool, ...]

    def bits(self, n: int) -> int:
        return len(self.flags)


Payload = Union[
    VertexMsg, EdgeMsg, BitMsg, IntMsg, VertexSetMsg, EdgeListMsg, IntVectorMsg, BitVectorMsg
]


def _unit(n: int) -> int:
    # n < 2: один номер вершины всё равно занимает бит
    return encoding_bits(max(n, 2))


def payload_bits(payload: Payload, n: int) -> int:
    """Стоимость сообщения в битах (без заголовков)"""
    return payload.bits(n)


# === Транскрипт ===

@dataclass
class Transcript:
    """Счётчики битов по игрокам и направлениям, раунды и сообщения"""
    bits_to_coordinator: List[int]
    bits_from_coordinator: List[int]
    rounds: int = 0
    messages: int = 0
    _direction: Optional[str] = field(default=None, repr=False, compare=False)

    @classmethod
    def create(cls, s: int) -> "Transcript":
        return cls(bits_to_coordinator=[0] * s, bits_from_coordinator=[0] * s)

    @property
    def bits_up(self) -> int:
        return sum(self.bits_to_coordinator)

    @property
    def bits_down(self) -> int:
        return sum(self.bits_from_coordinator)

    @property
    def total_bits(self) -> int:
        return self.bits_up + self.bits_down

    def _turn(self, direction: str):
        # Новый раунд: первое сообщение или ответ координатора после игроков
        if self._direction is None or (self._direction == "up" and direction == "down"):
            self.rounds += 1
        self._direction = direction

    def charge_up(self, player: int, bits: int):
        self._turn("up")
        self.bits_to_coordinator[player] += bits
        self.messages += 1

    def charge_down(self, player: int, bits: int):
        self._turn("down")
        self.bits_from_coordinator[player] += bits
        self.messages += 1

    def snapshot(self) -> Tuple:
        return (
            tuple(self.bits_to_coordinator),
            tuple(self.bits_from_coordinator),
            self.rounds,
            self.messages,
        )


# === Игроки ===

class PlayerView:
    """
    Доступ игрока к своим рёбрам и полученным сообщениям

    Читать можно только пока игрок «говорит» (ctx.as_player),
    иначе ProtocolViolation.
    """

    def __init__(self, ctx: "ProtocolContext", player: int, edges: Tuple[Edge, ...]):
        self._ctx = ctx
        self.player = player
        self._edges = tuple(sorted(edges))
        adjacency: Dict[int, List[int]] = {}
        for u, v in self._edges:
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, []).append(u)
        self._adjacency = {v: tuple(sorted(nbrs)) for v, nbrs in adjacency.items()}
        self._inbox: List[Payload] = []
        self._memory: Dict[str, object] = {}

    def _check(self):
        if self._ctx._speaking != self.player:
            raise ProtocolViolation(
                f"Игрок {self.player} читается вне своего хода "
                f"(сейчас ход: {self._ctx._speaking})"
            )

    @property
    def edges(self) -> Tuple[Edge, ...]:
        self._check()
        return self._edges

    def neighbors(self, v: int) -> Tuple[int, ...]:
        self._check()
        return self._adjacency.get(v, ())

    @property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        self._check()
        return self._adjacency

    def vertices(self) -> List[int]:
        """Вершины, у которых есть локальные рёбра"""
        self._check()
        return sorted(self._adjacency)

    def local_degrees(self) -> np.ndarray:
        self._check()
        degrees = np.zeros(self._ctx.n, dtype=np.int64)
        for v, nbrs in self._adjacency.items():
            degrees[v] = len(nbrs)
        return degrees

    @property
    def memory(self) -> Dict[str, object]:
        """Локальное состояние игрока между ходами"""
        self._check()
        return self._memory

    def latest(self) -> Payload:
        """Последнее полученное сообщение"""
        self._check()
        if not self._inbox:
            raise ProtocolViolation(f"У игрока {self.player} нет входящих сообщений")
        return self._inbox[-1]

    def _deliver(self, payload: Payload):
        self._inbox.append(payload)


class ProtocolContext:
    """Состояние одного запуска протокола"""

    def __init__(
        self,
        n: int,
        partition: EdgePartition,
        seed: int,
        mode: str = Mode.INTERACTIVE,
        plan: Optional[SamplingPlan] = None,
        free_randomness: bool = False,
    ):
        if mode not in (Mode.INTERACTIVE, Mode.SIMULTANEOUS):
            raise SpannerDomainError(f"Неизвестный режим: {mode}")
        self.n = n
        self.s = partition.s
        self.seed = seed
        self.mode = mode
        self.plan = plan or SamplingPlan()
        self.free_randomness = free_randomness
        self.allow_duplication = partition.allow_duplication
        self.transcript = Transcript.create(self.s)
        # Случайность координатора
        self.rng = make_rng(seed, 7)
        self._inbox: List[Tuple[int, Payload]] = []
        self._speaking: Optional[int] = None
        self._spoken: set = set()
        # Разбиение самому координатору не доступно: только игрокам
        self._players = [
            PlayerView(self, i, partition.player_edges(i)) for i in range(self.s)
        ]

    @contextmanager
    def as_player(self, player: int) -> Iterator[PlayerView]:
        """Ход игрока: только внутри него доступны его рёбра"""
        if self._speaking is not None:
            raise ProtocolViolation(f"Ход игрока {player} внутри хода {self._speaking}")
        if not 0 <= player < self.s:
            raise SpannerDomainError(f"Игрок {player} вне [0, {self.s})")
        self._speaking = player
        try:
            yield self._players[player]
        finally:
            self._speaking = None

    def collect(self) -> List[Tuple[int, Payload]]:
        """Забирает входящие координатора (игрок, сообщение) в порядке отправки"""
        inbox, self._inbox = self._inbox, []
        return inbox


# === Каналы ===

def send_to_coordinator(ctx: ProtocolContext, player: int, payload: Payload):
    """Игрок → координатор"""
    if ctx._speaking != player:
        raise ProtocolViolation(f"Игрок {player} отправляет вне своего хода")
    if ctx.mode == Mode.SIMULTANEOUS and player in ctx._spoken:
        raise ProtocolViolation(f"Игрок {player}: второе сообщение в одновременном режиме")
    ctx._spoken.add(player)
    ctx.transcript.charge_up(player, payload_bits(payload, ctx.n))
    ctx._inbox.append((player, payload))


def _require_interactive(ctx: ProtocolContext, what: str):
    if ctx.mode == Mode.SIMULTANEOUS:
        raise ProtocolViolation(f"{what} запрещено в одновременном режиме")
    if ctx._speaking is not None:
        raise ProtocolViolation(f"{what} во время хода игрока {ctx._speaking}")


def broadcast_from_coordinator(ctx: ProtocolContext, payload: Payload, shared_randomness: bool = False):
    """
    Координатор → все игроки, стоимость списывается s раз

    Args:
        shared_randomness: сообщение несёт общую случайность (бесплатно
            при ctx.free_randomness)
    """
    _require_interactive(ctx, "broadcast")
    bits = 0 if (shared_randomness and ctx.free_randomness) else payload_bits(payload, ctx.n)
    for player in range(ctx.s):
        ctx.transcript.charge_down(player, bits)
        ctx._players[player]._deliver(payload)


def send_to_player(ctx: ProtocolContext, player: int, payload: Payload):
    """Координатор → один игрок"""
    _require_interactive(ctx, "send_to_player")
    ctx.transcript.charge_down(player, payload_bits(payload, ctx.n))
    ctx._players[player]._deliver(payload)


def relay_player_to_player(ctx: ProtocolContext, src: int, dst: int, payload: Payload):
    """Игрок → координатор → игрок: 2×payload + ⌈log2 s⌉ бит адреса"""
    if src == dst:
        raise SpannerDomainError(f"Пересылка самому себе: игрок {src}")
    if ctx.mode == Mode.SIMULTANEOUS:
        raise ProtocolViolation("relay запрещено в одновременном режиме")
    if ctx._speaking != src:
        raise ProtocolViolation(f"Игрок {src} пересылает вне своего хода")
    if not 0 <= dst < ctx.s:
        raise SpannerDomainError(f"Адресат {dst} вне [0, {ctx.s})")

    bits = payload_bits(payload, ctx.n)
    ctx.transcript.charge_up(src, bits + ceil_log2(ctx.s))
    ctx.transcript.charge_down(dst, bits)
    ctx._players[dst]._deliver(payload)


# === Результат ===

@dataclass
class SpannerResult:
    """Выход координатора H и транскрипт"""
    protocol: str
    params: Dict[str, object]
    h: Graph
    transcript: Transcript
    details: Dict[str, object] = field(default_factory=dict)
    # События выборки, из которых следует корректность
    events: Dict[str, bool] = field(default_factory=dict)
    verified: Optional[bool] = None

    @property
    def events_hold(self) -> bool:
        return all(
            value for name, value in self.events.items() if name not in INFORMATIONAL_EVENTS
        )

    def to_row(self, g: Graph, seed: int) -> Dict[str, object]:
        param = self.params.get("k", self.params.get("beta"))
        if self.verified is None:
            verified: object = UNCHECKED
        else:
            verified = int(self.verified)
        return {
            "protocol": self.protocol,
            "n": g.n,
            "m": g.m,
            "s": len(self.transcript.bits_to_coordinator),
            "k": "" if param is None else param,
            "seed": seed,
            "bits_up": self.transcript.bits_up,
            "bits_down": self.transcript.bits_down,
            "total_bits": self.transcript.total_bits,
            "rounds": self.transcript.rounds,
            "messages": self.transcript.messages,
            "spanner_edges": self.h.m,
            "verified": verified,
        }


def run_protocol(
    protocol: str,
    g: Graph,
    partition: EdgePartition,
    seed: int,
    k: Optional[int] = None,
    plan: Optional[SamplingPlan] = None,
    free_randomness: bool = False,
) -> SpannerResult:
    """
    Запускает именованный протокол и проверяет гигиену выхода

    Returns:
        SpannerResult с транскриптом и событиями выборки
    """
    from protocols import get_protocol, sampling_events

    spec = get_protocol(protocol)
    partition.validate(g)

    ctx = ProtocolContext(
        n=g.n,
        partition=partition,
        seed=seed,
        mode=spec.mode,
        plan=plan,
        free_randomness=free_randomness,
    )
    result = spec.run(ctx, k)

    if not result.h.is_subgraph_of(g):
        raise ProtocolViolation(f"{protocol}: выход содержит рёбра не из G")

    result.events = sampling_events(protocol, g, result)
    logger.info(
        f"📊 {protocol} n={g.n} m={g.m} s={partition.s} seed={seed}: "
        f"bits={result.transcript.total_bits}, rounds={result.transcript.rounds}, "
        f"|H|={result.h.m}"
    )
    return result

# file_formats.py
"""
Текстовые форматы: граф, разбиение рёбер, turnstile-поток

Строки, начинающиеся с '#', считаются комментариями (эхо конфигурации).
Номера строк в ошибках считают физические строки файла.
"""

import logging
from pathlib import Path
from typing import Iterator, List, Sequence, Tuple, Union

from generators import EdgePartition
from graph_core import Graph, max_edges
from streaming import TurnstileStream
from utils import cleanup_file_safe

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class ParseError(ValueError):
    """Ошибка разбора входного файла с номером строки"""

    def __init__(self, message: str, line_no: int, path: str = "<text>"):
        self.line_no = line_no
        self.path = path
        super().__init__(f"{path}:{line_no}: {message}")


def _data_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    """(номер строки, токены) для непустых строк без комментариев"""
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield line_no, stripped.split()


def _ints(tokens: List[str], count: int, line_no: int, path: str, what: str) -> List[int]:
    if len(tokens) != count:
        raise ParseError(f"{what}: ожидалось {count} чисел, получено {len(tokens)}", line_no, path)
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise ParseError(f"{what}: не целое число в {' '.join(tokens)!r}", line_no, path) from None


def _header(lines: Iterator[Tuple[int, List[str]]], count: int, path: str, what: str) -> List[int]:
    try:
        line_no, tokens = next(lines)
    except StopIteration:
        raise ParseError(f"Файл пустой, нет заголовка {what}", 1, path) from None
    return _ints(tokens, count, line_no, path, what)


def _header_block(header: Sequence[str]) -> str:
    return "".join(f"{line}\n" for line in header)


def _read_text(path: PathLike) -> str:
    """
    Читает файл как UTF-8; ошибки чтения и декодирования - ParseError

    Нечитаемый файл получает line_no = 0, битый UTF-8 - номер строки
    с первым некорректным байтом.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ParseError(f"Не удалось прочитать файл: {e.strerror or e}", 0, str(path)) from e
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_no = data.count(b"\n", 0, e.start) + 1
        raise ParseError(f"Некорректный UTF-8 (байт {e.start})", line_no, str(path)) from e


# === Граф ===

def parse_graph(text: str, path: str = "<text>") -> Graph:
    """Формат: 'n m', затем m строк 'u v' с 0 ≤ u < v < n"""
    lines = _data_lines(text)
    n, m = _header(lines, 2, path, "'n m'")
    if n < 0 or m < 0 or m > max_edges(n):
        raise ParseError(f"Недопустимый заголовок n={n} m={m}", 1, path)

    edges = set()
    last_line = 1
    for line_no, tokens in lines:
        last_line = line_no
        u, v = _ints(tokens, 2, line_no, path, "ребро")
        if u == v:
            raise ParseError(f"Петля {u} {v}", line_no, path)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"Вершина вне [0, {n}): {u} {v}", line_no, path)
        if u > v:
            raise ParseError(f"Ребро должно идти как 'u v' с u < v: {u} {v}", line_no, path)
        if (u, v) in edges:
            raise ParseError(f"Повторное ребро {u} {v}", line_no, path)
        edges.add((u, v))

    if len(edges) != m:
        raise ParseError(f"Заявлено m={m}, прочитано {len(edges)} рёбер", last_line, path)

    return Graph(n, frozenset(edges))


def format_graph(g: Graph, header: Sequence[str] = ()) -> str:
    body = "".join(f"{u} {v}\n" for u, v in g.sorted_edges)
    return f"{_header_block(header)}{g.n} {g.m}\n{body}"


def read_graph(path: PathLike) -> Graph:
    g = parse_graph(_read_text(path), str(path))
    logger.info(f"📥 Graph loaded: n={g.n}, m={g.m} from {path}")
    return g


# === Разбиение ===

def parse_partition(text: str, path: str = "<text>") -> EdgePartition:
    """Формат: 's n allow_dup', затем строки 'player u v'"""
    lines = _data_lines(text)
    s, n, allow_dup = _header(lines, 3, path, "'s n allow_dup'")
    if s < 1 or n < 0 or allow_dup not in (0, 1):
        raise ParseError(f"Недопустимый заголовок s={s} n={n} allow_dup={allow_dup}", 1, path)

    assignment: List[List[Tuple[int, int]]] = [[] for _ in range(s)]
    owned = [set() for _ in range(s)]
    for line_no, tokens in lines:
        player, u, v = _ints(tokens, 3, line_no, path, "строка разбиения")
        if not 0 <= player < s:
            raise ParseError(f"Игрок {player} вне [0, {s})", line_no, path)
        if u == v:
            raise ParseError(f"Петля {u} {v}", line_no, path)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"Вершина вне [0, {n}): {u} {v}", line_no, path)
        edge = (min(u, v), max(u, v))
        if edge in owned[player]:
            raise ParseError(f"Повторное ребро у игрока {player}", line_no, path)
        owned[player].add(edge)
        assignment[player].append(edge)

    partition = EdgePartition(
        s=s,
        n=n,
        assignment=tuple(tuple(sorted(edges)) for edges in assignment),
        allow_duplication=bool(allow_dup),
    )
    if not partition.allow_duplication and partition.has_duplicates():
        raise ParseError("Ребро у нескольких игроков при allow_dup=0", 1, path)
    return partition


def format_partition(partition: EdgePartition, header: Sequence[str] = ()) -> str:
    lines = [f"{partition.s} {partition.n} {int(partition.allow_duplication)}\n"]
    for player, edges in enumerate(partition.assignment):
        lines.extend(f"{player} {u} {v}\n" for u, v in edges)
    return _header_block(header) + "".join(lines)


def read_partition(path: PathLike) -> EdgePartition:
    partition = parse_partition(_read_text(path), str(path))
    logger.info(f"📥 Partition loaded: s={partition.s}, dup={partition.allow_duplication}")
    return partition


# === Turnstile-поток ===

def parse_stream(text: str, path: str = "<text>") -> TurnstileStream:
    """Формат: 'n u_count', затем строки 'edge_index delta'"""
    lines = _data_lines(text)
    n, count = _header(lines, 2, path, "'n u_count'")
    if n < 0 or count < 0:
        raise ParseError(f"Недопустимый заголовок n={n} u_count={count}", 1, path)

    dim = max_edges(n)
    updates = []
    last_line = 1
    for line_no, tokens in lines:
        last_line = line_no
        index, delta = _ints(tokens, 2, line_no, path, "обновление")
        if not 0 <= index < dim:
            raise ParseError(f"Номер ребра {index} вне [0, {dim})", line_no, path)
        if delta not in (1, -1):
            raise ParseError(f"delta должно быть ±1, получено {delta}", line_no, path)
        updates.append((index, delta))

    if len(updates) != count:
        raise ParseError(f"Заявлено {count} обновлений, прочитано {len(updates)}", last_line, path)

    return TurnstileStream(n=n, updates=tuple(updates))


def format_stream(stream: TurnstileStream, header: Sequence[str] = ()) -> str:
    body = "".join(f"{index} {delta}\n" for index, delta in stream.updates)
    return f"{_header_block(header)}{stream.n} {len(stream.updates)}\n{body}"


def read_stream(path: PathLike) -> TurnstileStream:
    stream = parse_stream(_read_text(path), str(path))
    logger.info(f"📥 Stream loaded: n={stream.n}, updates={len(stream.updates)}")
    return stream


# === Запись ===

def _write_text(path: PathLike, text: str, what: str):
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except Exception as e:
        logger.error(f"❌ Failed to write {what} to {path}: {e}", exc_info=True)
        cleanup_file_safe(path)
        raise
    logger.info(f"✅ {what.capitalize()} written: {path}")


def write_graph(g: Graph, path: PathLike, header: Sequence[str] = ()):
    _write_text(path, format_graph(g, header), "graph")


def write_partition(partition: EdgePartition, path: PathLike, header: Sequence[str] = ()):
    _write_text(path, format_partition(partition, header), "partition")


def write_stream(stream: TurnstileStream, path: PathLike, header: Sequence[str] = ()):
    _write_text(path, format_stream(stream, header), "stream")

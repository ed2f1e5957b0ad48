# utils.py
"""
Утилиты: битовые оценки, разбор списков параметров, заголовки файлов, cleanup
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List

logger = logging.getLogger(__name__)


def ceil_log2(value: int) -> int:
    """⌈log2 value⌉ для value ≥ 1 (целочисленно, без float)"""
    if value < 1:
        raise ValueError(f"ceil_log2 требует value ≥ 1, получено {value}")
    return (value - 1).bit_length()


def parse_int_list(text: str) -> List[int]:
    """
    Разбирает список целых: "4,16,64", "1-5" или их смесь "1-3,8"

    Returns:
        список в порядке записи, без повторов
    """
    values: List[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "-" in chunk:
            lo, hi = chunk.split("-", 1)
            start, stop = int(lo), int(hi)
            if stop < start:
                raise ValueError(f"Пустой диапазон: {chunk}")
            values.extend(range(start, stop + 1))
        else:
            values.append(int(chunk))

    seen = set()
    unique = []
    for value in values:
        if value not in seen:
            seen.add(value)
            unique.append(value)

    if not unique:
        raise ValueError(f"Пустой список значений: {text!r}")
    return unique


def parse_fixed(pairs: Iterable[str]) -> Dict[str, float]:
    """Разбирает фиксированные координаты вида n=2048"""
    fixed = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"Ожидалось key=value, получено {pair!r}")
        key, value = pair.split("=", 1)
        fixed[key.strip()] = float(value)
    return fixed


def config_echo_lines(command: str, params: Dict[str, object]) -> List[str]:
    """Строки-комментарии с конфигурацией для заголовка выходного файла"""
    lines = [f"# {command}"]
    for key in sorted(params):
        lines.append(f"# {key}={params[key]}")
    return lines


def format_bits(bits: int) -> str:
    """Форматирует объём коммуникации"""
    if bits < 8 * 1024:
        return f"{bits} бит"

    kib = bits / 8 / 1024
    if kib < 1024:
        return f"{kib:.1f} КиБ"

    return f"{kib / 1024:.2f} МиБ"


def cleanup_file_safe(file_path) -> bool:
    """Безопасное удаление файла (недописанный вывод после ошибки)"""
    try:
        if file_path:
            path = Path(file_path)
            if path.exists():
                path.unlink()
                logger.debug(f"🗑️ Deleted: {file_path}")
                return True
    except Exception as e:
        logger.warning(f"⚠️ Failed to delete {file_path}: {e}")

    return False

# analysis.py
"""
Модуль экспериментов: sweep по сетке параметров, оценка показателя
степени в log-log масштабе и сравнение с верхними оценками
"""
import itertools
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.stats import linregress

from config import (
    DEFAULT_C_R1_K,
    DEFAULT_C_RATE,
    DEFAULT_C_SAMPLE,
    DEFAULT_DELTA,
    DEFAULT_EDGE_EXPONENT,
    DEFAULT_EDGE_FACTOR,
    DEFAULT_PARTITION_MODE,
    DEFAULT_SEED,
    SWEEP_JOBS,
    VERIFY_CAP,
)
from generators import PartitionMode, partition_edges, random_gnm
from graph_core import SpannerDomainError, max_edges
from progress_tracker import ProgressTracker
from protocols import get_protocol, verify_result
from sampling_params import SamplingPlan
from simnet import ROW_COLUMNS, run_protocol
from utils import config_echo_lines

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ROW_COLUMNS + ["envelope_ratio"]


class SweepPointError(RuntimeError):
    """Ошибка запуска в точке сетки (координаты в .coordinates)"""

    def __init__(self, coordinates: Dict[str, object], cause: str):
        super().__init__(coordinates, cause)
        self.coordinates = coordinates
        self.cause = cause

    def __str__(self) -> str:
        where = ", ".join(f"{key}={value}" for key, value in self.coordinates.items())
        return f"Sweep point failed ({where}): {self.cause}"


@dataclass(frozen=True)
class SweepGrid:
    """Сетка sweep: декартово произведение n × s × k × seeds"""
    protocol: str
    n_values: Tuple[int, ...]
    s_values: Tuple[int, ...]
    k_values: Tuple[Optional[int], ...] = (None,)
    seeds: Tuple[int, ...] = (DEFAULT_SEED,)
    edge_exponent: float = DEFAULT_EDGE_EXPONENT
    edge_factor: float = DEFAULT_EDGE_FACTOR
    partition_mode: str = DEFAULT_PARTITION_MODE
    verify_cap: int = VERIFY_CAP
    jobs: int = SWEEP_JOBS
    c_sample: float = DEFAULT_C_SAMPLE
    delta: Optional[float] = DEFAULT_DELTA
    c_r1_k: float = DEFAULT_C_R1_K
    c_rate: float = DEFAULT_C_RATE
    free_randomness: bool = False

    def __post_init__(self):
        get_protocol(self.protocol)
        if not (self.n_values and self.s_values and self.k_values and self.seeds):
            raise SpannerDomainError("Пустая сетка sweep")
        if self.partition_mode not in PartitionMode.ALL:
            raise SpannerDomainError(f"Неизвестный режим разбиения: {self.partition_mode}")
        self.plan()

    def points(self) -> List[Tuple[int, int, Optional[int], int]]:
        """Точки (n, s, k, seed) в порядке сетки"""
        return list(itertools.product(self.n_values, self.s_values, self.k_values, self.seeds))

    def edge_count(self, n: int) -> int:
        """m = min(C(n,2), round(edge_factor·n^edge_exponent))"""
        return min(max_edges(n), round(self.edge_factor * n ** self.edge_exponent))

    def plan(self) -> SamplingPlan:
        return SamplingPlan(c=self.c_sample, delta=self.delta, c_r1_k=self.c_r1_k, c_rate=self.c_rate)

    def config(self) -> Dict[str, object]:
        """Параметры для эха в заголовке файла"""
        return {key: value for key, value in asdict(self).items() if key != "jobs"}


def bound_envelope(protocol: str, n: int, s: int, k: Optional[int], duplicated: bool = False) -> float:
    """Верхняя оценка коммуникации без полилогарифмических множителей"""
    if protocol == "send-all":
        return s * n ** 2
    if protocol == "additive2":
        if duplicated:
            return s * n ** 1.5
        return math.sqrt(s) * n ** 1.5 + s * n
    if k is None:
        raise SpannerDomainError(f"{protocol}: для оценки нужен k")
    if protocol == "additive-k":
        return math.sqrt(s / k) * n ** 1.5 + s * n * k
    if protocol in ("greedy", "simultaneous"):
        return s * n ** (1 + 1 / k)
    if protocol == "baswana-sen":
        return k * s ** (1 - 2 / k) * n ** (1 + 1 / k) + s * n * k
    raise SpannerDomainError(f"Нет оценки для протокола {protocol!r}")


def run_point(grid: SweepGrid, n: int, s: int, k: Optional[int], seed: int) -> Dict[str, object]:
    """Один запуск: граф G(n, m), разбиение, протокол, проверка до verify_cap"""
    coordinates = {"protocol": grid.protocol, "n": n, "s": s, "k": k, "seed": seed}
    try:
        g = random_gnm(n, grid.edge_count(n), seed)
        partition = partition_edges(g, s, grid.partition_mode, seed)
        plan = grid.plan()
        result = run_protocol(
            grid.protocol, g, partition, seed, k=k, plan=plan,
            free_randomness=grid.free_randomness,
        )
        if n <= grid.verify_cap:
            verify_result(g, result)
    except Exception as e:
        logger.error(f"❌ Sweep point {coordinates} failed: {e}", exc_info=True)
        raise SweepPointError(coordinates, f"{type(e).__name__}: {e}") from e

    row = result.to_row(g, seed)
    envelope = bound_envelope(grid.protocol, n, s, k, partition.allow_duplication)
    row["envelope_ratio"] = round(row["total_bits"] / envelope, 6) if envelope else 0.0
    return row


def sweep(grid: SweepGrid, progress: bool = True) -> pd.DataFrame:
    """
    Запускает все точки сетки (до grid.jobs процессов)

    Returns:
        DataFrame со строками в порядке сетки
    """
    points = grid.points()
    logger.info(f"🚀 Sweep {grid.protocol}: {len(points)} points, jobs={grid.jobs}")

    tracker = ProgressTracker(len(points), label=f"sweep {grid.protocol}", enabled=progress)
    parallel = Parallel(n_jobs=grid.jobs, return_as="generator")
    rows = []
    for row in parallel(delayed(run_point)(grid, *point) for point in points):
        rows.append(row)
        tracker.update(details=f"n={row['n']} s={row['s']} bits={row['total_bits']}")
    tracker.complete()

    df = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    failed = int((df["verified"] == 0).sum()) if len(df) else 0
    if failed:
        logger.warning(f"⚠️ Sweep {grid.protocol}: {failed} rows failed verification")
    logger.info(f"✅ Sweep {grid.protocol} done: {len(df)} rows")
    return df


def fit_exponent(
    rows: pd.DataFrame,
    variable: str,
    fixed: Optional[Dict[str, float]] = None,
    y: str = "total_bits",
) -> Dict[str, object]:
    """
    Наклон log(y) от log(variable) методом наименьших квадратов;
    значения y усредняются по сидам

    Args:
        variable: 'n' или 's' (или другая числовая колонка)
        fixed: значения остальных координат, например {'n': 2048}

    Returns:
        dict: slope, intercept, r2, points
    """
    df = rows
    for key, value in (fixed or {}).items():
        df = df[pd.to_numeric(df[key], errors="coerce") == float(value)]

    varying = [
        column for column in ("n", "s", "k")
        if column != variable and column in df.columns and df[column].nunique(dropna=False) > 1
    ]
    if varying:
        raise SpannerDomainError(
            f"Координаты {varying} не зафиксированы: добавьте их в fixed"
        )

    means = df.groupby(variable)[y].mean()
    if len(means) < 3:
        raise SpannerDomainError(
            f"Для оценки наклона нужно ≥ 3 различных значения {variable}, есть {len(means)}"
        )

    x = np.log(means.index.to_numpy(dtype=float))
    values = np.log(means.to_numpy(dtype=float))
    fit = linregress(x, values)
    result = {
        "variable": variable,
        "y": y,
        "slope": float(fit.slope),
        "intercept": float(fit.intercept),
        "r2": float(fit.rvalue ** 2),
        "points": int(len(means)),
    }
    logger.info(f"📊 Fit {y} ~ {variable}: slope={result['slope']:.4f}, r²={result['r2']:.4f}")
    return result


# === Файлы ===

def format_rows(df: pd.DataFrame, command: str, config: Dict[str, object]) -> str:
    """CSV с эхом конфигурации в строках-комментариях"""
    header = "".join(f"{line}\n" for line in config_echo_lines(command, config))
    return header + df.to_csv(index=False, lineterminator="\n")


def save_rows(df: pd.DataFrame, path: Union[str, Path], command: str, config: Dict[str, object]):
    path = Path(path)
    path.write_text(format_rows(df, command, config), encoding="utf-8")
    logger.info(f"✅ Rows saved: {len(df)} -> {path}")


def load_rows(path: Union[str, Path]) -> pd.DataFrame:
    """Читает CSV sweep/run, пропуская комментарии"""
    return pd.read_csv(path, comment="#")


def format_fits(fits: Sequence[Dict[str, object]], config: Dict[str, object]) -> str:
    """JSON lines с результатами fit_exponent после строк-комментариев"""
    body = pd.DataFrame(list(fits)).to_json(orient="records", lines=True)
    header = "".join(f"{line}\n" for line in config_echo_lines("fit", config))
    return header + (body if body.endswith("\n") else f"{body}\n")

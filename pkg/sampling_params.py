# sampling_params.py
"""
Подбор размеров выборок и порогов степеней для протоколов
"""

import math
from dataclasses import dataclass
from typing import Optional

from config import DEFAULT_C_R1_K, DEFAULT_C_RATE, DEFAULT_C_SAMPLE, DEFAULT_DELTA


@dataclass(frozen=True)
class SamplingPlan:
    """Константы Õ(·): выборка ⌈c·f·ln(n/δ)⌉, вероятность min(1, c_rate·ln n / d)"""
    c: float = DEFAULT_C_SAMPLE
    delta: Optional[float] = DEFAULT_DELTA
    c_r1_k: float = DEFAULT_C_R1_K
    c_rate: float = DEFAULT_C_RATE

    def __post_init__(self):
        if self.c <= 0 or self.c_r1_k <= 0 or self.c_rate <= 0:
            raise ValueError("Константы выборки должны быть положительными")
        if self.delta is not None and not 0 < self.delta < 1:
            raise ValueError(f"δ должно быть в (0, 1), получено {self.delta}")

    def failure_target(self, n: int) -> float:
        """δ; по умолчанию 1/n"""
        return self.delta if self.delta is not None else 1.0 / max(n, 2)

    def log_term(self, n: int) -> float:
        """ln(n/δ)"""
        n = max(n, 2)
        return math.log(n / self.failure_target(n))

    def sample_count(self, f: float, n: int, c: Optional[float] = None) -> int:
        """⌈c·f·ln(n/δ)⌉, не меньше 1"""
        c = self.c if c is None else c
        return max(1, math.ceil(c * f * self.log_term(n)))

    def lemma_count(self, universe: int, t: float, collection: int) -> int:
        """
        Размер выборки, попадающей в каждое из |C| множеств размера ≥ t

        Args:
            universe: |U|
            t: нижняя граница размера множеств
            collection: |C|
        """
        delta = self.failure_target(universe)
        return max(1, math.ceil(self.c * (universe / t) * math.log(max(collection, 1) / delta)))

    def rate(self, d: float, n: int) -> float:
        """Вероятность попадания в выборку min(1, c_rate·ln n / d)"""
        if d <= 0:
            return 1.0
        return min(1.0, self.c_rate * math.log(max(n, 2)) / d)


@dataclass(frozen=True)
class AdditiveParams:
    """Порог степени и размеры выборок для аддитивных протоколов"""
    threshold: float
    full_bfs_count: int
    truncated_bfs_count: int = 0
    truncated_size: int = 0
    description: str = ""


@dataclass(frozen=True)
class ClusterParams:
    """Пороги Baswana-Sen для модели с координатором"""
    d1: float
    d2: float
    p0: float
    p_next: float
    ell: int
    odd: bool
    iterations: int
    description: str = ""


def get_additive2_params(n: int, s: int, plan: SamplingPlan) -> AdditiveParams:
    """Порог √(sn), выборка Õ(√(n/s)) корней полного BFS"""
    return AdditiveParams(
        threshold=math.sqrt(s * n),
        full_bfs_count=plan.sample_count(math.sqrt(n / s), n),
        description=f"additive2 n={n} s={s}",
    )


def get_additive_k_params(n: int, s: int, k: int, plan: SamplingPlan) -> AdditiveParams:
    """
    Порог √(sn/k); R1 = Õ(√(n/sk)) + Õ(k) с независимыми константами,
    R2 = Õ(√(kn/s)) корней усечённого BFS размера ⌈n/k⌉
    """
    r1 = plan.sample_count(math.sqrt(n / (s * k)), n) + plan.sample_count(k, n, c=plan.c_r1_k)
    return AdditiveParams(
        threshold=math.sqrt(s * n / k),
        full_bfs_count=r1,
        truncated_bfs_count=plan.sample_count(math.sqrt(k * n / s), n),
        truncated_size=math.ceil(n / k),
        description=f"additive-k n={n} s={s} k={k}",
    )


def get_cluster_params(n: int, s: int, k: int, plan: SamplingPlan) -> ClusterParams:
    """
    d1 = s^(1-2/k)·n^(1/k), d2 = n^(1/k)/s^(2/k);
    k = 2ℓ+1 или k = 2ℓ, фаза расширения идёт ℓ-1 итераций
    """
    n_eff = max(n, 2)
    d1 = s ** (1 - 2 / k) * n_eff ** (1 / k)
    d2 = n_eff ** (1 / k) / s ** (2 / k)
    ell = k // 2
    return ClusterParams(
        d1=d1,
        d2=d2,
        p0=plan.rate(d1, n_eff),
        p_next=plan.rate(d2, n_eff),
        ell=ell,
        odd=bool(k % 2),
        iterations=ell - 1,
        description=f"baswana-sen n={n} s={s} k={k}",
    )

# metrics.py
"""
Модуль для оценки качества спаннера
"""
import logging
from typing import Dict, Tuple

import numpy as np

from graph_core import Graph, check_subgraph, all_pairs_distances, girth

logger = logging.getLogger(__name__)


class SpannerMetrics:
    """Вычисление и интерпретация метрик спаннера H ⊆ G"""

    @staticmethod
    def calculate(g: Graph, h: Graph) -> Dict[str, float]:
        """
        Вычисляет растяжение по всем парам и разреженность

        Args:
            g: исходный граф
            h: спаннер (подграф g)

        Returns:
            dict с метриками
        """
        check_subgraph(g, h)

        d_g = all_pairs_distances(g).dist
        d_h = all_pairs_distances(h).dist
        # Пары на конечном расстоянии ≥ 1 в G
        mask = np.isfinite(d_g) & (d_g > 0)
        lost = mask & ~np.isfinite(d_h)

        metrics = {
            'n': g.n,
            'm': g.m,
            'spanner_edges': h.m,
            'edge_ratio': round(h.m / g.m, 4) if g.m else 1.0,
            'disconnected_pairs': int(np.count_nonzero(lost)) // 2,
            'girth': girth(h),
        }

        reachable = mask & np.isfinite(d_h)
        if not np.any(reachable):
            metrics.update(
                max_additive_stretch=0,
                max_multiplicative_stretch=1.0,
                mean_multiplicative_stretch=1.0,
            )
        else:
            ratio = d_h[reachable] / d_g[reachable]
            metrics.update(
                max_additive_stretch=int(np.max(d_h[reachable] - d_g[reachable])),
                max_multiplicative_stretch=round(float(np.max(ratio)), 4),
                mean_multiplicative_stretch=round(float(np.mean(ratio)), 4),
            )

        logger.info(f"📊 Spanner metrics: {metrics}")
        return metrics

    @staticmethod
    def interpret(metrics: Dict[str, float]) -> Dict[str, Tuple[str, str]]:
        """
        Интерпретирует метрики

        Returns:
            dict с оценками и пояснениями
        """
        ratio = metrics['edge_ratio']
        stretch = metrics['max_multiplicative_stretch']

        if metrics['disconnected_pairs']:
            connectivity = ("🔴 Плохо", "Спаннер разрывает связные пары")
        else:
            connectivity = ("🟢 Отлично", "Все связные пары остаются связными")

        if ratio <= 0.25:
            sparsity = ("🟢 Отлично", "Оставлено не больше четверти рёбер")
        elif ratio <= 0.5:
            sparsity = ("🟡 Хорошо", "Оставлено не больше половины рёбер")
        elif ratio < 1.0:
            sparsity = ("🟠 Слабо", "Удалено меньше половины рёбер")
        else:
            sparsity = ("🔴 Нет сжатия", "Спаннер совпадает с графом")

        if stretch <= 1.0:
            distortion = ("🟢 Точно", "Все расстояния сохранены")
        elif stretch <= 3.0:
            distortion = ("🟡 Хорошо", "Расстояния растянуты не более чем втрое")
        else:
            distortion = ("🟠 Заметно", "Растяжение больше трёх")

        return {
            'connectivity': connectivity,
            'sparsity': sparsity,
            'distortion': distortion,
        }

    @staticmethod
    def format_report(metrics: Dict[str, float], target: str = "", ok=None) -> str:
        """
        Текстовый отчёт для `verify`

        Args:
            target: описание проверяемой границы, например «additive +2»
            ok: результат проверки границы (None - не проверялось)
        """
        interpretation = SpannerMetrics.interpret(metrics)

        report = "📊 Качество спаннера\n\n"
        report += f"Граф: n={metrics['n']}, m={metrics['m']}; спаннер: {metrics['spanner_edges']} рёбер\n\n"

        status, desc = interpretation['sparsity']
        report += f"Разреженность\n{status} {metrics['edge_ratio']:.3f}\n{desc}\n\n"

        status, desc = interpretation['distortion']
        report += (
            f"Растяжение\n{status} ×{metrics['max_multiplicative_stretch']:.3f} "
            f"(среднее ×{metrics['mean_multiplicative_stretch']:.3f}, "
            f"+{metrics['max_additive_stretch']})\n{desc}\n\n"
        )

        status, desc = interpretation['connectivity']
        report += f"Связность\n{status} {metrics['disconnected_pairs']} разорванных пар\n{desc}\n\n"

        report += f"Обхват спаннера: {metrics['girth']}\n\n"

        if ok is None:
            return report
        if ok:
            report += f"✅ Граница {target} выполнена"
        else:
            report += f"❌ Граница {target} нарушена"
        return report

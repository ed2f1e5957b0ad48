# progress_tracker.py
"""
Трекер прогресса sweep с throttling
"""
import logging
import time
from typing import Optional

from tqdm import tqdm

from config import PROGRESS_INTERVAL

logger = logging.getLogger(__name__)


class ProgressTracker:
    """
    Отслеживает число выполненных точек сетки: полоса tqdm в stderr
    и строка в лог не чаще min_interval секунд
    """

    def __init__(self, total: int, label: str = "sweep", min_interval: float = PROGRESS_INTERVAL,
                 enabled: bool = True):
        """
        Args:
            total: число точек сетки
            label: подпись полосы
            min_interval: минимальный интервал между строками лога (секунды)
            enabled: показывать ли полосу tqdm
        """
        self.total = total
        self.label = label
        self.min_interval = min_interval
        self.done = 0
        self.last_update = 0.0
        self._bar: Optional[tqdm] = tqdm(total=total, desc=label, leave=False) if enabled else None

    @property
    def percent(self) -> int:
        return 100 if self.total == 0 else int(self.done * 100 / self.total)

    def update(self, steps: int = 1, details: str = "", force: bool = False) -> bool:
        """
        Отмечает выполненные точки

        Returns:
            True, если строка прогресса записана в лог
        """
        self.done = min(self.total, self.done + steps)
        if self._bar is not None:
            self._bar.update(steps)

        now = time.monotonic()
        if not (force or now - self.last_update >= self.min_interval):
            return False

        self.last_update = now
        logger.info(self._format_message(details))
        return True

    def _format_message(self, details: str) -> str:
        """Строка с текстовой полосой"""
        filled = self.percent // 10
        bar = "█" * filled + "░" * (10 - filled)

        if self.percent < 30:
            emoji = "🔄"
        elif self.percent < 100:
            emoji = "⚙️"
        else:
            emoji = "✅"

        message = f"{emoji} {self.label} {bar} {self.percent}% ({self.done}/{self.total})"
        if details:
            message += f" {details}"
        return message

    def complete(self, details: str = ""):
        """Завершает прогресс"""
        self.update(self.total - self.done, details, force=True)
        if self._bar is not None:
            self._bar.close()

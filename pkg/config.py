# config.py
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Пути
BASE_DIR = Path(__file__).parent
LOG_DIR = Path(os.getenv("SPANNER_LOG_DIR", BASE_DIR / "logs"))
LOG_FILE_NAME = "spanner_sim.log"
LOG_LEVEL = os.getenv("SPANNER_LOG_LEVEL", "INFO")

# Имя программы в заголовках файлов
PROG_NAME = "spanner-sim"

# Случайность
DEFAULT_SEED = int(os.getenv("SPANNER_SEED", "1"))

# Константы Õ(·): размер выборки = ⌈c·f·ln(n/δ)⌉
DEFAULT_C_SAMPLE = float(os.getenv("SPANNER_C_SAMPLE", "2.0"))
# Второе слагаемое R1 в additive-k (Õ(k))
DEFAULT_C_R1_K = float(os.getenv("SPANNER_C_R1_K", DEFAULT_C_SAMPLE))
# Вероятности вида log n / d
DEFAULT_C_RATE = float(os.getenv("SPANNER_C_RATE", "1.0"))
# Число ℓ0-семплеров соседей на вершину в стриминге: ⌈c·n^{1/k}·ln n⌉
DEFAULT_C_SLOTS = float(os.getenv("SPANNER_C_SLOTS", "2.0"))
# δ по умолчанию = 1/n (None)
_delta_env = os.getenv("SPANNER_DELTA")
DEFAULT_DELTA = float(_delta_env) if _delta_env else None

# Лимиты
VERIFY_CAP = int(os.getenv("SPANNER_VERIFY_CAP", "256"))  # APSP дорогой
SWEEP_JOBS = int(os.getenv("SPANNER_SWEEP_JOBS", "1"))
PROGRESS_INTERVAL = float(os.getenv("SPANNER_PROGRESS_INTERVAL", "3.0"))  # секунды

# === Sweep по умолчанию ===
DEFAULT_EDGE_EXPONENT = 1.5
DEFAULT_EDGE_FACTOR = 1.0
DEFAULT_PARTITION_MODE = "disjoint-random"

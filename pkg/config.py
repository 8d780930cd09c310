import logging
import os
import sys
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

# Make the project root importable when modules are run directly
ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

logger = logging.getLogger(__name__)


def _auto_detect_workers() -> int:
    """
    Detect a worker-process count for per-vertex and per-replica work.

    Returns:
        int: number of worker processes, at least 1
    """
    try:
        from utils.system_utils import calculate_optimal_workers

        workers = calculate_optimal_workers()
        logger.debug("auto-detected worker count: %d", workers)
        return workers
    except Exception as e:
        logger.warning("worker auto-detection failed (%s), falling back to 1", e)
        return 1


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


_env_workers = os.getenv("FIREFIGHTER_WORKERS")
_DEFAULT_WORKERS = int(_env_workers) if _env_workers else _auto_detect_workers()


class Settings(BaseModel):
    # Default RNG seed when --seed is not passed
    DEFAULT_SEED: int = Field(default_factory=lambda: _env_int("FIREFIGHTER_SEED", 20240601))
    # Worker processes for per-vertex solving and Monte Carlo replicas
    WORKERS: int = Field(default=max(1, _DEFAULT_WORKERS), ge=1)
    NODE_BUDGET: int = Field(default_factory=lambda: _env_int("FIREFIGHTER_NODE_BUDGET", 10_000_000), ge=1)
    MAX_TRIES: int = Field(default_factory=lambda: _env_int("FIREFIGHTER_MAX_TRIES", 10_000), ge=1)
    LOG_LEVEL: str = os.getenv("FIREFIGHTER_LOG_LEVEL", "INFO").upper()
    # Empty string disables the rotating file handler
    LOG_DIR: Optional[str] = os.getenv("FIREFIGHTER_LOG_DIR", str(ROOT / "logs"))

    @property
    def log_path(self) -> Optional[Path]:
        if not self.LOG_DIR:
            return None
        return Path(self.LOG_DIR) / "firefighter.log"


settings = Settings()

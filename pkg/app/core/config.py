"""Runtime paths and defaults derived from settings"""
import sys
from pathlib import Path
from typing import Optional

CURRENT_DIR = Path(__file__).resolve().parent.parent
PROJECT_ROOT = CURRENT_DIR.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from config import settings  # noqa: E402

LOG_FILE: Optional[Path] = settings.log_path
LOG_LEVEL: str = settings.LOG_LEVEL

DEFAULT_SEED: int = settings.DEFAULT_SEED
WORKERS: int = settings.WORKERS
NODE_BUDGET: int = settings.NODE_BUDGET
MAX_TRIES: int = settings.MAX_TRIES

"""
Command-line entry point.

    python -m app.main <command> [flags]

Commands: gen, solve, rate, classify, expand, recur, simplicity, scan-eps, trend, census.
Reports are JSON (stdout or --out); scans and trends also write CSV.
"""
import argparse
import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Optional, Sequence

# Allow running main.py directly as well as via -m
CURRENT_DIR = Path(__file__).resolve().parent
PROJECT_ROOT = CURRENT_DIR.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from pydantic import ValidationError  # noqa: E402

from app.core.config import DEFAULT_SEED, LOG_FILE, LOG_LEVEL, NODE_BUDGET, WORKERS  # noqa: E402
from app.core.constants import COMMANDS, VERSION  # noqa: E402
from app.core.exceptions import ConfigError, FirefighterError  # noqa: E402
from app.core.logging_config import setup_logging  # noqa: E402
from app.services.run_service import RunService  # noqa: E402
from schemas.run import RunConfig  # noqa: E402
from utils.report_utils import metadata, provenance, write_json  # noqa: E402

logger = logging.getLogger(__name__)


class _StrictParser(argparse.ArgumentParser):
    """argparse that raises ConfigError instead of printing usage and exiting"""

    def error(self, message: str):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _StrictParser(prog="firefighter", description="k-firefighter toolkit")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--graph", dest="graph_path", help="input edge-list file")
    parser.add_argument("--out", dest="out_path", help="output file (JSON report, edge list or CSV)")
    parser.add_argument("--seed", type=int, help="RNG seed (default: FIREFIGHTER_SEED)")
    parser.add_argument("--k", type=int, help="firefighters per round")
    parser.add_argument("--d", type=int, help="X-side degree of G(n, d, d+2)")
    parser.add_argument("--n", type=int, help="scale parameter / vertex count")
    parser.add_argument("--eps", help="constant as decimal or p/q")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--mode", choices=("exact", "monte-carlo"))
    parser.add_argument("--which", choices=("f", "g"))
    parser.add_argument("--budget", type=int, help="exact-solver node budget")
    parser.add_argument("--vertex", type=int, help="solve a single ignition vertex")
    parser.add_argument("--rmax", type=int, help="recurrence length in pairs of steps")
    parser.add_argument("--sizes", help="comma-separated n values for trend")
    parser.add_argument("--cutoff", type=int, help="census cycle length L (default max(3, formula))")
    parser.add_argument("--workers", type=int, help="worker processes")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ...")
    parser.add_argument("--version", action="version", version=VERSION)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> tuple[RunConfig, str]:
    """
    Raises:
        ConfigError: unknown flag, bad value or a missing per-command field.
    """
    args = vars(build_parser().parse_args(argv))
    log_level = args.pop("log_level") or LOG_LEVEL
    fields = {key: value for key, value in args.items() if value is not None}
    fields.setdefault("seed", DEFAULT_SEED)
    fields.setdefault("budget", NODE_BUDGET)
    fields.setdefault("workers", WORKERS)
    try:
        return RunConfig.model_validate(fields), log_level
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(details) from None


def _error_report(error: dict, cfg: Optional[RunConfig]) -> dict:
    report = {"error": error}
    if cfg is not None:
        report["provenance"] = provenance(cfg)
    else:
        report["provenance"] = {"version": VERSION}
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    started = datetime.now()
    clock = time.perf_counter()
    cfg: Optional[RunConfig] = None
    try:
        cfg, log_level = parse_config(argv)
        setup_logging(log_level, LOG_FILE)
        service = RunService(cfg)
        result = service.execute()
        report = {
            "result": result,
            "provenance": provenance(cfg),
            "metadata": metadata(started, time.perf_counter() - clock),
        }
        written = write_json(report, service.report_path)
        if written is not None:
            logger.info("report written to %s", written)
        return 0
    except FirefighterError as e:
        logger.error("%s failed: %s", cfg.command if cfg else "command", e.message)
        write_json(_error_report(e.to_dict(), cfg))
        return e.exit_status
    except OSError as e:
        logger.error("file I/O failed: %s", e)
        write_json(_error_report({"code": "io", "type": type(e).__name__, "message": str(e)}, cfg))
        return 1
    except Exception as e:
        logger.exception("unexpected error")
        error = {"code": "internal", "type": type(e).__name__, "message": str(e)}
        write_json(_error_report(error, cfg))
        return 3


if __name__ == "__main__":
    raise SystemExit(main())

"""JSON and CSV report writers with deterministic output"""
import csv
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from pydantic import BaseModel

from app.core.constants import VERSION
from utils.rational import format_fraction


def to_jsonable(obj: Any) -> Any:
    """pydantic models dump in JSON mode (rationals become "p/q"); containers recurse."""
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json", by_alias=True)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    return obj


def provenance(cfg: BaseModel) -> dict:
    """Command, seed, version and the echoed run configuration."""
    echo = cfg.model_dump(mode="json")
    return {
        "command": echo.get("command"),
        "seed": echo.get("seed"),
        "version": VERSION,
        "config": echo,
    }


def metadata(started: datetime, wall_time_s: float) -> dict:
    """Time-dependent fields, kept apart from the reproducible part of a report."""
    return {
        "started_at": started.astimezone(timezone.utc).isoformat(timespec="seconds"),
        "wall_time_s": round(wall_time_s, 3),
    }


def dumps_report(report: dict) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(report: dict, path: Optional[Union[str, Path]] = None) -> Optional[Path]:
    """Write to path, or to stdout when path is None."""
    text = dumps_report(report)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def sidecar_json(path: Union[str, Path]) -> Path:
    """<out>.json next to an edge-list or CSV output."""
    path = Path(path)
    return path.with_name(path.name + ".json")

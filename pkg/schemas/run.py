from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.constants import (
    DEFAULT_CENSUS_SAMPLES,
    DEFAULT_MC_SAMPLES,
    DEFAULT_NODE_BUDGET,
    DEFAULT_SAMPLES,
    DEFAULT_TRIALS,
    EPS_ONE_SIDE,
)
from schemas.expansion import ExpansionParams
from utils.rational import Rational

Command = Literal["gen", "solve", "rate", "classify", "expand", "recur", "simplicity", "scan-eps", "trend", "census"]

# Fields that must be present before a command does any work
REQUIRED_FIELDS: dict[str, tuple[str, ...]] = {
    "gen": ("d", "n", "out_path"),
    "solve": ("graph_path", "k"),
    "rate": ("graph_path", "k"),
    "classify": ("graph_path", "k"),
    "expand": ("graph_path", "d"),
    "recur": ("k",),
    "simplicity": ("d", "n"),
    "scan-eps": ("d", "which"),
    "trend": ("k", "sizes"),
    "census": ("d", "n"),
}

_FLAG_NAMES = {"graph_path": "--graph", "out_path": "--out"}


class RunConfig(BaseModel):
    """One CLI invocation; echoed verbatim into every report."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    graph_path: Optional[Path] = None
    out_path: Optional[Path] = None
    seed: int = Field(..., ge=0)
    k: Optional[int] = Field(default=None, ge=1)
    d: Optional[int] = Field(default=None, ge=3)
    n: Optional[int] = Field(default=None, ge=1)
    eps: Optional[Rational] = None
    trials: int = Field(default=DEFAULT_TRIALS, ge=1)
    samples: Optional[int] = Field(default=None, ge=1)
    mode: Literal["exact", "monte-carlo"] = "exact"
    which: Optional[Literal["f", "g"]] = None
    budget: int = Field(default=DEFAULT_NODE_BUDGET, ge=1)
    vertex: Optional[int] = Field(default=None, ge=0)
    rmax: int = Field(default=10, ge=1)
    sizes: Optional[tuple[int, ...]] = None
    cutoff: Optional[int] = Field(default=None, ge=3)
    workers: int = Field(default=1, ge=1)

    @field_validator("sizes", mode="before")
    @classmethod
    def _split_sizes(cls, value):
        if isinstance(value, str):
            try:
                return tuple(int(x) for x in value.split(",") if x.strip())
            except ValueError:
                raise ValueError(f"--sizes must be a comma-separated list of integers, got {value!r}") from None
        return value

    @model_validator(mode="after")
    def _required(self) -> "RunConfig":
        missing = [
            _FLAG_NAMES.get(name, f"--{name}")
            for name in REQUIRED_FIELDS[self.command]
            if getattr(self, name) is None
        ]
        if missing:
            raise ValueError(f"command {self.command!r} requires {', '.join(missing)}")
        if self.eps is not None and self.eps <= 0:
            raise ValueError("--eps must be positive")
        if self.sizes is not None and (not self.sizes or min(self.sizes) < 1):
            raise ValueError("--sizes needs positive integers")
        if self.command == "trend" and self.trend_degree < 3:
            raise ValueError(f"trend needs d >= 3, got d={self.trend_degree} (without --d it is k+1)")
        if self.command == "expand":
            try:
                self.expansion_params
            except ValidationError as e:
                raise ValueError(f"--eps {self.eps}: {e.errors()[0]['msg']}") from None
        return self

    @property
    def trend_degree(self) -> int:
        return self.d if self.d is not None else self.k + 1

    @property
    def expansion_params(self) -> ExpansionParams:
        """Raises ValueError when --eps leaves no room for the joint constant below 3/8 eps."""
        return ExpansionParams(d=self.d, eps=self.eps if self.eps is not None else EPS_ONE_SIDE)

    @property
    def mc_samples(self) -> int:
        return self.samples if self.samples is not None else DEFAULT_MC_SAMPLES

    @property
    def subset_samples(self) -> int:
        return self.samples if self.samples is not None else DEFAULT_SAMPLES

    @property
    def census_samples(self) -> int:
        return self.samples if self.samples is not None else DEFAULT_CENSUS_SAMPLES

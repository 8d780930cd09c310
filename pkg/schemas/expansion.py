from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.constants import DEFAULT_C, EPS_JOINT, EPS_ONE_SIDE
from utils.rational import Rational

ExpansionSide = Literal["Y", "X", "joint"]


class ExpansionParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    d: int = Field(default=3, ge=3)
    eps: Rational = EPS_ONE_SIDE
    eps_prime: Rational = EPS_JOINT
    c: Rational = DEFAULT_C

    @model_validator(mode="after")
    def _ranges(self) -> "ExpansionParams":
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not 0 < self.eps_prime < self.eps * 3 / 8:
            raise ValueError("eps_prime must lie in (0, 3/8 * eps)")
        if not 0 < self.c <= DEFAULT_C:
            raise ValueError("c must lie in (0, 1/2]")
        return self


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    subset: tuple[int, ...]
    neighbourhood: int = Field(..., ge=0, description="|N(K)|")
    required: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _is_violation(self) -> "Violation":
        if self.neighbourhood >= self.required:
            raise ValueError("a violation needs |N(K)| < required")
        return self


class ExpansionReport(BaseModel):
    """
    Coverage and violations of an expansion check. Sampled size classes only
    give evidence; a violation found by sampling is still definitive.
    """

    model_config = ConfigDict(frozen=True)

    side: ExpansionSide
    eps: Rational
    max_size: int
    checked_sizes: tuple[int, ...] = Field(default=(), description="sizes enumerated exhaustively")
    sampled_sizes: tuple[int, ...] = Field(default=(), description="sizes covered by sampling")
    subsets_checked: int = 0
    violation_count: int = 0
    violations: tuple[Violation, ...] = Field(default=(), description="sorted by size, then lexicographically")

    @property
    def ok(self) -> bool:
        return self.violation_count == 0


class EpsScan(BaseModel):
    model_config = ConfigDict(frozen=True)

    d: int
    which: Literal["f", "g"]
    c_grid: int
    eps_grid: int
    eps_star: Optional[float] = Field(..., description="largest grid eps with sup_c rate < 1")
    argmax_c: Optional[float] = None
    sup_rate: Optional[float] = Field(default=None, description="sup_c rate at eps_star")
    rows: tuple[tuple[float, float], ...] = Field(default=(), description="(eps, sup_c rate)")


class JointConstants(BaseModel):
    """Case ratios |N[K]|/|K| of the joint-expansion argument as exact rationals."""

    model_config = ConfigDict(frozen=True)

    d: int
    eps: Rational
    eps_prime: Rational
    cases: tuple[Rational, Rational, Rational, Rational]
    target: Rational = Field(..., description="1 + 3/8 * eps")
    eps_prime_margin: Rational = Field(..., description="3/8 * eps - eps_prime")
    holds: bool

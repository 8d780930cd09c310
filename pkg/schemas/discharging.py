from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.rational import Rational


class ClassificationReport(BaseModel):
    """
    V1/V2/V3 classes for k firefighters, the discharged weights and the
    transfers that produced them. Weight fields stay empty until discharge.
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1)
    n: int = Field(..., ge=0)
    tau: Rational
    v1: tuple[int, ...]
    v2: tuple[int, ...]
    v3: tuple[int, ...]
    omega: tuple[int, ...] = Field(..., description="initial weight = degree")
    omega_prime: Optional[tuple[Rational, ...]] = None
    transfers: tuple[tuple[int, int], ...] = Field(default=(), description="(giver, receiver) pairs")
    boundary_transfer: Rational = Field(default=0, description="net weight moved across the class boundary")
    bound_lhs: int = Field(..., ge=0, description="|V1| + |V2| + |V3|")
    bound_rhs: Optional[Rational] = None
    eps: Optional[Rational] = None

    @model_validator(mode="after")
    def _disjoint(self) -> "ClassificationReport":
        a, b, c = set(self.v1), set(self.v2), set(self.v3)
        if a & b or a & c or b & c:
            raise ValueError("V1, V2, V3 must be pairwise disjoint")
        if self.bound_lhs != len(a) + len(b) + len(c):
            raise ValueError("bound_lhs must equal |V1| + |V2| + |V3|")
        return self

    @property
    def classified(self) -> frozenset[int]:
        return frozenset(self.v1) | frozenset(self.v2) | frozenset(self.v3)

    @property
    def rest(self) -> tuple[int, ...]:
        covered = self.classified
        return tuple(v for v in range(self.n) if v not in covered)


class BoundVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    n: int
    eps: Rational
    tau: Rational
    density: Rational = Field(..., description="2m/n")
    lhs: int = Field(..., description="|V1 u V2 u V3|")
    rhs: Rational = Field(..., description="eps * n / tau_k")
    holds: bool

import math

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from app.core.constants import DEFAULT_MAX_TRIES


class PairingConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="scale parameter")
    d: int = Field(..., ge=3, description="X-side degree; Y side has degree d+2")
    seed: int = Field(default=0, description="RNG seed recorded in reports")
    max_tries: int = Field(default=DEFAULT_MAX_TRIES, ge=1, description="rejection cap")

    @property
    def points(self) -> int:
        """Points per side, d(d+2)n."""
        return self.d * (self.d + 2) * self.n

    @property
    def x_buckets(self) -> int:
        return (self.d + 2) * self.n

    @property
    def y_buckets(self) -> int:
        return self.d * self.n


class Pairing(BaseModel):
    """Perfect matching: X point i is paired with Y point match[i]."""

    model_config = ConfigDict(frozen=True)

    match: tuple[int, ...]

    @model_validator(mode="after")
    def _is_bijection(self) -> "Pairing":
        if sorted(self.match) != list(range(len(self.match))):
            raise ValueError("match is not a bijection on the point set")
        return self


class Multigraph(BaseModel):
    """Bipartite multigraph G(P) over X buckets and Y buckets."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    x_count: int = Field(..., ge=1)
    y_count: int = Field(..., ge=1)
    # (x bucket, y bucket, multiplicity), sorted
    edges: tuple[tuple[int, int, int], ...]

    @model_validator(mode="after")
    def _degrees(self) -> "Multigraph":
        x_deg = [0] * self.x_count
        y_deg = [0] * self.y_count
        for x, y, mult in self.edges:
            if not (0 <= x < self.x_count and 0 <= y < self.y_count):
                raise ValueError(f"edge ({x}, {y}) leaves the X or Y buckets")
            if mult < 1:
                raise ValueError(f"multiplicity of ({x}, {y}) must be positive")
            x_deg[x] += mult
            y_deg[y] += mult
        if any(deg != self.d for deg in x_deg) or any(deg != self.d + 2 for deg in y_deg):
            raise ValueError("bucket degrees must be d on X and d+2 on Y")
        return self

    @property
    def total_multiplicity(self) -> int:
        return sum(mult for _, _, mult in self.edges)

    @property
    def max_multiplicity(self) -> int:
        return max((mult for _, _, mult in self.edges), default=0)


class SimplicityStats(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    d: int
    n: int
    trials: int = Field(..., ge=1)
    simple_count: int = Field(..., ge=0)
    lam: float = Field(..., gt=0, alias="lambda", description="(d^2-1)/2")

    @computed_field
    @property
    def estimate(self) -> float:
        return self.simple_count / self.trials

    @computed_field
    @property
    def predicted(self) -> float:
        return math.exp(-self.lam)

    @computed_field
    @property
    def stderr(self) -> float:
        """Binomial standard error at the predicted probability."""
        p = self.predicted
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def deviation(self) -> float:
        """(estimate - predicted) in standard errors."""
        return (self.estimate - self.predicted) / self.stderr


class SimplicityTrend(BaseModel):
    """Simplicity estimates at several n; deviations beyond tolerance are flagged, not failed."""

    model_config = ConfigDict(frozen=True)

    d: int
    tolerance: float = Field(default=3.0, description="flag threshold in standard errors")
    rows: tuple[SimplicityStats, ...]

    @computed_field
    @property
    def flagged(self) -> tuple[int, ...]:
        return tuple(row.n for row in self.rows if abs(row.deviation) > self.tolerance)

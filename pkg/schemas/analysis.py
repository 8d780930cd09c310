from fractions import Fraction
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from utils.rational import Rational

RateMode = Literal["exact", "monte-carlo"]


class RateReport(BaseModel):
    """
    Surviving rate rho_k(G). In exact mode rho_exact = sum(per_vertex) / n^2;
    when some vertex ran out of solver budget `exact` is False and the value
    is a lower bound.
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    mode: RateMode
    rho: float = Field(..., ge=0.0, le=1.0)
    rho_exact: Optional[Rational] = None
    per_vertex: Optional[tuple[int, ...]] = Field(default=None, description="sn_k(G, v) for every v")
    stderr: Optional[float] = None
    strategy: str = Field(..., description="policy producing the saved counts")
    samples: int = Field(..., ge=1)
    exact: bool = True

    @model_validator(mode="after")
    def _consistent(self) -> "RateReport":
        if self.mode == "exact":
            if self.per_vertex is None or len(self.per_vertex) != self.n:
                raise ValueError("exact mode needs sn for every vertex")
            if self.rho_exact != Fraction(sum(self.per_vertex), self.n * self.n):
                raise ValueError("rho_exact must equal sum(sn) / n^2")
        return self


class RecurrenceTrace(BaseModel):
    """s_t new fires per step (s[0] is s_1), q_t = s_1 + ... + s_t, p_t = n - q_t."""

    model_config = ConfigDict(frozen=True)

    k: int
    ignition_side: Literal["X", "Y"] = "X"
    normative: bool = Field(default=True, description="False for the Y-side ignition variant")
    s: tuple[int, ...]
    q: tuple[int, ...]
    p: Optional[tuple[int, ...]] = None

    @model_validator(mode="after")
    def _cumulative(self) -> "RecurrenceTrace":
        if any(x < 0 for x in self.s):
            raise ValueError("s_t must be non-negative")
        total = 0
        for s, q in zip(self.s, self.q, strict=True):
            total += s
            if q != total:
                raise ValueError("q_t must be the running sum of s")
        return self

    def at(self, t: int) -> int:
        """s_t with 1-based t."""
        return self.s[t - 1]


class GrowthTimeline(BaseModel):
    """
    Phase markers of the fire-growth argument with every O(1) term set to 0.
    A projection, not a certified bound.
    """

    model_config = ConfigDict(frozen=True)

    k: int
    eps_prime: float
    n: int
    q_start: int
    tree_phase_end: float = Field(..., description="T = 1/2 log_{k^2+2k} log n")
    half_burned: float = Field(..., description="T-hat: half of the graph is burning")
    half_burned_bound: float = Field(..., description="log_{1+eps'/2} n")
    all_burned: float = Field(..., description="T-bar = T-hat + log_{1/(1-eps'/(2(k+3)))} n")
    saved_bound: float = Field(..., description="2(k+3)/eps' * T-bar")
    constants_zeroed: bool = True


class TrendPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    total_vertices: int
    rho_estimate: float
    stderr: float
    c_fit: float
    fitted: float = Field(..., description="c_fit * log N / N")
    residual: float = Field(..., description="(rho_estimate - fitted) / fitted")


class TrendReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int
    d: int
    samples: int
    seed: int
    c_fit: float
    rows: tuple[TrendPoint, ...]

    @property
    def positive(self) -> bool:
        return all(r.rho_estimate > 0 for r in self.rows)

    @property
    def decreasing(self) -> bool:
        return all(a.rho_estimate > b.rho_estimate for a, b in zip(self.rows, self.rows[1:]))

    @property
    def max_residual(self) -> float:
        return max(abs(r.residual) for r in self.rows)


class CycleStudy(BaseModel):
    """Short-cycle census on sampled simple graphs next to the log N bound."""

    model_config = ConfigDict(frozen=True)

    d: int
    n: int
    total_vertices: int
    seed: int
    formula_cutoff: int = Field(..., description="floor(log_{d^2-1} log N), may sit below 3")
    cutoff: int = Field(..., ge=3, description="L the census ran at")
    counts: tuple[int, ...] = Field(..., min_length=1, description="vertices on a cycle of length <= cutoff, per sample")
    bound: float = Field(..., description="log N")

    @computed_field
    @property
    def degenerate(self) -> bool:
        """The formula cutoff is below 3, so the census ran at a raised L."""
        return self.formula_cutoff < 3

    @computed_field
    @property
    def within_bound(self) -> float:
        """Share of samples whose count is at most log N."""
        return sum(c <= self.bound for c in self.counts) / len(self.counts)

    @computed_field
    @property
    def mean_count(self) -> float:
        return sum(self.counts) / len(self.counts)

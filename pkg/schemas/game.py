from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from schemas.graph import Graph
from utils.bitset import to_tuple

Schedule = tuple[tuple[int, ...], ...]


class GameState(BaseModel):
    """
    Firefighter process state. Vertex sets are int bitsets.

    frontier caches the unburned, unprotected neighbours of the fire.
    """

    model_config = ConfigDict(frozen=True)

    graph: Graph
    k: int = Field(..., ge=1)
    burning: int
    protected: int = 0
    frontier: int = 0
    round: int = Field(default=0, ge=0)

    @property
    def burning_set(self) -> tuple[int, ...]:
        return to_tuple(self.burning)

    @property
    def protected_set(self) -> tuple[int, ...]:
        return to_tuple(self.protected)

    @property
    def frontier_set(self) -> tuple[int, ...]:
        return to_tuple(self.frontier)


class PlayOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    v: int
    k: int
    saved: int = Field(..., ge=0)
    burned: int = Field(..., ge=1)
    rounds: int = Field(..., ge=0)
    schedule: Schedule = Field(default=(), description="protection set per round")
    new_fire: tuple[int, ...] = Field(default=(), description="vertices catching fire per time step, ignition first")

    @model_validator(mode="after")
    def _conservation(self) -> "PlayOutcome":
        if self.saved + self.burned != self.n:
            raise ValueError("saved + burned must equal n")
        if self.new_fire and sum(self.new_fire) != self.burned:
            raise ValueError("new_fire must add up to burned")
        return self


class SolveResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    v: int
    k: int
    sn: int = Field(..., ge=0, description="saved count (optimal when exact)")
    exact: bool
    nodes_expanded: int = Field(default=0, ge=0)
    schedule: Schedule = ()
    note: Optional[str] = None

    @model_validator(mode="after")
    def _bounded(self) -> "SolveResult":
        if self.n and self.sn > self.n - 1:
            raise ValueError("sn cannot exceed n - 1")
        return self

    @property
    def burned(self) -> int:
        return self.n - self.sn

from typing import Iterator, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from utils.bitset import mask_of

Side = Literal["X", "Y"]


class Graph(BaseModel):
    """Immutable simple undirected graph with optional X/Y bipartition labels."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0, description="vertex count")
    adjacency: tuple[tuple[int, ...], ...] = Field(..., description="sorted neighbour list per vertex")
    side: Optional[tuple[Side, ...]] = Field(default=None, description="per-vertex X/Y label")

    _masks: tuple[int, ...] = PrivateAttr(default=())

    @model_validator(mode="after")
    def _check_invariants(self) -> "Graph":
        if len(self.adjacency) != self.n:
            raise ValueError(f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        if self.side is not None and len(self.side) != self.n:
            raise ValueError(f"side has {len(self.side)} labels for n={self.n}")
        for v, nbrs in enumerate(self.adjacency):
            for i, u in enumerate(nbrs):
                if not 0 <= u < self.n:
                    raise ValueError(f"vertex {v} has out-of-range neighbour {u}")
                if u == v:
                    raise ValueError(f"self-loop at {v}")
                if i and nbrs[i - 1] >= u:
                    raise ValueError(f"neighbours of {v} not strictly ascending")
                if v not in self.adjacency[u]:
                    raise ValueError(f"edge {v}-{u} is not symmetric")
                if self.side is not None and self.side[u] == self.side[v]:
                    raise ValueError(f"edge {v}-{u} joins two {self.side[v]} vertices")
        return self

    def model_post_init(self, __context) -> None:
        self._masks = tuple(mask_of(nbrs) for nbrs in self.adjacency)

    @property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood bitsets, masks[v] has bit u set iff u ~ v."""
        return self._masks

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if v < u:
                    yield v, u

    def vertices_on(self, label: Side) -> tuple[int, ...]:
        if self.side is None:
            return ()
        return tuple(v for v, s in enumerate(self.side) if s == label)


class CycleCensus(BaseModel):
    model_config = ConfigDict(frozen=True)

    L: int = Field(..., ge=3, description="cycle length cutoff")
    on_short_cycle: tuple[bool, ...]
    count: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _count_matches(self) -> "CycleCensus":
        if self.count != sum(self.on_short_cycle):
            raise ValueError("count must equal the number of flagged vertices")
        return self

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, flag in enumerate(self.on_short_cycle) if flag)

"""
k-firefighter process: ignite, protect, spread, terminate.

Each round the firefighter protects up to k unburned, unprotected vertices
(anywhere in the graph), then the fire spreads to every unprotected neighbour
of the burning set. The process stops when no such neighbour is left.
"""
import logging
from typing import Callable, Iterable, Sequence

from app.core.exceptions import IllegalProtectionError, InvariantViolation, PreconditionError
from schemas.game import GameState, PlayOutcome
from schemas.graph import Graph
from utils.bitset import mask_of, popcount, to_tuple, union_of

logger = logging.getLogger(__name__)

Strategy = Callable[[GameState], Iterable[int]]


def ignite(g: Graph, v: int, k: int) -> GameState:
    if k < 1:
        raise PreconditionError(f"at least one firefighter per round is needed, got k={k}")
    if not 0 <= v < g.n:
        raise PreconditionError(f"ignition vertex {v} out of range for n={g.n}")
    return GameState(graph=g, k=k, burning=1 << v, protected=0, frontier=g.masks[v], round=0)


def protect(s: GameState, S: Iterable[int]) -> GameState:
    """Protect the vertices of S; fewer than k (or none) is legal."""
    vertices = tuple(S)
    mask = mask_of(vertices)
    if len(vertices) != popcount(mask):
        raise IllegalProtectionError(f"protection set {sorted(vertices)} repeats a vertex")
    if popcount(mask) > s.k:
        raise IllegalProtectionError(f"{popcount(mask)} vertices protected with k={s.k}")
    if any(not 0 <= v < s.graph.n for v in vertices):
        raise IllegalProtectionError(f"protection set {sorted(vertices)} has out-of-range vertices")
    if mask & s.burning:
        raise IllegalProtectionError(f"vertices {list(to_tuple(mask & s.burning))} are burning")
    if mask & s.protected:
        raise IllegalProtectionError(f"vertices {list(to_tuple(mask & s.protected))} are already protected")
    return s.model_copy(update={"protected": s.protected | mask, "frontier": s.frontier & ~mask})


def spread(s: GameState) -> GameState:
    """Fire moves to every unprotected, unburned neighbour of the burning set."""
    caught = s.frontier
    burning = s.burning | caught
    frontier = (s.frontier & ~caught) | union_of(s.graph.masks, caught)
    frontier &= ~(burning | s.protected)
    return s.model_copy(update={"burning": burning, "frontier": frontier, "round": s.round + 1})


def is_terminal(s: GameState) -> bool:
    return s.frontier == 0


def _run(g: Graph, v: int, k: int, choose: Callable[[GameState], Iterable[int]]) -> PlayOutcome:
    s = ignite(g, v, k)
    schedule = []
    new_fire = [1]
    while not is_terminal(s):
        if s.round > g.n:
            raise InvariantViolation(f"play from {v} did not terminate within n rounds")
        chosen = tuple(sorted(choose(s)))
        s = protect(s, chosen)
        schedule.append(chosen)
        before = popcount(s.burning)
        s = spread(s)
        new_fire.append(popcount(s.burning) - before)
    burned = popcount(s.burning)
    return PlayOutcome(
        n=g.n,
        v=v,
        k=k,
        saved=g.n - burned,
        burned=burned,
        rounds=s.round,
        schedule=tuple(schedule),
        new_fire=tuple(new_fire),
    )


def play(g: Graph, v: int, k: int, strategy: Strategy) -> PlayOutcome:
    """Alternate strategy-chosen protection and spread from ignition at v until terminal."""
    return _run(g, v, k, strategy)


def replay(g: Graph, v: int, k: int, schedule: Sequence[Sequence[int]]) -> PlayOutcome:
    """Replay a protection schedule; rounds beyond it protect nothing."""

    def scheduled(s: GameState) -> Iterable[int]:
        if s.round < len(schedule):
            return schedule[s.round]
        return ()

    return _run(g, v, k, scheduled)


def trace_json(outcome: PlayOutcome) -> dict:
    """Play trace for replay and debugging."""
    return {
        "v": outcome.v,
        "k": outcome.k,
        "rounds": outcome.rounds,
        "saved": outcome.saved,
        "schedule": [list(S) for S in outcome.schedule],
    }


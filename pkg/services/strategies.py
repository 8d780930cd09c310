"""
Protection policies: greedy, the class-based surround strategy, an exact
branch-and-bound solver for sn_k(G, v) and an exhaustive oracle.
"""
import logging
from itertools import combinations
from typing import Iterable, Literal, Optional

from app.core.constants import BRUTE_FORCE_MAX_N, DEFAULT_NODE_BUDGET
from app.core.exceptions import ClassMembershipError, PreconditionError
from schemas.game import GameState, Schedule, SolveResult
from schemas.graph import Graph
from services.fire_engine import ignite, play
from utils.bitset import bits, mask_of, popcount, union_of

logger = logging.getLogger(__name__)

VertexClass = Literal["V1", "V2", "V3"]


# ==================== Heuristic policies ====================

def greedy_strategy(s: GameState) -> frozenset[int]:
    """Up to k fire-adjacent vertices, highest degree first, then lowest index."""
    frontier = sorted(bits(s.frontier), key=lambda u: (-s.graph.degree(u), u))
    return frozenset(frontier[: s.k])


def noop_strategy(s: GameState) -> frozenset[int]:
    return frozenset()


def schedule_strategy(schedule: Schedule):
    """Strategy replaying a fixed schedule by round index."""

    def chooser(s: GameState) -> tuple[int, ...]:
        return tuple(schedule[s.round]) if s.round < len(schedule) else ()

    return chooser


class OptimalStrategy:
    """Solves once at ignition with exact_sn and then follows the witness schedule."""

    def __init__(self, node_budget: int = DEFAULT_NODE_BUDGET):
        self.node_budget = node_budget
        # last solved graph, held by reference
        self._graph: Optional[Graph] = None
        self._start: Optional[tuple[int, int]] = None
        self._schedule: Schedule = ()

    def __call__(self, s: GameState) -> tuple[int, ...]:
        if s.round == 0:
            start = (next(bits(s.burning)), s.k)
            if s.graph is not self._graph or start != self._start:
                self._schedule = exact_sn(s.graph, start[0], s.k, self.node_budget).schedule
                self._graph, self._start = s.graph, start
        return tuple(self._schedule[s.round]) if s.round < len(self._schedule) else ()


# ==================== Surround strategy ====================

def _sealing_schedule(g: Graph, steps: Iterable[tuple[int, Iterable[int]]]) -> Schedule:
    """Per round, the neighbours of x outside skip that no earlier round protected."""
    done: set[int] = set()
    schedule = []
    for x, skip in steps:
        skip = set(skip) | done
        chosen = tuple(u for u in g.adjacency[x] if u not in skip)
        done.update(chosen)
        schedule.append(chosen)
    return tuple(schedule)


def surround_strategy(g: Graph, v: int, k: int, cls: VertexClass) -> Schedule:
    """
    Protection schedule that stops the fire after 1, 2 or 3 burned vertices
    for an ignition vertex in V1, V2 or V3 respectively.

    V1: protect all (at most k) neighbours of v.
    V2: protect every neighbour except one neighbour u of degree <= k+1, then
        seal u's remaining neighbours.
    V3: steer the fire v -> w -> u where w has degree k+2 and u is a second
        degree-(k+1) neighbour of w, sealing the frontier each round.

    Raises:
        ClassMembershipError: v is not in the named class.
    """
    from services.discharging import class_of, classify

    report = classify(g, k)
    actual = class_of(report, v)
    if actual != cls:
        raise ClassMembershipError(f"vertex {v} is in {actual or 'none of V1/V2/V3'}, not {cls}")

    deg = g.degrees
    if cls == "V1":
        return (g.adjacency[v],)

    if cls == "V2":
        u = next(x for x in g.adjacency[v] if deg[x] <= k + 1)
        return _sealing_schedule(g, [(v, [u]), (u, [v])])

    # V3: w of degree k+2 next to v with another degree-(k+1) neighbour u
    for w in g.adjacency[v]:
        if deg[w] != k + 2:
            continue
        others = [u for u in g.adjacency[w] if u != v and deg[u] == k + 1]
        if others:
            u = others[0]
            break
    else:  # pragma: no cover - classify guarantees a witness
        raise ClassMembershipError(f"no V3 witness around vertex {v}")
    # u is not adjacent to v: otherwise v would have a degree-(k+1) neighbour and be in V2
    return _sealing_schedule(g, [(v, [w]), (w, [v, u]), (u, [w])])


# ==================== Exact solver ====================

_INF = float("inf")


class _BudgetExhausted(Exception):
    pass


class _ExactSolver:
    """
    Depth-first branch and bound over (burning, protected) states.

    search() returns the number of vertices that will still catch fire under
    optimal play when that number is below alpha; otherwise it returns some
    lower bound >= alpha. Memo entries are (value, exact, best_move) keyed by
    (burning vertices touching the threatened region, threatened region):
    two states with the same key have identical futures.
    """

    def __init__(self, g: Graph, k: int, node_budget: int, use_memo: bool):
        self.g = g
        self.masks = g.masks
        self.k = k
        self.node_budget = node_budget
        self.use_memo = use_memo
        self.memo: dict[tuple[int, int], tuple[int, bool, Optional[tuple[int, ...]]]] = {}
        self.nodes = 0
        self.path: list[tuple[int, ...]] = []
        self.best_total = g.n + 1
        self.best_schedule: list[tuple[int, ...]] = []

    def _threatened(self, burning: int, protected: int, frontier: int) -> tuple[int, list[int]]:
        """Unburned, unprotected vertices the fire can still reach, ordered by distance."""
        blocked = burning | protected
        seen = frontier
        layer = frontier
        order: list[int] = []
        while layer:
            order.extend(bits(layer))
            nxt = union_of(self.masks, layer) & ~(blocked | seen)
            seen |= nxt
            layer = nxt
        return seen, order

    def _continuation(self, burning: int, protected: int) -> list[tuple[int, ...]]:
        """Follow memoised best moves from a solved state to the end of the game."""
        moves = []
        while True:
            frontier = union_of(self.masks, burning) & ~(burning | protected)
            if not frontier:
                return moves
            threatened, _ = self._threatened(burning, protected, frontier)
            key = (burning & union_of(self.masks, threatened), threatened)
            move = self.memo[key][2]
            moves.append(tuple(sorted(move)))
            smask = mask_of(move)
            burning |= frontier & ~smask
            protected |= smask

    def _record(self, total: int, tail: list[tuple[int, ...]]) -> None:
        if total < self.best_total:
            self.best_total = total
            self.best_schedule = list(self.path) + tail

    def search(self, burning: int, protected: int, alpha: int) -> int:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise _BudgetExhausted

        frontier = union_of(self.masks, burning) & ~(burning | protected)
        if not frontier:
            self._record(popcount(burning), [])
            return 0

        threatened, order = self._threatened(burning, protected, frontier)
        key = (burning & union_of(self.masks, threatened), threatened)
        if self.use_memo:
            hit = self.memo.get(key)
            if hit is not None:
                value, exact, _ = hit
                if exact:
                    if popcount(burning) + value < self.best_total:
                        self._record(popcount(burning) + value, self._continuation(burning, protected))
                    return value
                if value >= alpha:
                    return value

        # at most k frontier vertices can be saved this round
        forced = max(0, popcount(frontier) - self.k)
        if forced >= alpha:
            return forced

        best = _INF
        best_move: Optional[tuple[int, ...]] = None
        # smallest lower bound among children that could not beat the limit
        floor = _INF
        # protecting fewer than min(k, |threatened|) vertices is dominated
        size = min(self.k, len(order))
        for move in combinations(order, size):
            smask = mask_of(move)
            caught = frontier & ~smask
            now = popcount(caught)
            limit = min(alpha, best)
            if now >= limit:
                floor = min(floor, now)
                continue
            self.path.append(tuple(sorted(move)))
            value = now + self.search(burning | caught, protected | smask, limit - now)
            self.path.pop()
            if value < limit:
                best = value
                best_move = move
                if best <= forced:
                    break
            else:
                floor = min(floor, value)

        result = min(best, floor)
        exact = result < alpha
        if self.use_memo:
            self.memo[key] = (result, exact, best_move if exact else None)
        return result


def exact_sn(
    g: Graph,
    v: int,
    k: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    use_memo: bool = True,
) -> SolveResult:
    """
    Optimal number of saved vertices for a fire starting at v.

    The greedy play seeds the incumbent. When node_budget runs out the best
    schedule found so far is returned with exact=False; its saved count is a
    valid lower bound on sn_k(G, v).
    """
    if node_budget < 1:
        raise PreconditionError(f"node_budget must be at least 1, got {node_budget}")
    ignite(g, v, k)

    greedy = play(g, v, k, greedy_strategy)
    solver = _ExactSolver(g, k, node_budget, use_memo)
    solver.best_total = greedy.burned
    solver.best_schedule = [tuple(S) for S in greedy.schedule]

    exact = True
    try:
        solver.search(1 << v, 0, greedy.burned - 1)
    except _BudgetExhausted:
        exact = False
        logger.info("exact_sn budget of %d nodes exhausted at v=%d, k=%d", node_budget, v, k)

    return SolveResult(
        n=g.n,
        v=v,
        k=k,
        sn=g.n - solver.best_total,
        exact=exact,
        nodes_expanded=min(solver.nodes, node_budget),
        schedule=tuple(solver.best_schedule),
    )


def brute_sn(g: Graph, v: int, k: int) -> int:
    """
    Exhaustive oracle: every protection set of size 0..k from all unburned,
    unprotected vertices, every round. Identical states are cached but
    nothing is pruned or assumed.
    """
    if g.n > BRUTE_FORCE_MAX_N:
        raise PreconditionError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got n={g.n}")
    ignite(g, v, k)
    masks = g.masks
    full = g.all_mask
    cache: dict[tuple[int, int], int] = {}

    def final_burned(burning: int, protected: int) -> int:
        frontier = union_of(masks, burning) & ~(burning | protected)
        if not frontier:
            return popcount(burning)
        key = (burning, protected)
        if key in cache:
            return cache[key]
        free = list(bits(full & ~(burning | protected)))
        best = g.n
        for size in range(0, min(k, len(free)) + 1):
            for S in combinations(free, size):
                smask = mask_of(S)
                best = min(best, final_burned(burning | (frontier & ~smask), protected | smask))
        cache[key] = best
        return best

    return g.n - final_burned(1 << v, 0)

"""
Surviving rates (exact and Monte Carlo), the fire-growth recurrence on
biregular trees, growth-phase projections, the rate trend experiment and the
short-cycle study on sampled graphs.
"""
import logging
import math
from fractions import Fraction
from functools import partial
from typing import Optional, Sequence

import numpy as np

from app.core.constants import DEFAULT_MC_SAMPLES, DEFAULT_NODE_BUDGET
from app.core.exceptions import InvariantViolation, PreconditionError
from schemas.analysis import CycleStudy, GrowthTimeline, RateReport, RecurrenceTrace, TrendPoint, TrendReport
from schemas.graph import Graph, Side
from schemas.pairing import PairingConfig
from services.discharging import tau
from services.fire_engine import Strategy, play
from services.graph_core import (
    average_degree,
    is_tree_ball,
    short_cycle_census,
    short_cycle_cutoff,
    validate_biregular,
)
from services.graph_families import biregular_tree
from services.pairing_gen import sample_simple
from services.strategies import exact_sn, greedy_strategy
from utils.parallel import map_ordered
from utils.rng import make_rng, replica_rng

logger = logging.getLogger(__name__)


# ==================== Surviving rate ====================

def _solve_vertex(g: Graph, k: int, node_budget: int, v: int) -> tuple[int, bool]:
    result = exact_sn(g, v, k, node_budget)
    return result.sn, result.exact


def rho_exact(g: Graph, k: int, node_budget: int = DEFAULT_NODE_BUDGET, workers: int = 1) -> RateReport:
    """
    rho_k(G) = (1/n^2) * sum_v sn_k(G, v), solved per ignition vertex.

    A vertex whose search ran out of budget contributes its best schedule and
    the report carries exact=False.
    """
    if g.n == 0:
        raise PreconditionError("the surviving rate needs at least one vertex")
    solved = map_ordered(partial(_solve_vertex, g, k, node_budget), range(g.n), workers=workers)
    per_vertex = tuple(sn for sn, _ in solved)
    exact = all(ok for _, ok in solved)
    if not exact:
        missing = [v for v, (_, ok) in enumerate(solved) if not ok]
        logger.warning("rho_exact: budget exhausted at %d vertices, reporting a lower bound", len(missing))
    value = Fraction(sum(per_vertex), g.n * g.n)
    return RateReport(
        k=k,
        n=g.n,
        mode="exact",
        rho=float(value),
        rho_exact=value,
        per_vertex=per_vertex,
        strategy="exact",
        samples=g.n,
        exact=exact,
    )


def _saved_from(g: Graph, k: int, strategy: Strategy, v: int) -> int:
    return play(g, v, k, strategy).saved


def rho_monte_carlo(
    g: Graph,
    k: int,
    strategy: Strategy = greedy_strategy,
    samples: int = DEFAULT_MC_SAMPLES,
    rng: Optional[np.random.Generator] = None,
    ignitions: Optional[Sequence[int]] = None,
    workers: int = 1,
    strategy_name: Optional[str] = None,
) -> RateReport:
    """
    Mean of saved/n over ignition vertices drawn uniformly with replacement,
    or over the explicit `ignitions` list. With a suboptimal strategy this is
    a lower-bound estimate of rho_k.
    """
    if g.n == 0:
        raise PreconditionError("the surviving rate needs at least one vertex")
    if ignitions is None:
        if samples < 1:
            raise PreconditionError(f"samples must be at least 1, got {samples}")
        if rng is None:
            raise PreconditionError("sampled ignitions need an rng")
        ignitions = [int(v) for v in rng.integers(0, g.n, size=samples)]
    else:
        ignitions = list(ignitions)
        if not ignitions:
            raise PreconditionError("ignitions must not be empty")

    saved = map_ordered(partial(_saved_from, g, k, strategy), ignitions, workers=workers)
    fractions = np.asarray(saved, dtype=float) / g.n
    m = len(fractions)
    stderr = float(fractions.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    name = strategy_name or getattr(strategy, "__name__", type(strategy).__name__)
    return RateReport(
        k=k,
        n=g.n,
        mode="monte-carlo",
        rho=float(fractions.mean()),
        stderr=stderr,
        strategy=name,
        samples=m,
        exact=False,
    )


# ==================== Fire growth on biregular trees ====================

def s_recurrence(k: int, r_max: int, ignition_side: Side = "X", n: Optional[int] = None) -> RecurrenceTrace:
    """
    New fires per step when k firefighters face a balanced (k+1, k+3)-biregular
    tree: an X vertex has k children, a Y vertex k+2, an X root k+1, a Y root
    k+3, and every step k children are protected. For an X root this gives
    s_1 = s_2 = 1, s_{2r+1} = s_{2r}(k+2) - k and s_{2r+2} = s_{2r+1} k - k.

    The Y-root trace is a variant (s_2 = 3) and is marked non-normative.
    """
    if k == 1:
        raise PreconditionError(
            "k=1 is rejected: the biregular construction cannot be used for one firefighter "
            "(the tree growth stalls at s_2s = 1, s_2s+1 = 2)"
        )
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}")
    if r_max < 1:
        raise PreconditionError(f"r_max must be at least 1, got {r_max}")

    children = {"X": k, "Y": k + 2}
    other = {"X": "Y", "Y": "X"}
    s = [1, (k + 1 if ignition_side == "X" else k + 3) - k]
    layer = other[ignition_side]
    while len(s) < 2 * r_max:
        s.append(s[-1] * children[layer] - k)
        layer = other[layer]

    q = []
    total = 0
    for x in s:
        total += x
        q.append(total)
    p = tuple(n - x for x in q) if n is not None else None
    return RecurrenceTrace(
        k=k, ignition_side=ignition_side, normative=ignition_side == "X", s=tuple(s), q=tuple(q), p=p
    )


def s_closed(k: int, r: int) -> Fraction:
    """
    s_{2r} = (k-1) / (k(k+2)(k^2+2k-1)) * (k(k+2))^r + k(k+1) / (k^2+2k-1).

    Raises:
        InvariantViolation: the value is not a positive integer.
    """
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}")
    if r < 1:
        raise PreconditionError(f"r must be at least 1, got {r}")
    base = k * (k + 2)
    value = Fraction(k - 1, base * (k * k + 2 * k - 1)) * base ** r + Fraction(k * (k + 1), k * k + 2 * k - 1)
    if value.denominator != 1 or value <= 0:
        raise InvariantViolation(f"closed form s_{2 * r} for k={k} gave {value}, not a positive integer")
    return value


def simulate_tree_growth(k: int, depth: int, root_side: Side = "X") -> tuple[int, ...]:
    """
    Greedy play with k firefighters from the root of the balanced
    (k+1, k+3)-biregular tree of the given depth. Entry t-1 is s_t.
    """
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")
    tree = biregular_tree(k + 1, depth, root_side)
    outcome = play(tree, 0, k, greedy_strategy)
    return outcome.new_fire


def find_tree_local(g: Graph, radius: int, side: Optional[Side] = "X") -> Optional[int]:
    """First vertex (on `side`, when labelled) whose radius-ball is a tree."""
    for v in range(g.n):
        if side is not None and g.side is not None and g.side[v] != side:
            continue
        if is_tree_ball(g, v, radius):
            return v
    return None


def tree_phase_saves(k: int, total_vertices: int) -> int:
    """k saves per round during the tree phase: floor(1/2 log_{k^2+2k} N) * k."""
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}")
    if total_vertices < 2:
        raise PreconditionError(f"need at least 2 vertices, got {total_vertices}")
    # largest r with (k^2+2k)^(2r) <= N
    square = (k * k + 2 * k) ** 2
    rounds, reach = 0, square
    while reach <= total_vertices:
        rounds += 1
        reach *= square
    return rounds * k


def growth_projection(k: int, eps_prime: float, n: int, q_start: int = 1) -> GrowthTimeline:
    """
    T, T-hat and T-bar of the fire-growth argument with the O(1) terms dropped.
    T-hat is T plus the steps (1+eps'/2)-growth needs from q_start to n/2.
    """
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}")
    if not 0 < eps_prime < 1:
        raise PreconditionError(f"eps_prime must lie in (0, 1), got {eps_prime}")
    if q_start < 1:
        raise PreconditionError(f"q_start must be at least 1, got {q_start}")
    if n <= 2:
        raise PreconditionError(f"n must exceed 2 for log log n to be defined, got {n}")

    grow = math.log1p(eps_prime / 2)
    shrink = -math.log1p(-eps_prime / (2 * (k + 3)))
    t_tree = 0.5 * math.log(math.log(n)) / math.log(k * k + 2 * k)
    t_half = t_tree + max(0.0, math.log(n / (2 * q_start)) / grow)
    t_all = t_half + math.log(n) / shrink
    return GrowthTimeline(
        k=k,
        eps_prime=eps_prime,
        n=n,
        q_start=q_start,
        tree_phase_end=t_tree,
        half_burned=t_half,
        half_burned_bound=math.log(n) / grow,
        all_burned=t_all,
        saved_bound=2 * (k + 3) / eps_prime * t_all,
    )


# ==================== Density identities ====================

def average_degree_check(k: int) -> Fraction:
    """
    Average degree of a (k+1, k+3)-biregular graph with (k+3)n X vertices and
    (k+1)n Y vertices; equals tau_k.
    """
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")
    x_count, y_count = k + 3, k + 1
    value = Fraction(x_count * (k + 1) + y_count * (k + 3), x_count + y_count)
    if value != tau(k):
        raise InvariantViolation(f"average degree {value} differs from tau_{k} = {tau(k)}")
    return value


def graph_average_degree(g: Graph, k: int) -> Fraction:
    """2m/n of a concrete graph; a (k+1, k+3)-biregular one must sit exactly at tau_k."""
    value = average_degree(g)
    if g.side is not None and validate_biregular(g, k + 1) and value != tau(k):
        raise InvariantViolation(f"biregular graph has average degree {value}, expected {tau(k)}")
    return value


# ==================== Trend experiment ====================

def rate_trend(
    k: int,
    d: int,
    n_values: Sequence[int],
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> TrendReport:
    """
    Greedy Monte Carlo surviving fraction on one simple G(n, d, d+2) per n,
    with the least-squares fit rho ~ c * log N / N over N = (2d+2) n vertices.
    """
    if not n_values:
        raise PreconditionError("at least one n is needed")
    estimates = []
    for n in n_values:
        cfg = PairingConfig(n=n, d=d, seed=seed + n)
        g = sample_simple(cfg, make_rng(cfg.seed))
        report = rho_monte_carlo(
            g, k, greedy_strategy, samples, replica_rng(seed, n), workers=workers, strategy_name="greedy"
        )
        logger.info("trend n=%d N=%d: rho=%.5f (se %.5f)", n, g.n, report.rho, report.stderr)
        estimates.append((n, g.n, report.rho, report.stderr))

    x = np.array([math.log(N) / N for _, N, _, _ in estimates])
    y = np.array([rho for _, _, rho, _ in estimates])
    c = float(x @ y / (x @ x))
    rows = tuple(
        TrendPoint(
            n=n,
            total_vertices=N,
            rho_estimate=rho,
            stderr=se,
            c_fit=c,
            fitted=c * xi,
            residual=(rho - c * xi) / (c * xi) if c else 0.0,
        )
        for (n, N, rho, se), xi in zip(estimates, x)
    )
    return TrendReport(k=k, d=d, samples=samples, seed=seed, c_fit=c, rows=rows)


# ==================== Short cycles ====================

def _census_count(cfg: PairingConfig, cutoff: int, replica: int) -> int:
    g = sample_simple(cfg, replica_rng(cfg.seed, replica))
    return short_cycle_census(g, cutoff).count


def short_cycle_study(
    d: int,
    n: int,
    samples: int,
    seed: int = 0,
    cutoff: Optional[int] = None,
    workers: int = 1,
) -> CycleStudy:
    """
    Vertices on short cycles in sampled simple G(n, d, d+2), compared with log N.

    The census runs at max(3, floor(log_{d^2-1} log N)) unless `cutoff` is
    given; for realistic N the formula gives 0 or 1 and the report says so.
    """
    if samples < 1:
        raise PreconditionError(f"samples must be at least 1, got {samples}")
    cfg = PairingConfig(n=n, d=d, seed=seed)
    total = cfg.x_buckets + cfg.y_buckets
    formula = short_cycle_cutoff(d, total)
    L = cutoff if cutoff is not None else max(3, formula)
    if L < 3:
        raise PreconditionError(f"cycle cutoff must be at least 3, got {L}")
    counts = map_ordered(partial(_census_count, cfg, L), range(samples), workers=workers)
    study = CycleStudy(
        d=d,
        n=n,
        total_vertices=total,
        seed=seed,
        formula_cutoff=formula,
        cutoff=L,
        counts=tuple(counts),
        bound=math.log(total),
    )
    if study.degenerate:
        logger.info("census d=%d N=%d: formula cutoff %d raised to L=%d", d, total, formula, L)
    return study

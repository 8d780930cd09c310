"""
Pairing model for random (d, d+2)-biregular bipartite graphs.

P_X holds d(d+2)n points in (d+2)n buckets of size d, P_Y the same number of
points in dn buckets of size d+2. A uniformly random perfect matching between
them projects to a bipartite multigraph; conditioning on simplicity gives the
uniform simple (d, d+2)-biregular graph.
"""
import logging
import math
from functools import partial
from typing import Sequence

import numpy as np

from app.core.constants import SIMPLICITY_BATCH
from app.core.exceptions import GraphError, InvariantViolation, PreconditionError, RejectionCapError
from schemas.graph import Graph
from schemas.pairing import Multigraph, Pairing, PairingConfig, SimplicityStats, SimplicityTrend
from services.graph_core import build_graph
from utils.parallel import map_ordered
from utils.rng import replica_rng

logger = logging.getLogger(__name__)


def simplicity_lambda(d: int) -> float:
    return (d * d - 1) / 2


def expected_tries(d: int) -> float:
    """Mean number of pairings drawn per simple graph, e^{(d^2-1)/2}."""
    return math.exp(simplicity_lambda(d))


def _endpoints(cfg: PairingConfig, match: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # X point i sits in bucket i // d, Y point j in bucket j // (d+2)
    x_bucket = np.arange(cfg.points, dtype=np.int64) // cfg.d
    return x_bucket, match // (cfg.d + 2)


def _edge_keys(cfg: PairingConfig, match: np.ndarray) -> np.ndarray:
    x_bucket, y_bucket = _endpoints(cfg, match)
    return x_bucket * cfg.y_buckets + y_bucket


def _keys_simple(keys: np.ndarray) -> bool:
    return np.unique(keys).size == keys.size


def generate_pairing(cfg: PairingConfig, rng: np.random.Generator) -> Pairing:
    """Uniformly random perfect matching between P_X and P_Y."""
    match = rng.permutation(cfg.points)
    return Pairing(match=tuple(int(j) for j in match))


def project(p: Pairing, cfg: PairingConfig) -> Multigraph:
    """
    Bucket-level multigraph G(P) on vertices 0..|X|-1 (X buckets) and |X|.. (Y buckets).

    Raises:
        InvariantViolation: an edge lands on one vertex (loop) or outside the
            Y buckets; checked on every projection.
    """
    if len(p.match) != cfg.points:
        raise PreconditionError(
            f"pairing has {len(p.match)} points, config needs d(d+2)n = {cfg.points}"
        )
    match = np.asarray(p.match, dtype=np.int64)
    x_bucket, y_bucket = _endpoints(cfg, match)
    if np.any((y_bucket < 0) | (y_bucket >= cfg.y_buckets)):
        raise InvariantViolation("pairing sends an X point outside the Y buckets")
    loops = int(np.count_nonzero(x_bucket == cfg.x_buckets + y_bucket))
    if loops:
        raise InvariantViolation(f"projection produced {loops} loops")
    keys = x_bucket * cfg.y_buckets + y_bucket
    uniq, counts = np.unique(keys, return_counts=True)
    edges = tuple(
        (int(key // cfg.y_buckets), int(key % cfg.y_buckets), int(mult))
        for key, mult in zip(uniq, counts)
    )
    return Multigraph(d=cfg.d, x_count=cfg.x_buckets, y_count=cfg.y_buckets, edges=edges)


def is_simple(m: Multigraph) -> bool:
    return all(mult == 1 for _, _, mult in m.edges)


def multigraph_to_graph(m: Multigraph) -> Graph:
    """Labelled Graph of a simple multigraph: X buckets first, then Y buckets."""
    if not is_simple(m):
        raise GraphError("multigraph has parallel edges")
    side = ["X"] * m.x_count + ["Y"] * m.y_count
    return build_graph(m.x_count + m.y_count, [(x, m.x_count + y) for x, y, _ in m.edges], side=side)


def sample_multigraph(cfg: PairingConfig, rng: np.random.Generator) -> Multigraph:
    """Multigraph mode: one pairing projected without any simplicity filter."""
    return project(generate_pairing(cfg, rng), cfg)


def sample_simple(cfg: PairingConfig, rng: np.random.Generator) -> Graph:
    """
    Rejection-sample a uniform simple (d, d+2)-biregular graph.

    Raises:
        RejectionCapError: none of cfg.max_tries pairings was simple.
    """
    for attempt in range(1, cfg.max_tries + 1):
        match = rng.permutation(cfg.points)
        if _keys_simple(_edge_keys(cfg, match)):
            logger.debug("simple pairing found after %d tries (d=%d, n=%d)", attempt, cfg.d, cfg.n)
            pairing = Pairing(match=tuple(int(j) for j in match))
            return multigraph_to_graph(project(pairing, cfg))
    raise RejectionCapError(
        f"no simple pairing in {cfg.max_tries} tries for d={cfg.d}, n={cfg.n} "
        f"(expected about {expected_tries(cfg.d):.0f}); raise max_tries or lower d"
    )


def _count_simple(cfg: PairingConfig, trials: int, rng: np.random.Generator) -> int:
    """Simple projections among `trials` pairings, drawn in fixed-size batches."""
    x_bucket = (np.arange(cfg.points, dtype=np.int64) // cfg.d) * cfg.y_buckets
    base = np.arange(cfg.points, dtype=np.int64)
    simple = 0
    remaining = trials
    while remaining:
        batch = min(SIMPLICITY_BATCH, remaining)
        perms = rng.permuted(np.tile(base, (batch, 1)), axis=1)
        keys = x_bucket + perms // (cfg.d + 2)
        keys.sort(axis=1)
        has_parallel = (np.diff(keys, axis=1) == 0).any(axis=1)
        simple += batch - int(has_parallel.sum())
        remaining -= batch
    return simple


def simplicity_rate(cfg: PairingConfig, trials: int, rng: np.random.Generator) -> SimplicityStats:
    """Monte Carlo estimate of P(G(P) simple) next to the prediction e^{-(d^2-1)/2}."""
    if trials < 1:
        raise PreconditionError(f"trials must be at least 1, got {trials}")
    simple = _count_simple(cfg, trials, rng)
    return SimplicityStats(d=cfg.d, n=cfg.n, trials=trials, simple_count=simple, lam=simplicity_lambda(cfg.d))


def _replica_count(cfg: PairingConfig, job: tuple[int, int]) -> int:
    replica, trials = job
    return _count_simple(cfg, trials, replica_rng(cfg.seed, replica))


def simplicity_rate_replicas(
    cfg: PairingConfig,
    trials: int,
    replicas: int = 8,
    workers: int = 1,
) -> SimplicityStats:
    """
    Replica-parallel estimate. Trials are split over a fixed number of
    replicas, each with its own stream derived from (cfg.seed, replica), and
    summed in replica order, so the result does not depend on `workers`.
    """
    if trials < 1:
        raise PreconditionError(f"trials must be at least 1, got {trials}")
    replicas = max(1, min(replicas, trials))
    share, extra = divmod(trials, replicas)
    jobs = [(i, share + (1 if i < extra else 0)) for i in range(replicas)]
    counts = map_ordered(partial(_replica_count, cfg), jobs, workers=workers)
    return SimplicityStats(
        d=cfg.d, n=cfg.n, trials=trials, simple_count=sum(counts), lam=simplicity_lambda(cfg.d)
    )


def simplicity_trend(
    d: int,
    n_values: Sequence[int],
    trials: int,
    seed: int,
    workers: int = 1,
    tolerance: float = 3.0,
) -> SimplicityTrend:
    """Estimates at several n; small-n deviations are flagged in the report."""
    rows = []
    for n in n_values:
        cfg = PairingConfig(n=n, d=d, seed=seed + n)
        stats = simplicity_rate_replicas(cfg, trials, workers=workers)
        logger.info(
            "simplicity d=%d n=%d: %.5f vs %.5f (%.2f se)",
            d, n, stats.estimate, stats.predicted, stats.deviation,
        )
        rows.append(stats)
    return SimplicityTrend(d=d, tolerance=tolerance, rows=tuple(rows))

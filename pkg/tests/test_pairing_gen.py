"""Pairing model: matchings, projection, rejection sampling, simplicity rate"""
import math
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import numpy as np
import pytest

from app.core.exceptions import GraphError, InvariantViolation, PreconditionError, RejectionCapError
from schemas.pairing import Multigraph, Pairing, PairingConfig, SimplicityStats
from services import pairing_gen
from services.graph_core import validate_biregular
from services.graph_families import complete_bipartite
from services.pairing_gen import (
    expected_tries,
    generate_pairing,
    is_simple,
    multigraph_to_graph,
    project,
    sample_multigraph,
    sample_simple,
    simplicity_lambda,
    simplicity_rate,
    simplicity_rate_replicas,
    simplicity_trend,
)
from utils.rng import make_rng

CFG_31 = PairingConfig(n=1, d=3)


def _spread_pairing():
    # X point i (bucket i // 3, slot i % 3) goes to Y bucket i % 3, slot i // 3
    return Pairing(match=tuple((i % 3) * 5 + i // 3 for i in range(15)))


# ==================== pairings ====================

def test_pairing_is_a_bijection_on_15_points():
    p = generate_pairing(CFG_31, make_rng(0))
    assert len(p.match) == 15
    assert sorted(p.match) == list(range(15))


def test_same_seed_same_pairing():
    assert generate_pairing(CFG_31, make_rng(42)) == generate_pairing(CFG_31, make_rng(42))
    assert generate_pairing(CFG_31, make_rng(42)) != generate_pairing(CFG_31, make_rng(43))


def test_non_bijection_rejected():
    with pytest.raises(ValueError):
        Pairing(match=(0, 0, 1))


def test_partner_of_point_zero_is_uniform():
    rng = make_rng(7)
    draws = 10_000
    counts = np.zeros(15, dtype=int)
    for _ in range(draws):
        counts[generate_pairing(CFG_31, rng).match[0]] += 1
    p = 1 / 15
    sigma = math.sqrt(draws * p * (1 - p))
    # 4 sigma per cell keeps the 15-cell family-wise error well below 1e-3
    assert np.all(np.abs(counts - draws * p) < 4 * sigma), counts


# ==================== projection ====================

def test_identity_matching_gives_triple_edge():
    m = project(Pairing(match=tuple(range(15))), CFG_31)
    assert (0, 0, 3) in m.edges
    assert m.total_multiplicity == 15
    assert not is_simple(m)
    assert m.max_multiplicity == 3


def test_spread_matching_is_simple_k53():
    m = project(_spread_pairing(), CFG_31)
    assert is_simple(m)
    assert multigraph_to_graph(m) == complete_bipartite(5, 3)


def test_projection_keeps_bucket_degrees():
    rng = make_rng(5)
    for n in (1, 2, 4):
        cfg = PairingConfig(n=n, d=4)
        m = sample_multigraph(cfg, rng)
        assert m.total_multiplicity == cfg.points
        x_deg = [0] * m.x_count
        y_deg = [0] * m.y_count
        for x, y, mult in m.edges:
            x_deg[x] += mult
            y_deg[y] += mult
        assert set(x_deg) == {4}
        assert set(y_deg) == {6}


def test_size_mismatch_rejected():
    with pytest.raises(PreconditionError):
        project(Pairing(match=tuple(range(15))), PairingConfig(n=2, d=3))


def test_multigraph_degree_validator():
    with pytest.raises(ValueError):
        Multigraph(d=3, x_count=1, y_count=1, edges=((0, 0, 3),))


def test_multigraph_rejects_edges_outside_the_buckets():
    with pytest.raises(ValueError, match="leaves"):
        Multigraph(d=3, x_count=5, y_count=3, edges=((0, 3, 1),))


def test_every_projection_is_loop_free():
    rng = make_rng(8)
    for n in (1, 2, 3):
        cfg = PairingConfig(n=n, d=3)
        for _ in range(100):
            m = sample_multigraph(cfg, rng)
            assert all(0 <= y < m.y_count for _, y, _ in m.edges)


def test_projection_raises_on_a_loop(monkeypatch):
    # a broken bucket map that sends every X point onto the first Y vertex
    def collapsed(cfg, match):
        return np.full(cfg.points, cfg.x_buckets, dtype=np.int64), np.zeros(cfg.points, dtype=np.int64)

    monkeypatch.setattr(pairing_gen, "_endpoints", collapsed)
    with pytest.raises(InvariantViolation, match="15 loops"):
        project(_spread_pairing(), CFG_31)


def test_parallel_edges_cannot_become_a_graph():
    with pytest.raises(GraphError):
        multigraph_to_graph(project(Pairing(match=tuple(range(15))), CFG_31))


# ==================== rejection sampling ====================

def test_sample_simple_d3_n10():
    g = sample_simple(PairingConfig(n=10, d=3), make_rng(1))
    assert len(g.vertices_on("X")) == 50
    assert len(g.vertices_on("Y")) == 30
    assert validate_biregular(g, 3)


def test_sample_simple_is_seed_deterministic():
    cfg = PairingConfig(n=6, d=3, seed=99)
    assert sample_simple(cfg, make_rng(cfg.seed)) == sample_simple(cfg, make_rng(cfg.seed))


def test_rejection_cap():
    with pytest.raises(RejectionCapError, match="max_tries"):
        sample_simple(PairingConfig(n=10, d=5, max_tries=1), make_rng(3))


def test_expected_tries_d3():
    assert expected_tries(3) == pytest.approx(math.e ** 4)
    assert 54 < expected_tries(3) < 55


# ==================== simplicity statistics ====================

def test_lambda_and_prediction():
    assert simplicity_lambda(3) == 4
    stats = SimplicityStats(d=4, n=1, trials=1, simple_count=0, lam=simplicity_lambda(4))
    assert stats.predicted == pytest.approx(math.exp(-7.5))


def test_stats_json_keys():
    stats = simplicity_rate(PairingConfig(n=5, d=3), 600, make_rng(2))
    dumped = stats.model_dump(mode="json", by_alias=True)
    assert {"d", "n", "trials", "simple_count", "estimate", "lambda", "predicted"} <= set(dumped)
    assert 0.0 <= dumped["estimate"] <= 1.0


def test_trials_must_be_positive():
    with pytest.raises(PreconditionError):
        simplicity_rate(CFG_31, 0, make_rng(0))


def test_replicas_do_not_depend_on_workers():
    cfg = PairingConfig(n=5, d=3, seed=17)
    serial = simplicity_rate_replicas(cfg, 3000, replicas=4, workers=1)
    parallel = simplicity_rate_replicas(cfg, 3000, replicas=4, workers=2)
    assert serial == parallel
    assert serial.trials == 3000


def test_trend_reports_every_n():
    trend = simplicity_trend(3, [5, 20, 80], trials=4000, seed=11)
    assert [row.n for row in trend.rows] == [5, 20, 80]
    for row in trend.rows:
        assert 0.0 < row.estimate < 0.1
    # flagged rows are reported, not raised
    assert set(trend.flagged) <= {5, 20, 80}


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))

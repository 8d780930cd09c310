"""Surviving rates, the tree-growth recurrence, growth projections and the trend fit"""
import math
import sys
from fractions import Fraction
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from app.core.exceptions import PreconditionError
from schemas.analysis import RateReport, RecurrenceTrace
from schemas.pairing import PairingConfig
from services.analysis import (
    average_degree_check,
    find_tree_local,
    graph_average_degree,
    growth_projection,
    rate_trend,
    rho_exact,
    rho_monte_carlo,
    s_closed,
    s_recurrence,
    short_cycle_study,
    simulate_tree_growth,
    tree_phase_saves,
)
from services.fire_engine import play
from services.graph_families import complete_bipartite, complete_graph, path_graph, random_graph, star_graph
from services.pairing_gen import sample_simple
from services.strategies import OptimalStrategy, exact_sn, greedy_strategy, noop_strategy
from utils.rng import make_rng


# ==================== exact rates ====================

@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_path_rate(n):
    report = rho_exact(path_graph(n), 1)
    assert report.rho_exact == 1 - Fraction(2, n) + Fraction(2, n * n)
    assert report.exact


def test_p5_rate_and_per_vertex():
    report = rho_exact(path_graph(5), 1)
    assert report.rho_exact == Fraction(17, 25)
    assert report.per_vertex == (4, 3, 3, 3, 4)
    assert report.model_dump(mode="json")["rho_exact"] == "17/25"


def test_complete_graph_rate():
    assert rho_exact(complete_graph(6), 1).rho_exact == Fraction(1, 6)


def test_k2n_rate():
    for n in (3, 5):
        assert rho_exact(complete_bipartite(2, n), 1).rho_exact == Fraction(2, n + 2)


def test_star_rate():
    for m in (2, 4, 6):
        assert rho_exact(star_graph(m), 1).rho_exact == Fraction(1 + m * m, (m + 1) ** 2)


def test_rate_workers_agree():
    g = random_graph(9, 14, make_rng(21))
    assert rho_exact(g, 1, workers=1) == rho_exact(g, 1, workers=2)


def test_budget_cut_reports_lower_bound():
    rng = make_rng(22)
    g = random_graph(12, 20, rng)
    cut = rho_exact(g, 1, node_budget=1)
    full = rho_exact(g, 1)
    assert full.exact
    assert cut.rho_exact <= full.rho_exact
    assert cut.exact == all(exact_sn(g, v, 1, node_budget=1).exact for v in range(g.n))


def test_rate_report_consistency_is_validated():
    with pytest.raises(ValueError):
        RateReport(k=1, n=2, mode="exact", rho=0.5, rho_exact="1/3", per_vertex=(1, 1), strategy="exact", samples=2)


# ==================== Monte Carlo rates ====================

def test_greedy_is_exact_on_long_paths():
    g = path_graph(100)
    report = rho_monte_carlo(g, 1, greedy_strategy, ignitions=range(100))
    assert report.rho == pytest.approx(1 - 2 / 100 + 2 / 100**2)
    assert report.samples == 100
    assert not report.exact


def test_noop_strategy_saves_nothing_on_connected_graphs():
    report = rho_monte_carlo(complete_bipartite(3, 4), 2, noop_strategy, samples=50, rng=make_rng(1))
    assert report.rho == 0.0
    assert report.stderr == 0.0
    assert report.strategy == "noop_strategy"


def test_optimal_strategy_matches_exact_rate():
    g = random_graph(8, 12, make_rng(23))
    mc = rho_monte_carlo(g, 1, OptimalStrategy(), ignitions=range(g.n), strategy_name="optimal")
    assert mc.rho == pytest.approx(float(rho_exact(g, 1).rho_exact))


def test_sampled_ignitions_are_seeded():
    g = random_graph(20, 30, make_rng(24))
    a = rho_monte_carlo(g, 2, samples=40, rng=make_rng(5))
    b = rho_monte_carlo(g, 2, samples=40, rng=make_rng(5))
    assert a == b
    assert a.stderr >= 0


def test_monte_carlo_preconditions():
    with pytest.raises(PreconditionError, match="rng"):
        rho_monte_carlo(path_graph(4), 1)
    with pytest.raises(PreconditionError):
        rho_monte_carlo(path_graph(4), 1, ignitions=[])


# ==================== recurrence ====================

def test_recurrence_k2():
    trace = s_recurrence(2, 3)
    assert trace.s == (1, 1, 2, 2, 6, 10)
    assert trace.q == (1, 2, 4, 6, 12, 22)
    assert trace.normative
    assert trace.at(6) == 10


def test_closed_form_small_values():
    assert [s_closed(2, r) for r in (1, 2, 3)] == [1, 2, 10]


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_closed_form_matches_recurrence(k):
    trace = s_recurrence(k, 10)
    for r in range(1, 11):
        assert trace.at(2 * r) == s_closed(k, r)
    for r in range(1, 10):
        assert trace.at(2 * r + 1) == trace.at(2 * r) * (k + 2) - k


def test_one_firefighter_is_rejected():
    with pytest.raises(PreconditionError, match="k=1"):
        s_recurrence(1, 5)
    with pytest.raises(PreconditionError):
        s_closed(1, 1)


def test_y_root_variant():
    for k in (2, 3, 4):
        trace = s_recurrence(k, 2, ignition_side="Y")
        assert trace.s == (1, 3, 2 * k, 2 * k * (k + 2) - k)
        assert not trace.normative


def test_remaining_vertices():
    trace = s_recurrence(2, 2, n=100)
    assert trace.p == (99, 98, 96, 94)


def test_trace_requires_running_sum():
    with pytest.raises(ValueError):
        RecurrenceTrace(k=2, s=(1, 1), q=(1, 3))


# ==================== tree simulation ====================

def test_greedy_on_tree_follows_recurrence():
    fires = simulate_tree_growth(2, 6)
    assert fires[:6] == s_recurrence(2, 3).s


def test_single_firefighter_tree_alternates():
    fires = simulate_tree_growth(1, 8)
    assert fires[0] == 1
    assert fires[1:8] == (1, 2, 1, 2, 1, 2, 1)


def test_tree_local_vertex_in_sampled_graph():
    g = sample_simple(PairingConfig(n=40, d=3), make_rng(25))
    v = find_tree_local(g, 2, "X")
    assert v is not None
    assert g.side[v] == "X"
    assert play(g, v, 2, greedy_strategy).new_fire[:3] == (1, 1, 2)


# ==================== growth projection ====================

def test_growth_phases_are_ordered():
    t = growth_projection(2, 0.088, 10**6)
    assert 0 < t.tree_phase_end <= t.half_burned <= t.all_burned
    assert t.half_burned - t.tree_phase_end <= t.half_burned_bound
    assert t.saved_bound == pytest.approx(2 * 5 / 0.088 * t.all_burned)
    assert t.constants_zeroed


def test_growth_is_logarithmic():
    ratios = [growth_projection(3, 0.088, n).all_burned / math.log(n) for n in (10**3, 10**6, 10**12)]
    grow = math.log1p(0.044)
    shrink = -math.log1p(-0.088 / 12)
    assert all(r <= 1 / grow + 1 / shrink + 1 for r in ratios)


def test_growth_preconditions():
    with pytest.raises(PreconditionError):
        growth_projection(2, 0.088, 2)
    with pytest.raises(PreconditionError):
        growth_projection(2, 0.0, 100)
    with pytest.raises(PreconditionError):
        growth_projection(1, 0.088, 100)


def test_tree_phase_saves():
    assert tree_phase_saves(2, 10**6) == 6
    # exact powers of (k^2+2k)^2 sit on the boundary
    assert tree_phase_saves(2, 64) == 2
    assert tree_phase_saves(2, 63) == 0
    assert tree_phase_saves(3, 15**6) == 9
    assert tree_phase_saves(3, 15**6 - 1) == 6
    with pytest.raises(PreconditionError):
        tree_phase_saves(2, 1)


# ==================== density identities ====================

def test_average_degree_identity():
    assert average_degree_check(1) == Fraction(8, 3)
    assert average_degree_check(2) == Fraction(15, 4)
    assert average_degree_check(3) == Fraction(24, 5)


def test_sampled_graph_sits_at_tau():
    g = sample_simple(PairingConfig(n=5, d=3), make_rng(26))
    assert graph_average_degree(g, 2) == Fraction(15, 4)


# ==================== short cycles ====================

def test_cycle_study_reports_the_degenerate_cutoff():
    study = short_cycle_study(3, 50, samples=5, seed=1)
    assert study.total_vertices == 400
    assert study.formula_cutoff == 0
    assert study.degenerate
    assert study.cutoff == 3
    # bipartite graphs have no triangles
    assert study.counts == (0, 0, 0, 0, 0)
    assert study.within_bound == 1.0
    dumped = study.model_dump(mode="json")
    assert dumped["degenerate"] is True
    assert dumped["bound"] == pytest.approx(math.log(400))


def test_cycle_study_counts_four_cycles_when_asked():
    study = short_cycle_study(3, 50, samples=5, seed=2, cutoff=4)
    assert study.cutoff == 4
    assert study.degenerate
    assert max(study.counts) > 0
    # about 16 four-cycles are expected at d=3, so most vertices stay off them
    assert study.mean_count < study.total_vertices / 3


def test_cycle_study_is_seeded_and_worker_independent():
    serial = short_cycle_study(3, 10, samples=4, seed=5, cutoff=4)
    assert short_cycle_study(3, 10, samples=4, seed=5, cutoff=4, workers=2) == serial


def test_cycle_study_preconditions():
    with pytest.raises(PreconditionError):
        short_cycle_study(3, 10, samples=0)
    with pytest.raises(PreconditionError):
        short_cycle_study(3, 10, samples=1, cutoff=2)


# ==================== trend ====================

def test_rate_trend_small():
    report = rate_trend(2, 3, [5, 10], samples=40, seed=3)
    assert [row.total_vertices for row in report.rows] == [40, 80]
    assert report.c_fit > 0
    for row in report.rows:
        assert row.fitted == pytest.approx(report.c_fit * math.log(row.total_vertices) / row.total_vertices)
    assert rate_trend(2, 3, [5, 10], samples=40, seed=3) == report


def test_rate_trend_needs_sizes():
    with pytest.raises(PreconditionError):
        rate_trend(2, 3, [])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))

"""Command-line surface: reports on stdout or --out, error reports and exit statuses"""
import csv
import json
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import pytest

from app.main import main, parse_config
from services.graph_core import validate_biregular
from services.graph_families import complete_bipartite, complete_graph, path_graph, star_graph
from utils.graph_io import read_edge_list, write_edge_list


def run(capsys, *argv):
    status = main(list(argv) + ["--workers", "1"])
    out = capsys.readouterr().out
    return status, (json.loads(out) if out.strip() else None)


@pytest.fixture
def p5_file(tmp_path):
    return str(write_edge_list(path_graph(5), tmp_path / "p5.txt"))


# ==================== parsing ====================

def test_parse_config_defaults():
    cfg, level = parse_config(["recur", "--k", "2", "--seed", "5"])
    assert cfg.command == "recur"
    assert cfg.seed == 5
    assert cfg.rmax == 10
    assert level


def test_sizes_are_split():
    cfg, _ = parse_config(["trend", "--k", "2", "--sizes", "20,40, 80"])
    assert cfg.sizes == (20, 40, 80)


def test_unknown_flag_exits_with_config_status(capsys):
    status, report = run(capsys, "rate", "--bogus", "1")
    assert status == 2
    assert report["error"]["code"] == "config"


def test_missing_required_flag(capsys):
    status, report = run(capsys, "solve", "--k", "1")
    assert status == 2
    assert "--graph" in report["error"]["message"]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert capsys.readouterr().out.strip() == "1.0.0"


# ==================== commands ====================

def test_gen_writes_graph_and_sidecar(tmp_path, capsys):
    out = tmp_path / "g.txt"
    status, report = run(capsys, "gen", "--d", "3", "--n", "5", "--out", str(out), "--seed", "7")
    assert status == 0
    assert report is None
    g = read_edge_list(out)
    assert validate_biregular(g, 3)
    sidecar = json.loads((tmp_path / "g.txt.json").read_text(encoding="utf-8"))
    assert sidecar["result"]["vertices"] == 40
    assert sidecar["result"]["biregular"] is True
    assert sidecar["provenance"]["seed"] == 7


def test_rate_exact_on_p5(p5_file, capsys):
    status, report = run(capsys, "rate", "--graph", p5_file, "--k", "1", "--seed", "1")
    assert status == 0
    assert report["result"]["rate"]["rho_exact"] == "17/25"
    assert report["provenance"]["command"] == "rate"
    assert "wall_time_s" in report["metadata"]


def test_solve_single_vertex(p5_file, capsys):
    status, report = run(capsys, "solve", "--graph", p5_file, "--k", "1", "--vertex", "2", "--seed", "1")
    assert status == 0
    (result,) = report["result"]["results"]
    assert result["sn"] == 3
    assert report["result"]["all_exact"] is True


def test_monte_carlo_rate_is_reproducible(p5_file, capsys):
    argv = ("rate", "--graph", p5_file, "--k", "1", "--mode", "monte-carlo", "--samples", "30", "--seed", "9")
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first["result"] == second["result"]
    assert first["provenance"] == second["provenance"]
    assert first["result"]["rate"]["mode"] == "monte-carlo"


def test_classify_reports_bound_and_density_failure(tmp_path, capsys):
    star = str(write_edge_list(star_graph(3), tmp_path / "star.txt"))
    status, report = run(capsys, "classify", "--graph", star, "--k", "2", "--eps", "9/4", "--seed", "1")
    assert status == 0
    assert report["result"]["bound"]["holds"] is True
    assert report["result"]["classification"]["v2"] == [0]

    k4 = str(write_edge_list(complete_graph(4), tmp_path / "k4.txt"))
    status, report = run(capsys, "classify", "--graph", k4, "--k", "1", "--eps", "1/100", "--seed", "1")
    assert status == 0
    assert report["result"]["bound_error"]["code"] == "density_precondition"


def test_scan_eps_writes_csv(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    status, _ = run(capsys, "scan-eps", "--d", "3", "--which", "f", "--out", str(out), "--seed", "1")
    assert status == 0
    with out.open(encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["eps", "sup_rate"]
    assert len(rows) == 1000
    sidecar = json.loads((tmp_path / "scan.csv.json").read_text(encoding="utf-8"))
    assert sidecar["result"]["scan"]["eps_star"] == pytest.approx(0.28)


def test_recur(capsys):
    status, report = run(capsys, "recur", "--k", "2", "--rmax", "3", "--n", "1000", "--seed", "1")
    assert status == 0
    result = report["result"]
    assert result["trace"]["s"] == [1, 1, 2, 2, 6, 10]
    assert result["closed_even"] == ["1", "2", "10"]
    assert result["timeline"]["constants_zeroed"] is True


def test_recur_rejects_one_firefighter(capsys):
    status, report = run(capsys, "recur", "--k", "1", "--seed", "1")
    assert status == 1
    assert report["error"]["code"] == "precondition"


def test_negative_seed_is_a_config_error(capsys):
    status, report = run(capsys, "recur", "--k", "2", "--seed", "-1")
    assert status == 2
    assert report["error"]["code"] == "config"
    assert "seed" in report["error"]["message"]


def test_trend_degree_below_three_is_a_config_error(capsys):
    status, report = run(capsys, "trend", "--k", "1", "--sizes", "5", "--seed", "1")
    assert status == 2
    assert report["error"]["code"] == "config"
    assert "d >= 3" in report["error"]["message"]
    cfg, _ = parse_config(["trend", "--k", "1", "--d", "3", "--sizes", "5"])
    assert cfg.trend_degree == 3


def test_census_reports_the_raised_cutoff(capsys):
    status, report = run(capsys, "census", "--d", "3", "--n", "10", "--samples", "3", "--seed", "2")
    assert status == 0
    census = report["result"]["census"]
    assert census["formula_cutoff"] == 0
    assert census["cutoff"] == 3
    assert census["degenerate"] is True
    assert census["counts"] == [0, 0, 0]


def test_census_cutoff_below_three_is_a_config_error(capsys):
    status, report = run(capsys, "census", "--d", "3", "--n", "10", "--cutoff", "2")
    assert status == 2
    assert report["error"]["code"] == "config"


def test_expand_reports_its_parameters(tmp_path, capsys):
    k53 = str(write_edge_list(complete_bipartite(5, 3), tmp_path / "k53.txt"))
    status, report = run(capsys, "expand", "--graph", k53, "--d", "3", "--samples", "50", "--seed", "1")
    assert status == 0
    params = report["result"]["params"]
    assert params["eps"] == "237/1000"
    assert params["eps_prime"] == "11/125"
    assert report["result"]["ok"] is True
    assert report["result"]["joint_constants"]["holds"] is True


def test_expand_rejects_eps_too_small_for_the_joint_constant(tmp_path, capsys):
    k53 = str(write_edge_list(complete_bipartite(5, 3), tmp_path / "k53.txt"))
    status, report = run(capsys, "expand", "--graph", k53, "--d", "3", "--eps", "1/10", "--seed", "1")
    assert status == 2
    assert report["error"]["code"] == "config"
    assert "--eps" in report["error"]["message"]


def test_malformed_graph_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0\n", encoding="utf-8")
    status, report = run(capsys, "rate", "--graph", str(bad), "--k", "1", "--seed", "1")
    assert status == 1
    assert report["error"]["code"] == "graph_format"
    assert report["error"]["message"].startswith("line 2:")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))

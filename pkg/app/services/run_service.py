"""Command dispatch: one handler per CLI command"""
import logging
from pathlib import Path
from typing import Callable, Optional

from app.core.config import MAX_TRIES
from app.core.constants import EPS_JOINT
from app.core.exceptions import PreconditionError
from schemas.pairing import PairingConfig
from schemas.run import RunConfig
from services import analysis, discharging, expansion, pairing_gen, strategies
from services.graph_core import validate_biregular
from utils.graph_io import read_edge_list, write_edge_list
from utils.report_utils import sidecar_json, write_csv
from utils.rng import make_rng

logger = logging.getLogger(__name__)


class RunService:
    """Runs one RunConfig and returns the result block of its report"""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.rng = make_rng(cfg.seed)
        # Where the JSON report goes; None means stdout
        self.report_path: Optional[Path] = cfg.out_path
        self.artifacts: list[str] = []

    def execute(self) -> dict:
        handlers: dict[str, Callable[[], dict]] = {
            "gen": self._gen,
            "solve": self._solve,
            "rate": self._rate,
            "classify": self._classify,
            "expand": self._expand,
            "recur": self._recur,
            "simplicity": self._simplicity,
            "scan-eps": self._scan_eps,
            "trend": self._trend,
            "census": self._census,
        }
        logger.info("running %s (seed=%d)", self.cfg.command, self.cfg.seed)
        result = handlers[self.cfg.command]()
        if self.artifacts:
            result["artifacts"] = self.artifacts
        return result

    def _graph(self):
        return read_edge_list(self.cfg.graph_path)

    # ==================== Generation ====================

    def _gen(self) -> dict:
        cfg = self.cfg
        pairing_cfg = PairingConfig(n=cfg.n, d=cfg.d, seed=cfg.seed, max_tries=MAX_TRIES)
        g = pairing_gen.sample_simple(pairing_cfg, self.rng)
        self.artifacts.append(str(write_edge_list(g, cfg.out_path)))
        self.report_path = sidecar_json(cfg.out_path)
        return {
            "n": cfg.n,
            "d": cfg.d,
            "vertices": g.n,
            "edges": g.edge_count,
            "x_count": len(g.vertices_on("X")),
            "y_count": len(g.vertices_on("Y")),
            "biregular": validate_biregular(g, cfg.d),
        }

    def _simplicity(self) -> dict:
        cfg = self.cfg
        pairing_cfg = PairingConfig(n=cfg.n, d=cfg.d, seed=cfg.seed, max_tries=MAX_TRIES)
        stats = pairing_gen.simplicity_rate_replicas(pairing_cfg, cfg.trials, workers=cfg.workers)
        return {"simplicity": stats, "deviation_se": stats.deviation}

    # ==================== Solving and rates ====================

    def _solve(self) -> dict:
        cfg = self.cfg
        g = self._graph()
        vertices = [cfg.vertex] if cfg.vertex is not None else range(g.n)
        results = [strategies.exact_sn(g, v, cfg.k, cfg.budget) for v in vertices]
        return {"results": results, "all_exact": all(r.exact for r in results)}

    def _rate(self) -> dict:
        cfg = self.cfg
        g = self._graph()
        if cfg.mode == "exact":
            report = analysis.rho_exact(g, cfg.k, cfg.budget, workers=cfg.workers)
        else:
            report = analysis.rho_monte_carlo(
                g,
                cfg.k,
                strategies.greedy_strategy,
                cfg.mc_samples,
                self.rng,
                workers=cfg.workers,
                strategy_name="greedy",
            )
        return {"rate": report}

    # ==================== Density argument ====================

    def _classify(self) -> dict:
        cfg = self.cfg
        g = self._graph()
        result = {"classification": discharging.bound_report(g, cfg.k, cfg.eps)}
        if cfg.eps is not None:
            try:
                result["bound"] = discharging.verify_bound(g, cfg.k, cfg.eps)
            except PreconditionError as e:
                # the classes are still reported when the density condition fails
                result["bound_error"] = e.to_dict()
        result["rho_lower_bound"] = discharging.rho_lower_bound(cfg.k, cfg.eps) if cfg.eps is not None else None
        return result

    # ==================== Expansion ====================

    def _expand(self) -> dict:
        cfg = self.cfg
        g = self._graph()
        params = cfg.expansion_params
        samples = cfg.subset_samples
        reports = {
            "Y": expansion.check_side_expansion(g, params.d, params.eps, samples=samples, rng=self.rng, side="Y"),
            "X": expansion.check_side_expansion(g, params.d, params.eps, samples=samples, rng=self.rng, side="X"),
            "joint": expansion.check_joint_expansion(g, params.eps_prime, samples=samples, rng=self.rng),
        }
        return {
            "params": params,
            "expansion": reports,
            "ok": all(r.ok for r in reports.values()),
            "joint_constants": expansion.verify_joint_constants(params.d, params.eps, params.eps_prime),
        }

    def _scan_eps(self) -> dict:
        cfg = self.cfg
        scan = expansion.scan_eps(cfg.d, cfg.which)
        if cfg.out_path is not None:
            self.artifacts.append(str(write_csv(cfg.out_path, ("eps", "sup_rate"), scan.rows)))
            self.report_path = sidecar_json(cfg.out_path)
        return {"scan": scan.model_dump(mode="json", exclude={"rows"})}

    # ==================== Fire growth ====================

    def _recur(self) -> dict:
        cfg = self.cfg
        trace = analysis.s_recurrence(cfg.k, cfg.rmax, n=cfg.n)
        closed = [analysis.s_closed(cfg.k, r) for r in range(1, cfg.rmax + 1)]
        result = {"trace": trace, "closed_even": closed}
        if cfg.n is not None and cfg.n > 2:
            eps_prime = float(cfg.eps) if cfg.eps is not None else float(EPS_JOINT)
            result["timeline"] = analysis.growth_projection(cfg.k, eps_prime, cfg.n)
        return result

    def _trend(self) -> dict:
        cfg = self.cfg
        report = analysis.rate_trend(cfg.k, cfg.trend_degree, cfg.sizes, cfg.mc_samples, cfg.seed, workers=cfg.workers)
        if cfg.out_path is not None:
            rows = [(r.n, r.total_vertices, r.rho_estimate, r.stderr, r.c_fit) for r in report.rows]
            header = ("n", "total_vertices", "rho_estimate", "stderr", "c_fit")
            self.artifacts.append(str(write_csv(cfg.out_path, header, rows)))
            self.report_path = sidecar_json(cfg.out_path)
        return {
            "trend": report,
            "positive": report.positive,
            "decreasing": report.decreasing,
            "max_residual": report.max_residual,
        }

    def _census(self) -> dict:
        cfg = self.cfg
        study = analysis.short_cycle_study(
            cfg.d, cfg.n, cfg.census_samples, cfg.seed, cutoff=cfg.cutoff, workers=cfg.workers
        )
        return {"census": study}

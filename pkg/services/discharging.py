"""
Density argument for k firefighters: classify V1/V2/V3, move weight from
high-degree vertices to degree-(k+1) vertices, and check the counting bound.

All arithmetic is exact (fractions.Fraction); no floats in this module.
"""
import logging
from fractions import Fraction
from typing import Optional, Union

from app.core.exceptions import DensityPreconditionError, InvariantViolation, PreconditionError
from schemas.discharging import BoundVerdict, ClassificationReport
from schemas.graph import Graph
from utils.rational import to_fraction

logger = logging.getLogger(__name__)

RationalLike = Union[Fraction, int, str]


def tau(k: int) -> Fraction:
    """Density threshold tau_k = (k+2) - 1/(k+2)."""
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")
    return Fraction(k + 2) - Fraction(1, k + 2)


def classify(g: Graph, k: int) -> ClassificationReport:
    """
    V1: degree <= k.
    V2: degree k+1 with a neighbour of degree <= k+1.
    V3: degree k+1, not in V2, next to some w of degree k+2 that has at
        least two neighbours of degree k+1.
    """
    t = tau(k)
    deg = g.degrees
    v1 = [v for v in range(g.n) if deg[v] <= k]
    v2 = [
        v for v in range(g.n)
        if deg[v] == k + 1 and any(deg[u] <= k + 1 for u in g.adjacency[v])
    ]
    in_v2 = set(v2)
    hubs = {
        w for w in range(g.n)
        if deg[w] == k + 2 and sum(1 for u in g.adjacency[w] if deg[u] == k + 1) >= 2
    }
    v3 = [
        v for v in range(g.n)
        if deg[v] == k + 1 and v not in in_v2 and any(w in hubs for w in g.adjacency[v])
    ]
    return ClassificationReport(
        k=k,
        n=g.n,
        tau=t,
        v1=tuple(v1),
        v2=tuple(v2),
        v3=tuple(v3),
        omega=deg,
        bound_lhs=len(v1) + len(v2) + len(v3),
    )


def class_of(report: ClassificationReport, v: int) -> Optional[str]:
    if v in report.v1:
        return "V1"
    if v in report.v2:
        return "V2"
    if v in report.v3:
        return "V3"
    return None


def discharge(g: Graph, k: int) -> ClassificationReport:
    """
    Every vertex of degree >= k+2 outside V1 u V2 u V3 gives 1/(k+2) to each
    neighbour of degree k+1 outside V1 u V2 u V3. Checks, for each vertex v
    outside the classes: deg k+1 -> omega' = tau_k, deg k+2 -> omega' >= tau_k,
    deg >= k+3 -> omega' >= (k+3)(k+1)/(k+2) >= tau_k.

    Raises:
        InvariantViolation: one of the inequalities fails.
    """
    report = classify(g, k)
    t = report.tau
    deg = g.degrees
    share = Fraction(1, k + 2)
    classified = report.classified

    weight = [Fraction(d) for d in deg]
    transfers = []
    boundary = Fraction(0)
    for v in range(g.n):
        if deg[v] < k + 2:
            continue
        for u in g.adjacency[v]:
            if deg[u] != k + 1 or u in classified:
                continue
            weight[v] -= share
            weight[u] += share
            transfers.append((v, u))
            # givers of degree >= k+2 are never classified; kept explicit for the ledger
            if v in classified:
                boundary += share

    for v in range(g.n):
        if v in classified:
            continue
        if deg[v] == k + 1 and weight[v] != t:
            raise InvariantViolation(f"vertex {v} of degree {k + 1} ends with {weight[v]}, expected {t}")
        if deg[v] >= k + 2 and weight[v] < t:
            raise InvariantViolation(f"vertex {v} of degree {deg[v]} ends with {weight[v]} < {t}")
        if deg[v] >= k + 3 and weight[v] < Fraction((k + 3) * (k + 1), k + 2):
            raise InvariantViolation(f"vertex {v} of degree {deg[v]} lost more than deg/(k+2)")

    rest_before = sum(Fraction(deg[v]) for v in range(g.n) if v not in classified)
    rest_after = sum(weight[v] for v in range(g.n) if v not in classified)
    if rest_before != rest_after + boundary:
        raise InvariantViolation("weight not conserved on the unclassified vertices")

    logger.debug("discharge k=%d: %d transfers, %d unclassified", k, len(transfers), g.n - len(classified))
    return report.model_copy(
        update={
            "omega_prime": tuple(weight),
            "transfers": tuple(transfers),
            "boundary_transfer": boundary,
        }
    )


def verify_bound(g: Graph, k: int, eps: RationalLike) -> BoundVerdict:
    """
    Check |V1 u V2 u V3| >= eps*n/tau_k for a graph with 2m/n <= tau_k - eps.

    Raises:
        DensityPreconditionError: the density condition fails.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    if g.n == 0:
        raise PreconditionError("the bound needs at least one vertex")
    t = tau(k)
    density = Fraction(2 * g.edge_count, g.n)
    if density > t - eps:
        raise DensityPreconditionError(
            f"density 2m/n = {density} exceeds tau_{k} - eps = {t - eps}"
        )
    report = classify(g, k)
    rhs = eps * g.n / t
    holds = report.bound_lhs >= rhs
    if not holds:
        logger.error("class bound failed: %d < %s (k=%d, eps=%s, n=%d)", report.bound_lhs, rhs, k, eps, g.n)
    return BoundVerdict(
        k=k, n=g.n, eps=eps, tau=t, density=density, lhs=report.bound_lhs, rhs=rhs, holds=holds
    )


def bound_report(g: Graph, k: int, eps: Optional[RationalLike] = None) -> ClassificationReport:
    """Discharged report; with eps, also fills bound_rhs (density is not enforced here)."""
    report = discharge(g, k)
    if eps is None:
        return report
    eps = to_fraction(eps)
    return report.model_copy(update={"eps": eps, "bound_rhs": eps * g.n / report.tau})


def rho_lower_bound(k: int, eps: RationalLike) -> Fraction:
    """Guaranteed surviving rate 2*eps / (5*tau_k) below the density threshold."""
    eps = to_fraction(eps)
    if eps <= 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    return 2 * eps / (5 * tau(k))

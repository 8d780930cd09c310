"""
Expansion of random (d, d+2)-biregular graphs: the rate functions f and g
whose sub-unit values make one-side expansion hold a.a.s., a scan for the
largest admissible eps, the exact case constants of the joint bound, and
checkers that look for violating sets on concrete graphs.
"""
import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import Callable, Literal, Optional, Sequence, Union

import numpy as np

from app.core.constants import (
    DEFAULT_EXACT_MAX,
    DEFAULT_SAMPLES,
    ENUMERATION_CAP,
    EPS_JOINT,
    EPS_ONE_SIDE,
    MIN_SCAN_GRID,
)
from app.core.exceptions import DomainError, GraphError, PreconditionError
from schemas.expansion import EpsScan, ExpansionReport, JointConstants, Violation
from schemas.graph import Graph
from services.graph_core import validate_biregular
from utils.bitset import mask_of, popcount, union_of
from utils.rational import to_fraction

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]
MAX_REPORTED_VIOLATIONS = 1000


# ==================== Rate functions ====================

def _check_domain(c: float, eps: float, d: int) -> None:
    if not 0 < c <= 0.5:
        raise DomainError(f"c must lie in (0, 1/2], got {c}")
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if d < 3:
        raise DomainError(f"d must be at least 3, got {d}")
    if c * (1 + eps) >= 1:
        raise DomainError(f"c(1+eps) = {c * (1 + eps)} must stay below 1")


def log_f_rate(c: Number, eps: Number, d: int) -> Number:
    """Natural log of f(c, eps, d); vectorised over c and eps."""
    m = c * (1 + eps)
    return (
        c * d * (d + 1 - (d + 2) / d * (1 + eps)) * np.log(c)
        + (1 + eps) * c * d * (d + 2) * (1 - 1 / d) * np.log1p(eps)
        - eps * c * d * (d + 2) * np.log(eps)
        + d * (d + 1) * (1 - c) * np.log1p(-c)
        - (d + 2) * (1 - m) * np.log1p(-m)
    )


def log_g_rate(c: Number, eps: Number, d: int) -> Number:
    """Natural log of g(c, eps, d); vectorised over c and eps."""
    m = c * (1 + eps)
    return (
        c * (d + 2) * (d - 1 - d / (d + 2) * (1 + eps)) * np.log(c)
        + (1 + eps) * c * d * (d + 2) * (1 - 1 / (d + 2)) * np.log1p(eps)
        - eps * c * d * (d + 2) * np.log(eps)
        + (d - 1) * (d + 2) * (1 - c) * np.log1p(-c)
        - d * (1 - m) * np.log1p(-m)
    )


def _f_product(c: float, eps: float, d: int) -> float:
    m = c * (1 + eps)
    return (
        c ** (c * d * (d + 1 - (d + 2) / d * (1 + eps)))
        * (1 + eps) ** ((1 + eps) * c * d * (d + 2) * (1 - 1 / d))
        * eps ** (-eps * c * d * (d + 2))
        * (1 - c) ** (d * (d + 1) * (1 - c))
        * (1 - m) ** (-(d + 2) * (1 - m))
    )


def _g_product(c: float, eps: float, d: int) -> float:
    m = c * (1 + eps)
    return (
        c ** (c * (d + 2) * (d - 1 - d / (d + 2) * (1 + eps)))
        * (1 + eps) ** ((1 + eps) * c * d * (d + 2) * (1 - 1 / (d + 2)))
        * eps ** (-eps * c * d * (d + 2))
        * (1 - c) ** ((d - 1) * (d + 2) * (1 - c))
        * (1 - m) ** (-d * (1 - m))
    )


def f_rate(c: float, eps: float, d: int, log_domain: bool = True) -> float:
    """
    f(c, eps, d): base of the exponential bound on the expected number of
    Y-side sets K with too small a neighbourhood, for |K| ~ c*d*n.
    """
    c, eps = float(c), float(eps)
    _check_domain(c, eps, d)
    if log_domain:
        return float(math.exp(log_f_rate(c, eps, d)))
    return _f_product(c, eps, d)


def g_rate(c: float, eps: float, d: int, log_domain: bool = True) -> float:
    """g(c, eps, d): the X-side counterpart of f_rate, for |K| ~ c*(d+2)*n."""
    c, eps = float(c), float(eps)
    _check_domain(c, eps, d)
    if log_domain:
        return float(math.exp(log_g_rate(c, eps, d)))
    return _g_product(c, eps, d)


def scan_eps(d: int, which: Literal["f", "g"], c_grid: int = MIN_SCAN_GRID, eps_grid: int = MIN_SCAN_GRID) -> EpsScan:
    """
    Largest eps on the grid {i/eps_grid} for which the rate stays below 1 on
    the whole c grid {j/(2 c_grid)}, together with the maximising c.
    """
    if c_grid < MIN_SCAN_GRID or eps_grid < MIN_SCAN_GRID:
        raise PreconditionError(f"scan grids need at least {MIN_SCAN_GRID} points")
    if d < 3:
        raise PreconditionError(f"d must be at least 3, got {d}")
    rate = {"f": log_f_rate, "g": log_g_rate}[which]

    c = np.arange(1, c_grid + 1, dtype=float) / (2 * c_grid)
    eps = np.arange(1, eps_grid, dtype=float) / eps_grid
    table = rate(c[None, :], eps[:, None], d)
    sup_log = table.max(axis=1)
    arg = table.argmax(axis=1)

    admissible = np.flatnonzero(sup_log < 0)
    rows = tuple((float(e), float(math.exp(s))) for e, s in zip(eps, sup_log))
    if admissible.size == 0:
        logger.info("scan_eps d=%d %s: no admissible eps on the grid", d, which)
        return EpsScan(d=d, which=which, c_grid=c_grid, eps_grid=eps_grid, eps_star=None, rows=rows)

    i = int(admissible[-1])
    logger.info("scan_eps d=%d %s: eps* = %.4f at c = %.4f", d, which, eps[i], c[arg[i]])
    return EpsScan(
        d=d,
        which=which,
        c_grid=c_grid,
        eps_grid=eps_grid,
        eps_star=float(eps[i]),
        argmax_c=float(c[arg[i]]),
        sup_rate=float(math.exp(sup_log[i])),
        rows=rows,
    )


# ==================== Joint expansion constants ====================

def joint_case_bounds(d: int, eps) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """
    Lower bounds on |N[K]|/|K| in the four cases of the joint argument:
    1) X points dominate, K_X at most half of X
    2) K_X more than half of X
    3) Y points dominate, K_Y at most half of Y
    4) K_Y more than half of Y
    """
    eps = to_fraction(eps)
    a = Fraction(d, d + 2)
    b = Fraction(d + 2, d)
    return (
        (1 + (1 + eps) * a) / (1 + a),
        ((1 + eps / 2) * d + 1) / (d + 1),
        (1 + (1 + eps) * b) / (1 + b),
        ((1 + eps / 2) * d + 1 + eps) / (d + 1),
    )


def verify_joint_constants(d: int = 3, eps=EPS_ONE_SIDE, eps_prime=EPS_JOINT) -> JointConstants:
    """Every case ratio is at least 1 + 3/8 eps, and eps' < 3/8 eps."""
    eps = to_fraction(eps)
    eps_prime = to_fraction(eps_prime)
    cases = joint_case_bounds(d, eps)
    target = 1 + Fraction(3, 8) * eps
    margin = Fraction(3, 8) * eps - eps_prime
    holds = all(case >= target for case in cases) and margin > 0
    return JointConstants(
        d=d, eps=eps, eps_prime=eps_prime, cases=cases, target=target, eps_prime_margin=margin, holds=holds
    )


# ==================== Concrete-graph checkers ====================

def _size_classes(lo: int, hi: int, count: int = 12) -> list[int]:
    """Log-spaced integer sizes in [lo, hi]."""
    if lo > hi:
        return []
    sizes = np.unique(np.rint(np.geomspace(lo, hi, num=min(count, hi - lo + 1))).astype(int))
    return [int(s) for s in sizes]


def _check_sets(
    g: Graph,
    label: str,
    pool: Sequence[int],
    max_size: int,
    required: Callable[[int], int],
    eps: Fraction,
    exact_max: int,
    samples: int,
    rng: Optional[np.random.Generator],
) -> ExpansionReport:
    masks = g.masks
    pool = list(pool)
    found: set[tuple[int, ...]] = set()
    checked, sampled = [], []
    subsets = 0

    def test(members: Sequence[int], need: int) -> None:
        kmask = 0
        nbhd = 0
        for v in members:
            kmask |= 1 << v
            nbhd |= masks[v]
        if popcount(nbhd & ~kmask) < need:
            found.add(tuple(sorted(members)))

    def sample(size: int) -> int:
        if rng is None:
            raise PreconditionError(f"size {size} needs sampling but no rng was given")
        need = required(size)
        for _ in range(samples):
            row = rng.choice(len(pool), size=size, replace=False)
            test([pool[i] for i in row], need)
        return samples

    for size in range(1, min(exact_max, max_size) + 1):
        if math.comb(len(pool), size) <= ENUMERATION_CAP:
            need = required(size)
            for members in combinations(pool, size):
                test(members, need)
                subsets += 1
            checked.append(size)
        else:
            subsets += sample(size)
            sampled.append(size)

    for size in _size_classes(exact_max + 1, max_size):
        subsets += sample(size)
        sampled.append(size)

    ordered = sorted(found, key=lambda K: (len(K), K))
    violations = []
    for K in ordered[:MAX_REPORTED_VIOLATIONS]:
        kmask = mask_of(K)
        nbhd = popcount(union_of(masks, kmask) & ~kmask)
        violations.append(Violation(subset=K, neighbourhood=nbhd, required=required(len(K))))

    if ordered:
        logger.info("%s expansion: %d violating sets", label, len(ordered))
    return ExpansionReport(
        side=label,
        eps=eps,
        max_size=max_size,
        checked_sizes=tuple(checked),
        sampled_sizes=tuple(sampled),
        subsets_checked=subsets,
        violation_count=len(ordered),
        violations=tuple(violations),
    )


def check_side_expansion(
    g: Graph,
    d: int,
    eps=EPS_ONE_SIDE,
    exact_max: int = DEFAULT_EXACT_MAX,
    samples: int = DEFAULT_SAMPLES,
    rng: Optional[np.random.Generator] = None,
    side: Literal["Y", "X"] = "Y",
) -> ExpansionReport:
    """
    One-side expansion: every K inside one part with |K| <= half the part has
    |N(K)| >= ceil(|K| (d+2)/d (1+eps)) for K in Y, or
    ceil(|K| d/(d+2) (1+eps)) for K in X.
    """
    if g.side is None:
        raise PreconditionError("expansion checks need side labels")
    if not validate_biregular(g, d):
        raise PreconditionError(f"graph is not ({d},{d + 2})-biregular")
    eps = to_fraction(eps)
    ratio = Fraction(d + 2, d) if side == "Y" else Fraction(d, d + 2)
    pool = g.vertices_on(side)
    return _check_sets(
        g,
        side,
        pool,
        len(pool) // 2,
        lambda k: math.ceil(k * ratio * (1 + eps)),
        eps,
        exact_max,
        samples,
        rng,
    )


def check_joint_expansion(
    g: Graph,
    eps_prime=EPS_JOINT,
    exact_max: int = DEFAULT_EXACT_MAX,
    samples: int = DEFAULT_SAMPLES,
    rng: Optional[np.random.Generator] = None,
) -> ExpansionReport:
    """Joint expansion: every K with |K| <= n/2 has |N(K)| >= ceil(eps' |K|)."""
    if g.side is None:
        raise PreconditionError("expansion checks need side labels")
    eps_prime = to_fraction(eps_prime)
    return _check_sets(
        g,
        "joint",
        range(g.n),
        g.n // 2,
        lambda k: math.ceil(eps_prime * k),
        eps_prime,
        exact_max,
        samples,
        rng,
    )


def recheck_violation(g: Graph, violation: Violation) -> bool:
    """Recompute |N(K)| from the graph and confirm it is below the requirement."""
    members = violation.subset
    if any(not 0 <= v < g.n for v in members):
        raise GraphError(f"violation set {members} does not fit the graph")
    kmask = mask_of(members)
    nbhd = popcount(union_of(g.masks, kmask) & ~kmask)
    return nbhd == violation.neighbourhood and nbhd < violation.required



"""Global constants"""
from fractions import Fraction

VERSION = "1.0.0"

# CLI commands
COMMANDS = (
    "gen",
    "solve",
    "rate",
    "classify",
    "expand",
    "recur",
    "simplicity",
    "scan-eps",
    "trend",
    "census",
)

# Rejection sampling cap for simple biregular graphs
DEFAULT_MAX_TRIES = 10_000

# Exact solver
DEFAULT_NODE_BUDGET = 10_000_000
BRUTE_FORCE_MAX_N = 10

# Expansion checks
DEFAULT_EXACT_MAX = 8
DEFAULT_SAMPLES = 10_000
# Above this many subsets a size class is sampled even when <= exact_max
ENUMERATION_CAP = 250_000
MIN_SCAN_GRID = 1000

# One-side and joint expansion constants
EPS_ONE_SIDE = Fraction("0.237")
EPS_JOINT = Fraction("0.088")
DEFAULT_C = Fraction(1, 2)

# Simplicity sampling batch size (fixed so results do not depend on workers)
SIMPLICITY_BATCH = 512

# Monte Carlo
DEFAULT_MC_SAMPLES = 200
DEFAULT_TRIALS = 20_000
DEFAULT_CENSUS_SAMPLES = 20

"""
Configuration constants for Ricci Topology.
All constants and defaults are defined here to avoid hardcoding values elsewhere.
"""

import logging
import os
from fractions import Fraction

__version__ = "1.0.0"

# --- Curvature Config ---
# Mass kept at the node itself; the rest is spread evenly over its neighbors
DEFAULT_ALPHA = Fraction(1, 2)
ALPHA_SWEEP = [Fraction(k, 10) for k in range(1, 10)]

# Edges are only ever compared against supports inside the 1-balls of both
# endpoints, so three hops reach every support pair
SUPPORT_BFS_DEPTH = 3

# Curvature values written to CSV use fixed-point decimals
KAPPA_DIGITS = 9
KAPPA_MIN = Fraction(-2)
KAPPA_MAX = Fraction(1)
ZERO_BAND = 1e-9

# --- Transport Config ---
# Largest common denominator the brute-force assignment oracle will expand
ORACLE_MAX_SCALE = 10_000

# --- Experiment Config ---
HISTOGRAM_BIN_WIDTH = 0.1
EARTH_RADIUS_KM = 6371.0
ROBUSTNESS_CHECKPOINT = 0.2
BENCH_REPEATS = 3

# --- Hyperbolicity Config ---
HYPERBOLICITY_EXACT_CAP = int(os.getenv('RICCI_HYPERBOLICITY_CAP', '200'))
HYPERBOLICITY_SAMPLES = 100_000

# --- Model Network Battery ---
GNP_PARAMS = {'n': 1000, 'p': 0.01}
WATTS_STROGATZ_PARAMS = {'n': 1000, 'k': 8, 'beta': 0.5}
RANDOM_REGULAR_PARAMS = {'n': 1000, 'd': 8}
PREFERENTIAL_ATTACHMENT_PARAMS = {'n': 1000, 'k': 2}
# Power-law stand-in for a ~900-node router-level degree sequence
CONFIGURATION_PARAMS = {'n': 895, 'gamma': 2.3, 'k_min': 2, 'k_max': 70}
HYPERBOLIC_GRID_PARAMS = {'rings': 6, 'max_nodes': 848}
HYPERBOLIC_GRID_DEGREE = 7

# --- Runtime Config ---
DEFAULT_SEED = 42
DEFAULT_WORKERS = max(1, int(os.getenv('RICCI_WORKERS', '1')))
DEFAULT_OUTPUT_DIR = "results"
LOG_LEVEL = os.getenv('RICCI_LOG_LEVEL', 'WARNING')

# --- Exit Codes ---
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def setup_logging(level: str = LOG_LEVEL) -> None:
    """Configure the package-wide stream handler."""
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

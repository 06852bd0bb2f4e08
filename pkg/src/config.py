"""
Configuration and Constants
============================
Centralized configuration for the coded shuffle simulator.
"""

from fractions import Fraction
from pathlib import Path

# ============================================================================
# PATHS
# ============================================================================

PROJECT_ROOT = Path(__file__).parent.parent
OUTPUT_DIR = PROJECT_ROOT / "outputs"

# ============================================================================
# FINITE FIELD
# ============================================================================

SUPPORTED_FIELD_WIDTHS = (8, 16)
DEFAULT_FIELD_WIDTH = 16

# Bit-exact reducing polynomials so payloads replay across implementations
REDUCING_POLYNOMIALS = {
    8: 0x11D,     # x^8 + x^4 + x^3 + x^2 + 1
    16: 0x1100B,  # x^16 + x^12 + x^3 + x + 1
}

# Little-endian unsigned dtype used when matrices are serialized
FIELD_DTYPES = {
    8: '<u1',
    16: '<u2',
}

# ============================================================================
# WORKED EXAMPLE (K=6 servers, q=4 non-stragglers)
# ============================================================================

EXAMPLE_K = 6
EXAMPLE_Q = 4
EXAMPLE_MU = Fraction(1, 2)
EXAMPLE_M = 20
EXAMPLE_N = 12
EXAMPLE_NON_STRAGGLERS = (1, 2, 3, 4)

# (l, r2) with r1 = l / q
EXAMPLE_PROPOSED_RATES = (4, 3)
EXAMPLE_BASELINE_RATES = (6, 2)

EXAMPLE_PROPOSED_MESSAGES = 76
EXAMPLE_BASELINE_MESSAGES = 84
EXAMPLE_PROPOSED_LOAD = Fraction(19, 5)
EXAMPLE_BASELINE_LOAD = Fraction(21, 5)
EXAMPLE_PROPOSED_PHASE_COUNTS = {3: 4, 2: 36, 1: 36}
EXAMPLE_LATENCY = 11.7

# ============================================================================
# SIMULATION DEFAULTS
# ============================================================================

DEFAULT_SEED = 2024
DEFAULT_INNER_DIMENSION = 8
DEFAULT_TRIALS = 0  # 0 = analytic latency only
SIGNIFICANT_DIGITS = 12

# ============================================================================
# CLI EXIT CODES
# ============================================================================

EXIT_OK = 0
EXIT_INVALID_ARGUMENTS = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFICATION_FAILED = 4

# ============================================================================
# ARTIFACT FILENAMES
# ============================================================================

TRADEOFF_FILENAME = "tradeoff_curve"
FEASIBLE_FILENAME = "feasible_rates"
LATENCY_FILENAME = "latency_table"
RUN_REPORT_FILENAME = "run_report.json"

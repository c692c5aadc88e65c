# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""Global constants"""

# Common exit codes
SUCCESS_EXIT_CODE = 0
ERROR_EXIT_CODE = 1
BRACKET_FAILURE_EXIT_CODE = 2
FAILED_CHECK_EXIT_CODE = 3

# Environment variables
THREADS_ENV = "DISORDER_STOP_THREADS"
DEBUG_ENV = "DISORDER_STOP_DEBUG"
CONFIG_ENV = "DISORDER_STOP_CONFIG"

# Problem kinds
LINEAR = "linear"
GEOMETRIC = "geometric"
LOG_UTILITY = "log-utility"

# Solver defaults
DEFAULT_GRID_STEPS = 200
DEFAULT_SOLVE_PATHS = 20_000
DEFAULT_VALUE_PATHS = 200_000
DEFAULT_SEED = 42
BLOCK_SIZE = 4096

BISECTION_TOL = 1e-4
MAX_DOUBLINGS = 60
ZERO_ROOT_TOL = 1e-8
SCAN_POINTS = 16

# Fraction of paths allowed to overflow before a run fails
MAX_DROP_FRACTION = 1e-4

# Acceptance width in standard errors
SIGMA_TOL = 3.0

# Boundary CSV columns
CSV_TIME = "t"
CSV_LEVEL = "a"
CSV_POSTERIOR = "pi"

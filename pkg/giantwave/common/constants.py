import math
import os

# General
PRODUCT = 'giantwave'
VERSION = '0.3.0'

# Logging
LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()

# Integrator
DEFAULT_STEPS_PER_TAU0 = int(os.environ.get("GIANTWAVE_STEPS_PER_TAU0", "200"))
MIN_STEPS_PER_TAU0 = 50
REFERENCE_STEPS_PER_TAU0 = 6400
TOL_INT = 1e-8

# Ensembles
ENSEMBLE_CHUNK = int(os.environ.get("GIANTWAVE_ENSEMBLE_CHUNK", "50"))
WORKERS = int(os.environ.get("GIANTWAVE_WORKERS", "4"))

# Spectral
TOL_COND = 1e-6
MODE_RESIDUAL_TOL = 1e-9
POLE_RESIDUAL_TOL = 1e-10
POLE_DEDUP_DISTANCE = 1e-6
POLE_REAL_TOL = 1e-10
NEWTON_MAX_ITER = 60
SERIES_SWITCH = 0.5
SEARCH_DEPTH_GAMMA = 3.0
SEARCH_HALF_WIDTH = 6 * math.pi
SEARCH_GRID = 60
SCAN_MARGIN = 4 * math.pi

# Rotating-wave validity
RWA_LIMIT = 0.1

# Field
DEFAULT_DX = 1.0 / 50

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

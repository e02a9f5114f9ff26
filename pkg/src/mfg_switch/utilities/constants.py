TIE_RELATIVE_TOL = 1e-9
RESOLUTION_TOL = 1e-6
COEFFICIENT_SUM_TOL = 1e-12
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 10_000
DEFAULT_MAX_PATHS = 10_000
DEFAULT_MAX_TARGETS = 10
DEFAULT_GRID_POINTS = 256
DEFAULT_EARLINESS_RATE = 1.0
DEFAULT_MISS_PENALTY = 10.0
DEFAULT_WEIGHT = 1.0
DEFAULT_MONOTONICITY_TRIALS = 100_000
DEFAULT_POLISH_WINDOW = 25
BLOWUP_THRESHOLD = 1e3
BLOWUP_GAP_FRACTION = 1e-6
REPORT_FILE = "report.json"
VALUE_FILE = "value.csv"
ARGMIN_FILE = "argmin.csv"
MASS_FILE = "mass.csv"
PLAN_FILE = "plan.json"
PLOT_FILE = "plot.csv"

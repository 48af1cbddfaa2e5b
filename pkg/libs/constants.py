SETTING_SAMPLES_PER_UNIT = 'harness/samplesPerUnit'
SETTING_WORKERS = 'harness/workers'
SETTING_MERGE_GAP = 'solver/mergeGap'
SETTING_LAST_OUT_DIR = 'lastOutDir'
SETTING_KEYS = (SETTING_SAMPLES_PER_UNIT, SETTING_WORKERS, SETTING_MERGE_GAP, SETTING_LAST_OUT_DIR)

DEFAULT_ENCODING = 'utf-8'

# Tolerances
RADICAND_TOL = 1e-12
NOISE_FACTOR = 64.0
SLOPE_TOL = 1e-12
TIME_MERGE_TOL = 1e-12
NODE_MERGE_TOL = 1e-13
MONOTONE_TOL = 1e-12
BISECTION_WIDTH = 1e-14
BOUNDARY_TOL = 1e-10
ATOM_LENGTH_TOL = 1e-10
SC_LENGTH_TOL = 1e-6
DERIVATIVE_STEP = 1e-7
DERIVATIVE_THRESHOLD = 0.5

# Solver defaults
MAX_ITERATIONS = 50
DEFAULT_GAP_FACTOR = 0.0
EX42_GAP_FACTOR = 2.0
DEFAULT_SAMPLES = 1000

# Harness defaults
DEFAULT_SAMPLES_PER_UNIT = 64
MAX_EVENT_SAMPLES = 256
DEFAULT_KMIN = 1
DEFAULT_KMAX = 7
DEFAULT_T = 3.0
CUSP_DX_REF = 1e-5
CUSP_DX_REF_FAST = 4.0 ** -8
FLOOR_MARGIN = 0.02

BUILTIN_EX41 = 'ex41'
BUILTIN_EX42 = 'ex42'
BUILTIN_CUSP = 'cusp'
BUILTIN_CANTOR = 'cantor'
BUILTIN_DATA = (BUILTIN_EX41, BUILTIN_EX42, BUILTIN_CUSP, BUILTIN_CANTOR)

BUILTIN_ALPHA1 = 'alpha1'
BUILTIN_ALPHA2 = 'alpha2'
BUILTIN_ALPHA_EX42 = 'ex42'
BUILTIN_ALPHA_CUSP = 'cusp'
BUILTIN_ALPHAS = (BUILTIN_ALPHA1, BUILTIN_ALPHA2, BUILTIN_ALPHA_EX42, BUILTIN_ALPHA_CUSP)

REFERENCE_EXACT = 'exact'
REFERENCE_FINE = 'fine'

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NON_CONTRACTION = 3
EXIT_BOUND_VIOLATION = 4

JSON_EXT = '.json'
CSV_EXT = '.csv'
REPORT_CSV = 'report.csv'
REPORT_JSON = 'report.json'
LOGLOG_DAT = 'loglog.dat'
REPORT_COLUMNS = ('k', 'dx', 'err', 'eoc', 'wall_ms')
FLOAT_FORMAT = '%.17g'

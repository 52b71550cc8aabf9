APP_VERSION = "0.1.0"

# dimension of the realized problem
SPATIAL_DIMENSION = 1

# grid
MIN_GRID_NODES = 16
MARGIN_BAND_CELLS = 2
MARGIN_ATOL = 1e-13

# normalization constant cross-check
NORMALIZATION_QUADRATURE_RTOL = 1e-6

# whole-line correction of the periodized Fourier oracle
PERIODIC_IMAGE_COUNT = 4

# singular assembly quadrature
FAR_FIELD_GAUSS_ORDER = 8
NEAR_FIELD_JACOBI_ORDER = 8
NEAR_FIELD_LEGENDRE_ORDER = 16
EDGE_JACOBI_ORDER = 12
NEAR_FIELD_ELEMENT_RADIUS = 1
DEFAULT_ASSEMBLY_WORKERS = 1
DEFAULT_BLOCK_ENTRIES = 2_000_000

# solver
SOLVER_RESIDUAL_RTOL = 1e-10
SYMMETRY_RTOL = 1e-12

# geometry
EPSILON_SAFETY_FACTOR = 0.9
EPSILON_DILATION_COUNT = 5
OMEGA_MIN_GAP = 1e-6
CONTAINMENT_SLACK = 1e-9

# counterexample construction
INTERMEDIATE_DILATION = 2.5
CUTOFF_INDICATOR_DILATION = 2.5
CUTOFF_INNER_DILATION = 2.0
CUTOFF_OUTER_DILATION = 3.0
SCALED_SOLVE_DILATION = 2.0
SCALED_BOUND = 0.5
UNIT_BALL_MEASURE = 2.0
POSITIVITY_RTOL = 1e-8
SCALED_BOUND_SLACK = 1e-12
FAMILY_LOWER_BOUND = 1e-3
DEFAULT_RESOLUTIONS = (256, 512, 1024, 2048)
MONOTONICITY_FACTOR = 2.0
DEFAULT_STUDY_WORKERS = 1

# export
CSV_SIGNIFICANT_DIGITS = 17
STIFFNESS_MAGIC = b"FRACSTIF"

# PyRegMean Constants
version = "1.0.0"
versiondate = "2026.10.17"

# generator_core
ROUNDTRIP_TOL = 1e-9
BISECTION_TOL = 1e-12
BISECTION_MAX_ITER = 200
LIPSCHITZ_GRID = 10001
SLOPE_TOL = 1e-14

# asymptotics
QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 500
# a flagged QUADPACK result is still kept when its error estimate is below this (relative)
QUAD_ACCEPT_REL = 1e-9
MONTE_CARLO_MOMENT_SAMPLES = 1000000
# "skewness" uses gamma^2 on the third Edgeworth term, "kurtosis" the kappa^2 variant
EDGEWORTH_THIRD_TERM = "skewness"

# regular_mean
AXIOM_TOL = 1e-9
AXIOM_EPSILON_FRACTION = 1e-4

# stability
STABILITY_REL_SLACK = 1e-6
STABILITY_ABS_SLACK = 1e-12

# output
CSV_FLOAT_FORMAT = "%.17g"
PARETO_SCALE_NOTE = "Pareto scale x_m defaults to 1 (standard Pareto) when not given."

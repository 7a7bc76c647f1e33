"""Numerical tolerances used throughout the package.

Dimensions are capped at desk scale (<= 64), so conditioning stays benign
and the tolerances can be tight enough to catch construction bugs rather
than paper over them.
"""

# Operator identities (hermiticity, idempotence, commutators).
TOL_OP = 1e-9

# Vector norms.
TOL_NORM = 1e-12

# Probability arithmetic (trace values, witness components).
TOL_PROB = 1e-9

# Linear-programming feasibility and certificate reconstruction.
TOL_LP = 1e-8

# Residual allowed when snapping a trace value to a small rational.
TOL_RAT = 1e-9

# Largest denominator considered when snapping traces to rationals.
RATIONAL_MAX_DEN = 2**16

# Singular values above this fraction of the largest one count toward the
# rank of a span; scale-relative so unnormalized spans survive.
RANK_RTOL = 1e-10

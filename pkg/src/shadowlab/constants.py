"""Numerical tolerances shared across the package.

Every geometric sign test is relative: a threshold is multiplied by the
magnitude of the data it is applied to.
"""

# planar hull: cross products below HULL_TOL * scale**2 count as collinear
HULL_TOL = 1e-9

# Frame2 orthonormality
FRAME_TOL = 1e-12

# LP: phase-1 objective below this certifies feasibility
LP_FEAS_TOL = 1e-9
LP_PIVOT_TOL = 1e-11
LP_MAX_ITER = 1_000_000

# vertex deduplication (absolute)
DEDUP_TOL = 1e-12

# normal-fan arcs
ARC_PAD = 1e-12

# nonzero coordinate threshold for standard-form parameters
NONZERO_TOL = 1e-12

# cone membership in ray coordinates
CONE_TOL = 1e-12

# rank decisions for affine hulls
RANK_TOL = 1e-9

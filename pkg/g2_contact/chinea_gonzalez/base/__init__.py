from .constraints import (
    ambient,
    apply_phi,
    c12,
    c12_bar,
    CLASS_RESIDUALS,
    constraint_matrix,
    DIMENSION,
    max_residual,
    N_HALF,
    XI
)

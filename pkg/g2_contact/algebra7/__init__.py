from .cross_product import (
    cross,
    cross_product_matrix,
    dense_three_form,
    double_cross_check,
    four_term_check,
    inner,
    inverse_metric,
    metric_from_three_form,
    model_three_form,
    MODEL_MONOMIALS,
    three_form_bilinear,
    ThreeFormLike
)
from .forms import DIMENSION, index_combinations, interior, KForm7, permutation_sign, pullback, volume_form, wedge

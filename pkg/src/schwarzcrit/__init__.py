"""Schwarzian-derivative sufficiency criteria for univalence, starlikeness and convexity.

Submodules:

``series``      truncated complex power series
``schwarzian``  Schwarzian derivative as a series, pointwise, and its boundary supremum
``ode``         fundamental solutions of y'' + A y = 0 and Gronwall-type bounds
``criteria``    the (eta, delta) criteria and their thresholds delta*(eta)
``verifier``    grid checks of the geometric conclusions, random test functions
``cli``         batch command line
"""

__version__ = "0.1.0"

from .criteria import (
    CriterionKind,
    CriterionParams,
    CriterionResult,
    PGammaMode,
    convexity_order,
    delta_threshold,
    eta_root_combo,
    evaluate_criterion,
)
from .grid import GridSpec
from .ode import discrete_gronwall_check, gronwall_bounds, picard_uv_ray, reconstruct_f, solve_uv_series
from .schwarzian import schwarzian_at, schwarzian_series, sup_schwarzian
from .series import PowerSeries, dilate, series_add, series_derive, series_div, series_eval, series_mul
from .verifier import (
    ExprKind,
    eval_expr,
    max_abs_arg,
    min_real,
    random_budgeted_function,
    univalence_grid_check,
)

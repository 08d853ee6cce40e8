"""Plotting positions for QQ-plots, with the losses, games and comparisons behind them."""

import types as _types

from .beta_core import (
    DEFAULT_SOLVER,
    BetaParams,
    OrderStatIndex,
    SolverConfig,
    beta_cdf,
    beta_median_bisection,
    beta_pdf,
    beta_quantile_newton,
    beta_quantile_newton_many,
    binomial_tail_sum,
    order_stat_cdf,
    tail_median_closed_form,
)
from .compare import (
    CheckResult,
    ComparisonReport,
    GapSign,
    TableCell,
    comparison_report,
    figure1_data,
    non_invariance_demo,
    payton_gap_bound,
    reproduce_table1,
    tail_ratio_limit,
    tail_ratios,
)
from .distributions import Beta, Exponential, Normal, Transformed, Uniform, monotone_map, parse_dist
from .errors import DomainError, SolverError
from .games import (
    GameReport,
    GameSpec,
    order_stat_sampler,
    simulate,
    simulate_game1,
    simulate_game2,
    simulate_game3,
    simulate_game4,
)
from .loss import epl_curve, epl_minimizer, expected_pl, fpl, pl_invariance_check, probability_loss
from .positions import (
    PIV,
    ApproxConstantA,
    BetaMedianCran,
    BetaMedianExact,
    Erto,
    Kerman,
    LogEOver2,
    Weibull,
    approx_piv,
    beta_median_piv,
    erto_shift,
    method_from_name,
    piv_for,
    weibull_piv,
)

__all__ = [
    name
    for name, value in list(globals().items())
    if not name.startswith("_") and not isinstance(value, _types.ModuleType)
]

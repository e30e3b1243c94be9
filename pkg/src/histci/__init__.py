"""histci: quantile point and confidence-interval estimation when only
grouped (binned) data is available.

Four estimation methods produce a quantile and a density estimate from
bins and frequencies -- histogram interpolation, linear interpolation
from bin means (with optional exponential tail), frequency polygon, and
a percentile-matched Generalized Lambda Distribution -- which feed
large-sample confidence intervals for single quantiles and for
differences of quantiles across two independent groups.  A seeded
Monte-Carlo harness measures the empirical coverage of those intervals.
"""

from .distributions import (
    BinningPolicy,
    Dagum,
    Distribution,
    Exponential,
    LogNormal,
    Normal,
    NormalMixture,
    SinghMaddala,
    bin_sample,
    distribution_from_config,
    sample,
    true_quantile,
)
from .errors import EstimationError, HistciError, ValidationError
from .gld import (
    FIT_PERCENTILES,
    FitConfig,
    FitReport,
    GldParams,
    empirical_percentiles,
    fit_percentile_matching,
    gld_density_at_p,
    gld_estimate,
    gld_quantile,
    gld_quantile_density,
)
from .grouped import (
    Bin,
    CumulativeTable,
    GroupedData,
    cumulative,
    from_csv,
    from_json_dict,
    locate_bin,
    merge_zero_bins,
    to_csv,
    to_json_dict,
)
from .intervals import ConfidenceInterval, ci_difference, ci_single, z_quantile
from .methods import estimate_quantile, make_evaluator
from .piecewise import (
    ExponentialTail,
    LinearSegment,
    Method,
    PiecewiseLinearDensity,
    QuantileEstimate,
    fp_fit,
    fp_quantile,
    hist_estimate,
    li_fit,
    li_quantile,
)
from .simulate import SimCell, SimResult, TableRow, coverage_curve, results_csv, run_cell, run_table

__version__ = "0.1.0"

__all__ = [
    "Bin",
    "BinningPolicy",
    "ConfidenceInterval",
    "CumulativeTable",
    "Dagum",
    "Distribution",
    "EstimationError",
    "Exponential",
    "ExponentialTail",
    "FIT_PERCENTILES",
    "FitConfig",
    "FitReport",
    "GldParams",
    "GroupedData",
    "HistciError",
    "LinearSegment",
    "LogNormal",
    "Method",
    "Normal",
    "NormalMixture",
    "PiecewiseLinearDensity",
    "QuantileEstimate",
    "SimCell",
    "SimResult",
    "SinghMaddala",
    "TableRow",
    "ValidationError",
    "bin_sample",
    "ci_difference",
    "ci_single",
    "coverage_curve",
    "cumulative",
    "distribution_from_config",
    "empirical_percentiles",
    "estimate_quantile",
    "fit_percentile_matching",
    "fp_fit",
    "fp_quantile",
    "from_csv",
    "from_json_dict",
    "gld_density_at_p",
    "gld_estimate",
    "gld_quantile",
    "gld_quantile_density",
    "hist_estimate",
    "li_fit",
    "li_quantile",
    "locate_bin",
    "make_evaluator",
    "merge_zero_bins",
    "results_csv",
    "run_cell",
    "run_table",
    "sample",
    "to_csv",
    "to_json_dict",
    "true_quantile",
    "z_quantile",
]

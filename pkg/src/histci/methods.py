"""Uniform dispatch over the four quantile estimation methods.

``make_evaluator`` does any per-dataset work (density fitting, GLD
parameter estimation, cumulative tables) once and returns a callable
that evaluates many p values cheaply; ``estimate_quantile`` is the
one-shot convenience wrapper.
"""

from __future__ import annotations

from typing import Callable

from .errors import ValidationError
from .gld import FitConfig, fit_percentile_matching, gld_density_at_p, gld_quantile
from .grouped import GroupedData, cumulative, merge_zero_bins
from .piecewise import (
    Method,
    QuantileEstimate,
    _hist_at,
    fp_fit,
    fp_quantile,
    li_fit,
    li_quantile,
)

__all__ = ["make_evaluator", "estimate_quantile"]


def make_evaluator(
    gd: GroupedData,
    method: Method,
    *,
    unbounded_tail: bool = False,
    fit_config: FitConfig | None = None,
) -> Callable[[float], QuantileEstimate]:
    """Prepare the method once for ``gd`` and return p -> estimate."""
    method = Method(method)
    gd = merge_zero_bins(gd)
    if method is Method.HISTOGRAM:
        cum = cumulative(gd)
        return lambda p: _hist_at(gd, cum, float(p))
    if method is Method.LINEAR_INTERPOLATION:
        density = li_fit(gd, unbounded_tail)
        cum = cumulative(gd)
        return lambda p: li_quantile(density, cum, p)
    if method is Method.FREQUENCY_POLYGON:
        density = fp_fit(gd)
        return lambda p: fp_quantile(density, p)
    if method is Method.GLD:
        report = fit_percentile_matching(gd, fit_config)

        def evaluate(p: float) -> QuantileEstimate:
            x = gld_quantile(report.params, p)
            f = gld_density_at_p(report.params, p)
            return QuantileEstimate(p, x, f, Method.GLD)

        return evaluate
    raise ValidationError(f"unsupported method {method!r}")


def estimate_quantile(
    gd: GroupedData,
    method: Method,
    p: float,
    *,
    unbounded_tail: bool = False,
    fit_config: FitConfig | None = None,
) -> QuantileEstimate:
    """Estimate a single quantile (and its density) with one method."""
    evaluator = make_evaluator(gd, method, unbounded_tail=unbounded_tail, fit_config=fit_config)
    return evaluator(p)

"""Generalized Lambda Distribution (FKML form) evaluation and
percentile-matching fit from grouped data.

The FKML quantile function is

    Q(p) = lambda + (1/eta) * [ (p^alpha - 1)/alpha - ((1-p)^beta - 1)/beta ]

with location ``lambda``, inverse scale ``eta > 0`` and shape parameters
``alpha``, ``beta`` (logarithmic limits as either shape tends to zero).
Fitting minimizes the squared mismatch between Q and empirical
percentiles interpolated from the histogram at the five levels
10/25/50/75/90%, using box-constrained L-BFGS-B with central finite
differences, multi-started over a small grid of shape values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import EstimationError, ValidationError
from .grouped import GroupedData
from .piecewise import Method, QuantileEstimate, hist_estimate

__all__ = [
    "FIT_PERCENTILES",
    "GldParams",
    "FitConfig",
    "FitReport",
    "gld_quantile",
    "gld_quantile_density",
    "gld_density_at_p",
    "empirical_percentiles",
    "fit_percentile_matching",
    "gld_estimate",
]

FIT_PERCENTILES = (0.10, 0.25, 0.50, 0.75, 0.90)

# Below this magnitude a shape parameter is evaluated by its log limit.
_SHAPE_EPS = 1e-8


@dataclass(frozen=True)
class GldParams:
    """FKML parameter quadruple (location, inverse scale, two shapes)."""

    lmbda: float
    eta: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("lmbda", "eta", "alpha", "beta"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise ValidationError(f"parameter {name} must be finite, got {value!r}")
        if not self.eta > 0:
            raise ValidationError(f"inverse scale eta must be positive, got {self.eta!r}")
        if self.alpha == 0.0 or self.beta == 0.0:
            raise ValidationError(
                "shape parameters must be nonzero; pass a tiny value to get the log limit"
            )

    def to_json_dict(self) -> dict:
        return {"lambda": self.lmbda, "eta": self.eta, "alpha": self.alpha, "beta": self.beta}


def _q_raw(lmbda: float, eta: float, alpha: float, beta: float, p: float) -> float:
    if abs(alpha) < _SHAPE_EPS:
        term_a = math.log(p)
    else:
        term_a = (p**alpha - 1.0) / alpha
    if abs(beta) < _SHAPE_EPS:
        term_b = math.log1p(-p)
    else:
        term_b = ((1.0 - p) ** beta - 1.0) / beta
    return lmbda + (term_a - term_b) / eta


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must be inside (0, 1), got {p!r}")
    return p


def gld_quantile(params: GldParams, p: float) -> float:
    """Q(p) for 0 < p < 1."""
    return _q_raw(params.lmbda, params.eta, params.alpha, params.beta, _check_p(p))


def gld_quantile_density(params: GldParams, p: float) -> float:
    """The quantile density q(p) = Q'(p) = (p^(a-1) + (1-p)^(b-1)) / eta."""
    p = _check_p(p)
    return (p ** (params.alpha - 1.0) + (1.0 - p) ** (params.beta - 1.0)) / params.eta


def gld_density_at_p(params: GldParams, p: float) -> float:
    """Density at the p-th quantile, f(Q(p)) = 1/q(p)."""
    q = gld_quantile_density(params, p)
    if not (math.isfinite(q) and q > 0):
        raise EstimationError(
            f"quantile density is not positive and finite at p={p!r} for parameters "
            f"{params.to_json_dict()!r}"
        )
    return 1.0 / q


def empirical_percentiles(gd: GroupedData) -> tuple[tuple[float, float], ...]:
    """The five (p, x_hat) pairs interpolated from the histogram."""
    return tuple((p, hist_estimate(gd, p).x_hat) for p in FIT_PERCENTILES)


_DEFAULT_SHAPE_STARTS = tuple(
    (a0, b0) for a0 in (0.1, 0.5, 1.0) for b0 in (0.1, 0.5, 1.0)
)


@dataclass(frozen=True)
class FitConfig:
    """Tunables for the percentile-matching fit; all have sane defaults.

    ``tol`` is the convergence threshold on the residual sum of squares;
    when None it defaults to 1e-8 times the squared 10-90 percentile
    spread of the data being fitted.
    """

    tol: float | None = None
    max_iterations: int = 200
    shape_starts: tuple[tuple[float, float], ...] = _DEFAULT_SHAPE_STARTS
    eta_bounds: tuple[float, float] = (1e-6, 1e6)
    alpha_bounds: tuple[float, float] = (-1.5, 5.0)
    beta_bounds: tuple[float, float] = (-1.5, 5.0)

    def __post_init__(self):
        object.__setattr__(
            self, "shape_starts", tuple((float(a), float(b)) for a, b in self.shape_starts)
        )
        if self.tol is not None and not self.tol > 0:
            raise ValidationError("tol must be positive")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not self.shape_starts:
            raise ValidationError("at least one shape start is required")

    @classmethod
    def from_dict(cls, doc: dict) -> "FitConfig":
        known = {"tol", "max_iterations", "starts", "eta_bounds", "alpha_bounds", "beta_bounds"}
        unknown = set(doc) - known
        if unknown:
            raise ValidationError(f"unknown fit config key(s): {sorted(unknown)}")
        kwargs = {}
        if "tol" in doc:
            kwargs["tol"] = doc["tol"]
        if "max_iterations" in doc:
            kwargs["max_iterations"] = int(doc["max_iterations"])
        if "starts" in doc:
            kwargs["shape_starts"] = tuple(tuple(pair) for pair in doc["starts"])
        for key in ("eta_bounds", "alpha_bounds", "beta_bounds"):
            if key in doc:
                kwargs[key] = tuple(doc[key])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "tol": self.tol,
            "max_iterations": self.max_iterations,
            "starts": [list(pair) for pair in self.shape_starts],
            "eta_bounds": list(self.eta_bounds),
            "alpha_bounds": list(self.alpha_bounds),
            "beta_bounds": list(self.beta_bounds),
        }


@dataclass(frozen=True)
class FitReport:
    """Outcome of a percentile-matching fit."""

    params: GldParams
    residual: float
    iterations: int
    converged: bool
    matched_percentiles: tuple[tuple[float, float], ...]

    def to_json_dict(self) -> dict:
        return {
            "params": self.params.to_json_dict(),
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "matched_percentiles": [[p, x] for p, x in self.matched_percentiles],
        }


def fit_percentile_matching(gd: GroupedData, config: FitConfig | None = None) -> FitReport:
    """Fit FKML parameters by least squares on the five percentile
    matching equations (the system is overdetermined, so exact matching
    is generally impossible).

    Raises a non-convergence error carrying the best report when no
    start converges and the best residual exceeds 1e-2 times the squared
    percentile spread.
    """
    config = config or FitConfig()
    if len(gd.bins) < 2:
        raise EstimationError(
            "percentile matching needs at least two distinct bins; "
            "a single bin makes the matched percentiles collinear"
        )
    pts = empirical_percentiles(gd)
    xs = [x for _, x in pts]
    spread = xs[-1] - xs[0]
    if not spread > 0:
        raise EstimationError("degenerate data: 10th and 90th percentiles coincide")
    tol = config.tol if config.tol is not None else 1e-8 * spread**2

    ps = FIT_PERCENTILES

    def objective(theta) -> float:
        l, e, a, b = map(float, theta)
        return sum((_q_raw(l, e, a, b, p) - x) ** 2 for p, x in zip(ps, xs))

    lmbda0 = xs[2]
    eta0 = min(max(2.0 / spread, config.eta_bounds[0]), config.eta_bounds[1])
    bounds = [(None, None), config.eta_bounds, config.alpha_bounds, config.beta_bounds]

    best = None
    best_grad = math.inf
    iterations = 0
    for a0, b0 in config.shape_starts:
        res = minimize(
            objective,
            np.array([lmbda0, eta0, a0, b0]),
            method="L-BFGS-B",
            jac="3-point",
            bounds=bounds,
            options={"maxiter": config.max_iterations, "ftol": 1e-15, "gtol": 1e-12},
        )
        iterations += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
            best_grad = float(np.max(np.abs(res.jac)))

    theta = best.x
    alpha = theta[2] if theta[2] != 0.0 else _SHAPE_EPS * 1e-4
    beta = theta[3] if theta[3] != 0.0 else _SHAPE_EPS * 1e-4
    params = GldParams(theta[0], theta[1], alpha, beta)
    _reject_non_monotone(params)
    residual = float(best.fun)
    converged = residual < tol or best_grad < 1e-10
    report = FitReport(params, residual, iterations, converged, pts)
    if not converged and residual > 1e-2 * spread**2:
        raise EstimationError(
            f"percentile matching did not converge: best residual {residual!r} "
            f"against spread^2 {spread**2!r}",
            report=report,
        )
    return report


def _reject_non_monotone(params: GldParams) -> None:
    """A valid fit must have a strictly increasing quantile function."""
    grid = [i / 100.0 for i in range(1, 100)]
    values = [gld_quantile(params, p) for p in grid]
    for a, b in zip(values, values[1:]):
        if not b >= a:
            raise EstimationError(
                f"fitted parameters produce a non-monotone quantile function: "
                f"{params.to_json_dict()!r}"
            )


def gld_estimate(gd: GroupedData, p: float, config: FitConfig | None = None) -> QuantileEstimate:
    """Fit once, then evaluate the fitted quantile and density at p."""
    p = _check_p(p)
    report = fit_percentile_matching(gd, config)
    x = gld_quantile(report.params, p)
    f = gld_density_at_p(report.params, p)
    return QuantileEstimate(p, x, f, Method.GLD)

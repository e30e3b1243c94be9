"""Confidence intervals for quantile estimates.

Single-sample intervals take the form

    x_hat +/- z * sqrt(p(1-p) / (n * f_hat^2))

and the two-independent-sample difference interval adds the per-group
variance terms under the square root.  The standard-normal inverse is
computed locally (rational approximation plus one Newton polish against
an erfc-based CDF) so the numeric contract does not depend on any
library's ppf implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc as _erfc

from .errors import ValidationError
from .piecewise import Method, QuantileEstimate

__all__ = ["ConfidenceInterval", "z_quantile", "ci_single", "ci_difference"]

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation for the lower tail / central region.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _norm_ppf_lower(q):
    """Vectorized inverse normal CDF for q in (0, 0.5], polished once.

    Both the approximation and the Newton step stay in the lower tail,
    where Phi(x) = erfc(-x/sqrt(2))/2 evaluates without cancellation.
    """
    q = np.asarray(q, dtype=float)
    with np.errstate(all="ignore"):
        # Tail branch, q < _P_LOW.
        u = np.sqrt(-2.0 * np.log(np.where(q > 0, q, 0.5)))
        num_t = ((((_C[0] * u + _C[1]) * u + _C[2]) * u + _C[3]) * u + _C[4]) * u + _C[5]
        den_t = (((_D[0] * u + _D[1]) * u + _D[2]) * u + _D[3]) * u + 1.0
        x_tail = num_t / den_t
        # Central branch, _P_LOW <= q <= 0.5.
        r = q - 0.5
        s = r * r
        num_c = ((((_A[0] * s + _A[1]) * s + _A[2]) * s + _A[3]) * s + _A[4]) * s + _A[5]
        den_c = ((((_B[0] * s + _B[1]) * s + _B[2]) * s + _B[3]) * s + _B[4]) * s + 1.0
        x = np.where(q < _P_LOW, x_tail, r * num_c / den_c)
        # One Newton step: x <- x - (Phi(x) - q)/phi(x).
        cdf = 0.5 * _erfc(-x / _SQRT2)
        pdf = np.exp(-0.5 * x * x) / _SQRT_2PI
        x = x - (cdf - q) / pdf
    return x


def _norm_ppf(q):
    """Vectorized inverse normal CDF on (0, 1).

    Arguments above 0.5 are reflected through 1-q, which is exact for
    q >= 0.5, so the result is antisymmetric to the last bit.
    """
    q = np.asarray(q, dtype=float)
    q_low = np.where(q > 0.5, 1.0 - q, q)
    x = _norm_ppf_lower(q_low)
    return np.where(q > 0.5, -x, x)


def z_quantile(q: float) -> float:
    """Standard normal quantile z with Phi(z) = q, for q in (0, 1)."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValidationError(f"normal quantile level must be inside (0, 1), got {q!r}")
    return float(_norm_ppf(q))


@dataclass(frozen=True)
class ConfidenceInterval:
    """A two-sided interval around a point estimate."""

    lower: float
    upper: float
    level: float
    point: float
    method: Method

    def __post_init__(self):
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        object.__setattr__(self, "level", float(self.level))
        object.__setattr__(self, "point", float(self.point))
        if not 0.0 < self.level < 1.0:
            raise ValidationError(f"confidence level must be inside (0, 1), got {self.level!r}")
        if not self.lower <= self.point <= self.upper:
            raise ValidationError("interval must contain its point estimate")
        if not self.upper - self.lower > 0:
            raise ValidationError("interval width must be positive")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_json_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "level": self.level,
            "point": self.point,
            "method": self.method.value,
        }


def _check_level(level: float) -> float:
    level = float(level)
    if not 0.0 < level < 1.0:
        raise ValidationError(f"confidence level must be inside (0, 1), got {level!r}")
    return level


def ci_single(est: QuantileEstimate, n: float, level: float = 0.95) -> ConfidenceInterval:
    """Large-sample interval for a single quantile estimate from a sample
    of size ``n``."""
    level = _check_level(level)
    if not n >= 1:
        raise ValidationError(f"sample size must be >= 1, got {n!r}")
    if not est.f_hat > 0:
        raise ValidationError("density estimate must be positive")
    z = z_quantile(0.5 * (1.0 + level))
    half = z * math.sqrt(est.p * (1.0 - est.p)) / (math.sqrt(n) * est.f_hat)
    return ConfidenceInterval(est.x_hat - half, est.x_hat + half, level, est.x_hat, est.method)


def ci_difference(
    est_x: QuantileEstimate,
    n: float,
    est_y: QuantileEstimate,
    m: float,
    level: float = 0.95,
) -> ConfidenceInterval:
    """Interval for the difference x_p - y_p between the same quantile of
    two independent groups with sizes ``n`` and ``m``."""
    level = _check_level(level)
    if est_x.p != est_y.p:
        raise ValidationError(
            f"both estimates must target the same p (got {est_x.p!r} and {est_y.p!r})"
        )
    if not (n >= 1 and m >= 1):
        raise ValidationError("both sample sizes must be >= 1")
    if not (est_x.f_hat > 0 and est_y.f_hat > 0):
        raise ValidationError("density estimates must be positive")
    p = est_x.p
    z = z_quantile(0.5 * (1.0 + level))
    var = p * (1.0 - p) / (n * est_x.f_hat**2) + p * (1.0 - p) / (m * est_y.f_hat**2)
    half = z * math.sqrt(var)
    point = est_x.x_hat - est_y.x_hat
    return ConfidenceInterval(point - half, point + half, level, point, est_x.method)

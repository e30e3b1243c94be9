"""Non-parametric quantile/density estimators for grouped data.

Three methods share this module:

* histogram interpolation -- uniform density within each bin;
* linear interpolation -- one linear density segment per bin, fitted
  from the bin mean, with an optional exponential tail replacing the
  final bin;
* frequency polygon -- connects histogram heights at bin midpoints,
  pinned to zero one half-width beyond each end (equal widths only).

The latter two produce a :class:`PiecewiseLinearDensity` whose quantile
function inverts each segment's quadratic CDF in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import EstimationError, ValidationError
from .grouped import CumulativeTable, GroupedData, cumulative, _locate

__all__ = [
    "Method",
    "QuantileEstimate",
    "LinearSegment",
    "ExponentialTail",
    "PiecewiseLinearDensity",
    "hist_estimate",
    "li_fit",
    "li_quantile",
    "fp_fit",
    "fp_quantile",
]


class Method(str, Enum):
    """The four quantile estimation methods."""

    HISTOGRAM = "histogram"
    LINEAR_INTERPOLATION = "linear"
    FREQUENCY_POLYGON = "polygon"
    GLD = "gld"

    @classmethod
    def parse(cls, name: str) -> "Method":
        aliases = {
            "histogram": cls.HISTOGRAM,
            "hist": cls.HISTOGRAM,
            "linear": cls.LINEAR_INTERPOLATION,
            "linear-interpolation": cls.LINEAR_INTERPOLATION,
            "li": cls.LINEAR_INTERPOLATION,
            "polygon": cls.FREQUENCY_POLYGON,
            "frequency-polygon": cls.FREQUENCY_POLYGON,
            "fp": cls.FREQUENCY_POLYGON,
            "gld": cls.GLD,
        }
        try:
            return aliases[name.strip().lower()]
        except KeyError:
            raise ValidationError(
                f"unknown method {name!r}; expected one of histogram, linear, polygon, gld"
            ) from None


@dataclass(frozen=True)
class QuantileEstimate:
    """A quantile point estimate together with the density at that point."""

    p: float
    x_hat: float
    f_hat: float
    method: Method

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "x_hat", float(self.x_hat))
        object.__setattr__(self, "f_hat", float(self.f_hat))
        if not 0.0 < self.p < 1.0:
            raise ValidationError(f"p must be inside (0, 1), got {self.p!r}")
        if not math.isfinite(self.x_hat):
            raise EstimationError(f"quantile estimate is not finite: {self.x_hat!r}")
        if not (math.isfinite(self.f_hat) and self.f_hat > 0):
            raise EstimationError(
                f"density estimate at the quantile must be positive, got {self.f_hat!r}"
            )


@dataclass(frozen=True)
class LinearSegment:
    """Density intercept + slope * x on [lower, upper)."""

    lower: float
    upper: float
    intercept: float
    slope: float

    def __post_init__(self):
        for name in ("lower", "upper", "intercept", "slope"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.lower < self.upper:
            raise ValidationError("segment must have positive width")

    def density(self, x: float) -> float:
        return self.intercept + self.slope * x

    @property
    def mass(self) -> float:
        return self.intercept * (self.upper - self.lower) + 0.5 * self.slope * (
            self.upper**2 - self.lower**2
        )


@dataclass(frozen=True)
class ExponentialTail:
    """Decaying density (weight/scale) * exp(-(x - start)/scale) on
    [start, inf); integrates to ``weight``."""

    start: float
    weight: float
    scale: float

    def __post_init__(self):
        for name in ("start", "weight", "scale"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.scale > 0:
            raise EstimationError(f"tail scale must be positive, got {self.scale!r}")
        if not 0 < self.weight <= 1:
            raise EstimationError(f"tail weight must be in (0, 1], got {self.weight!r}")

    def density(self, x: float) -> float:
        if x < self.start:
            return 0.0
        return self.weight / self.scale * math.exp(-(x - self.start) / self.scale)


@dataclass(frozen=True)
class PiecewiseLinearDensity:
    """Ordered linear density segments plus an optional exponential tail.

    Segments may leave zero-density gaps (clip mode) but never overlap;
    every segment is nonnegative at both ends and total mass is 1.
    """

    segments: tuple[LinearSegment, ...]
    tail: ExponentialTail | None = None

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments and self.tail is None:
            raise ValidationError("density needs at least one segment or a tail")
        scale = max(
            [abs(s.density(s.lower)) for s in self.segments]
            + [abs(s.density(s.upper)) for s in self.segments]
            + [0.0]
        )
        tol = 1e-12 * scale
        for k, seg in enumerate(self.segments):
            if min(seg.density(seg.lower), seg.density(seg.upper)) < -tol:
                raise EstimationError(f"segment {k} has negative density", location=f"segment {k}")
            if k and seg.lower < self.segments[k - 1].upper:
                raise ValidationError("segments must not overlap")
        if self.tail is not None and self.segments:
            if self.tail.start < self.segments[-1].upper:
                raise ValidationError("tail must start at or after the last segment")
        mass = sum(s.mass for s in self.segments) + (self.tail.weight if self.tail else 0.0)
        if abs(mass - 1.0) > 1e-9:
            raise EstimationError(f"density mass {mass!r} differs from 1 by more than 1e-9")

    @property
    def support(self) -> tuple[float, float]:
        lo = self.segments[0].lower if self.segments else self.tail.start
        hi = math.inf if self.tail is not None else self.segments[-1].upper
        return lo, hi

    def density_at(self, x: float) -> float:
        """Density at x; zero outside all pieces."""
        for seg in self.segments:
            if seg.lower <= x < seg.upper:
                return seg.density(x)
        if self.tail is not None and x >= self.tail.start:
            return self.tail.density(x)
        if self.segments and x == self.segments[-1].upper and self.tail is None:
            return self.segments[-1].density(x)
        return 0.0

    def segment_cum_probs(self) -> tuple[float, ...]:
        """Cumulative probability at every segment's lower edge, plus a
        final entry at the last segment's upper edge (normalized to 1
        when there is no tail)."""
        cum = [0.0]
        running = 0.0
        for seg in self.segments:
            running += seg.mass
            cum.append(running)
        if self.tail is None:
            total = cum[-1]
            return tuple(c / total for c in cum)
        return tuple(cum)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must be inside (0, 1), got {p!r}")
    return p


def hist_estimate(gd: GroupedData, p: float) -> QuantileEstimate:
    """Quantile and density by linear interpolation of the histogram CDF.

    With l, h the containing bin's lower edge and width, N the total
    count, n_p the bin count and p_close the cumulative probability just
    below the bin: x_hat = l + h*N*(p - p_close)/n_p and
    f_hat = n_p/(h*N).
    """
    p = _check_p(p)
    cum = cumulative(gd)
    return _hist_at(gd, cum, p)


def _hist_at(gd: GroupedData, cum: CumulativeTable, p: float) -> QuantileEstimate:
    j = _locate(cum.cum_prob, p)
    b = gd.bins[j]
    if not b.width > 0:
        raise EstimationError(f"bin {j} has zero width", location=f"bin {j}")
    n = gd.n
    p_close = cum.cum_prob[j]
    x = b.lower + b.width * n * (p - p_close) / b.freq
    f = b.freq / (b.width * n)
    return QuantileEstimate(p, x, f, Method.HISTOGRAM)


_NEGATIVITY_MODES = ("error", "clip")


def li_fit(gd: GroupedData, unbounded_tail: bool = False, *, negativity: str = "error") -> PiecewiseLinearDensity:
    """Fit one linear density segment per bin from the bin means.

    For a bin with relative frequency f, width h, midpoint c and mean m:

        slope     = f * 12 * (m - c) / h**3
        intercept = f / h - slope * c

    The segment is nonnegative on its bin exactly when the mean lies in
    the middle third of the bin; outside that the fit errors (or, with
    ``negativity="clip"``, truncates the segment at its zero crossing and
    rescales it to keep the bin's mass).  With ``unbounded_tail`` the
    final bin instead becomes a decaying exponential with weight f_J and
    scale mean_J - lower_J.
    """
    if negativity not in _NEGATIVITY_MODES:
        raise ValidationError(f"negativity mode must be one of {_NEGATIVITY_MODES}")
    if not gd.has_means:
        raise ValidationError("linear interpolation method requires bin means")
    n = gd.n
    bins = gd.bins
    tail = None
    bounded = bins
    if unbounded_tail:
        last = bins[-1]
        scale = last.mean - last.lower
        if not scale > 0:
            raise EstimationError(
                f"tail scale must be positive: last-bin mean {last.mean!r} does not "
                f"exceed the bin's lower edge {last.lower!r}"
            )
        tail = ExponentialTail(last.lower, last.freq / n, scale)
        bounded = bins[:-1]

    segments = []
    for j, b in enumerate(bounded):
        f_rel = b.freq / n
        h = b.width
        slope = f_rel * 12.0 * (b.mean - b.midpoint) / h**3
        intercept = f_rel / h - slope * b.midpoint
        d_lo = intercept + slope * b.lower
        d_hi = intercept + slope * b.upper
        if min(d_lo, d_hi) < -1e-12 * (f_rel / h):
            if negativity == "error":
                third = h / 6.0
                raise EstimationError(
                    f"bin {j}: linear density is negative inside the bin; the bin mean "
                    f"{b.mean!r} lies outside the middle third of the bin "
                    f"[{b.midpoint - third!r}, {b.midpoint + third!r}]",
                    location=f"bin {j}",
                )
            x0 = min(max(-intercept / slope, b.lower), b.upper)
            lo, hi = (x0, b.upper) if slope > 0 else (b.lower, x0)
            positive = LinearSegment(lo, hi, intercept, slope)
            rescale = f_rel / positive.mass
            segments.append(LinearSegment(lo, hi, rescale * intercept, rescale * slope))
        else:
            segments.append(LinearSegment(b.lower, b.upper, intercept, slope))
    return PiecewiseLinearDensity(tuple(segments), tail)


def _invert_segment(seg: LinearSegment, f_lo: float, p: float) -> tuple[float, float]:
    """Solve F(x) = p inside a segment whose CDF starts at f_lo.

    With t = x - lower and d = density at the lower edge, the segment CDF
    is F(x) = f_lo + d*t + slope*t^2/2.  The closed-form root on the
    nonnegative-density branch is t = 2(p - f_lo)/(d + sqrt(disc)) with
    disc = d^2 + 2*slope*(p - f_lo); this is the "+sqrt" root rearranged
    so it never cancels and degrades gracefully to the uniform case when
    the slope vanishes.
    """
    d_lo = seg.density(seg.lower)
    target = p - f_lo
    disc = d_lo * d_lo + 2.0 * seg.slope * target
    if disc < 0:
        raise EstimationError(
            "negative discriminant while inverting a density segment; "
            "the fitted density is not a valid distribution"
        )
    width = seg.upper - seg.lower
    tol = 1e-9 * width
    denom = d_lo + math.sqrt(disc)
    t = math.inf if denom == 0 else 2.0 * target / denom
    if not -tol <= t <= width + tol:
        # "-sqrt" branch; only valid if it falls inside while "+" does not.
        denom_minus = d_lo - math.sqrt(disc)
        t_minus = math.inf if denom_minus == 0 else 2.0 * target / denom_minus
        if -tol <= t_minus <= width + tol:
            t = t_minus
        else:
            raise EstimationError(
                f"no quantile root inside segment [{seg.lower!r}, {seg.upper!r}] for p={p!r}"
            )
    x = seg.lower + min(max(t, 0.0), width)
    f = d_lo + seg.slope * (x - seg.lower)
    if not f > 0:
        raise EstimationError(f"density at the estimated quantile is not positive ({f!r})")
    return x, f


def _invert_tail(tail: ExponentialTail, f_lo: float, p: float) -> tuple[float, float]:
    """Quantile of the exponential tail whose CDF starts at f_lo."""
    u = 1.0 - (p - f_lo) / tail.weight
    if not u > 0:
        raise EstimationError(f"p={p!r} is beyond the tail's mass")
    x = tail.start - tail.scale * math.log(u)
    f = tail.weight / tail.scale * u
    return x, f


def li_quantile(d: PiecewiseLinearDensity, cum: CumulativeTable, p: float) -> QuantileEstimate:
    """Invert the linear-interpolation density at p.

    ``cum`` is the grouped data's own cumulative table, so segment j
    starts at cumulative probability cum_prob[j]; a p on a boundary
    resolves to the lower-indexed piece.
    """
    p = _check_p(p)
    probs = cum.cum_prob
    n_pieces = len(d.segments) + (1 if d.tail is not None else 0)
    if len(probs) != n_pieces + 1:
        raise ValidationError(
            "cumulative table does not match the fitted density "
            f"({len(probs) - 1} bins vs {n_pieces} pieces)"
        )
    if d.tail is not None and p > probs[-2]:
        x, f = _invert_tail(d.tail, probs[-2], p)
    else:
        j = min(_locate(probs, p), len(d.segments) - 1)
        x, f = _invert_segment(d.segments[j], probs[j], p)
    return QuantileEstimate(p, x, f, Method.LINEAR_INTERPOLATION)


def fp_fit(gd: GroupedData) -> PiecewiseLinearDensity:
    """Frequency polygon density for equal-width bins.

    Breakpoints are the bin midpoints extended one half-width beyond each
    end; densities at the breakpoints are {0, g_1, ..., g_J, 0} with g_j
    the histogram heights, joined linearly.  Total mass is exactly 1 with
    no renormalization.
    """
    widths = [b.width for b in gd.bins]
    h_ref = widths[0]
    for j, h in enumerate(widths):
        if abs(h - h_ref) > 1e-9 * h_ref:
            raise ValidationError(
                f"frequency polygon requires equal bin widths; bin {j} has width {h!r} "
                f"vs {h_ref!r}",
                location=f"bin {j}",
            )
    n = gd.n
    points = [(gd.bins[0].midpoint - widths[0], 0.0)]
    points += [(b.midpoint, b.freq / (n * b.width)) for b in gd.bins]
    points.append((gd.bins[-1].midpoint + widths[-1], 0.0))
    segments = []
    for (x0, f0), (x1, f1) in zip(points, points[1:]):
        slope = (f1 - f0) / (x1 - x0)
        intercept = f0 - slope * x0
        segments.append(LinearSegment(x0, x1, intercept, slope))
    return PiecewiseLinearDensity(tuple(segments))


def fp_quantile(d: PiecewiseLinearDensity, p: float) -> QuantileEstimate:
    """Invert a frequency-polygon density at p using its own trapezoid
    cumulative masses."""
    p = _check_p(p)
    if d.tail is not None:
        raise ValidationError("frequency polygon densities have no tail")
    probs = d.segment_cum_probs()
    j = _locate(probs, p)
    x, f = _invert_segment(d.segments[j], probs[j], p)
    return QuantileEstimate(p, x, f, Method.FREQUENCY_POLYGON)

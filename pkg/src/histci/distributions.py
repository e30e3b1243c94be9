"""Reference distribution families with exact quantile functions, used as
simulation ground truth, plus sampling and sample-to-grouped-data binning.

Six families are provided: log-normal, Dagum, Singh-Maddala, normal,
normal mixture, and exponential.  Sampling is by inverse transform from
seeded uniforms (mixtures draw a component first), so identical seeds
give identical samples.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.special import erfc as _erfc

from .errors import EstimationError, ValidationError
from .grouped import Bin, GroupedData, merge_zero_bins
from .intervals import _norm_ppf

__all__ = [
    "Distribution",
    "LogNormal",
    "Dagum",
    "SinghMaddala",
    "Normal",
    "NormalMixture",
    "Exponential",
    "BinningPolicy",
    "true_quantile",
    "sample",
    "bin_sample",
    "distribution_from_config",
]

_SQRT2 = math.sqrt(2.0)


class Distribution(abc.ABC):
    """A family with exact quantile and CDF; immutable and shareable."""

    family: str = ""

    @abc.abstractmethod
    def quantile(self, p):
        """Q(p); accepts a float or an ndarray of probabilities in (0, 1)."""

    @abc.abstractmethod
    def cdf(self, x):
        """F(x); accepts a float or an ndarray."""

    def params_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def config_dict(self) -> dict:
        return {"family": self.family, "params": self.params_dict()}


def _require_positive(**values):
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise ValidationError(f"parameter {name} must be positive, got {value!r}")


@dataclass(frozen=True)
class LogNormal(Distribution):
    mu: float
    sigma: float
    family = "lognormal"

    def __post_init__(self):
        _require_positive(sigma=self.sigma)

    def quantile(self, p):
        return np.exp(self.mu + self.sigma * _norm_ppf(p))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = (np.log(np.where(x > 0, x, 1.0)) - self.mu) / self.sigma
        return np.where(x > 0, 0.5 * _erfc(-z / _SQRT2), 0.0)


@dataclass(frozen=True)
class Normal(Distribution):
    mu: float
    sigma: float
    family = "normal"

    def __post_init__(self):
        _require_positive(sigma=self.sigma)

    def quantile(self, p):
        return self.mu + self.sigma * _norm_ppf(p)

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return 0.5 * _erfc(-z / _SQRT2)


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float
    family = "exponential"

    def __post_init__(self):
        _require_positive(rate=self.rate)

    def quantile(self, p):
        return -np.log1p(-np.asarray(p, dtype=float)) / self.rate

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)


@dataclass(frozen=True)
class Dagum(Distribution):
    """Dagum(a, b, p): F(x) = (1 + (x/b)^-a)^-p for x > 0."""

    a: float
    b: float
    p_shape: float
    family = "dagum"

    def __post_init__(self):
        _require_positive(a=self.a, b=self.b, p_shape=self.p_shape)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.b * (p ** (-1.0 / self.p_shape) - 1.0) ** (-1.0 / self.a)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            inner = (np.where(x > 0, x, 1.0) / self.b) ** (-self.a)
        return np.where(x > 0, (1.0 + inner) ** (-self.p_shape), 0.0)


@dataclass(frozen=True)
class SinghMaddala(Distribution):
    """Singh-Maddala(a, b, q): F(x) = 1 - (1 + (x/b)^a)^-q for x > 0."""

    a: float
    b: float
    q_shape: float
    family = "singh-maddala"

    def __post_init__(self):
        _require_positive(a=self.a, b=self.b, q_shape=self.q_shape)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.b * ((1.0 - p) ** (-1.0 / self.q_shape) - 1.0) ** (1.0 / self.a)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, 1.0 - (1.0 + (np.maximum(x, 0.0) / self.b) ** self.a) ** (-self.q_shape), 0.0)


@dataclass(frozen=True)
class NormalMixture(Distribution):
    """Mixture of normal components given as (mu, sigma, weight) triples."""

    components: tuple[tuple[float, float, float], ...]
    family = "normal-mixture"

    def __post_init__(self):
        comps = tuple((float(m), float(s), float(w)) for m, s, w in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValidationError("mixture needs at least one component")
        for m, s, w in comps:
            _require_positive(sigma=s, weight=w)
        total = sum(w for _, _, w in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"mixture weights must sum to 1, got {total!r}")

    def params_dict(self) -> dict:
        return {"components": [{"mu": m, "sigma": s, "w": w} for m, s, w in self.components]}

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        for m, s, w in self.components:
            out = out + w * 0.5 * _erfc(-((x - m) / s) / _SQRT2)
        return out

    def quantile(self, p):
        p_arr = np.atleast_1d(np.asarray(p, dtype=float))
        out = np.array([self._quantile_scalar(v) for v in p_arr])
        return out if np.ndim(p) else float(out[0])

    def _quantile_scalar(self, p: float) -> float:
        # Bisection on a bracket from the component quantiles; the mixture
        # CDF is strictly increasing, so this cannot fail.
        comp_q = [m + s * float(_norm_ppf(p)) for m, s, _ in self.components]
        lo, hi = min(comp_q), max(comp_q)
        tol = 1e-12 * max(1.0, abs(lo), abs(hi))
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if float(self.cdf(mid)) < p:
                lo = mid
            else:
                hi = mid
            if hi - lo <= tol:
                break
        return 0.5 * (lo + hi)


def true_quantile(d: Distribution, p: float) -> float:
    """Ground-truth quantile; |F(Q(p)) - p| < 1e-10 across families."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p must be inside (0, 1), got {p!r}")
    return float(d.quantile(p))


def sample(d: Distribution, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws by inverse transform on uniforms from ``rng``."""
    if n < 1:
        raise ValidationError(f"sample size must be >= 1, got {n!r}")
    if isinstance(d, NormalMixture):
        weights = np.array([w for _, _, w in d.components])
        cum_w = np.cumsum(weights)
        comp = np.searchsorted(cum_w, rng.random(n), side="right")
        comp = np.minimum(comp, len(weights) - 1)
        u = _open_uniform(rng.random(n))
        out = np.empty(n, dtype=float)
        for i, (m, s, _) in enumerate(d.components):
            mask = comp == i
            if mask.any():
                out[mask] = m + s * _norm_ppf(u[mask])
        return out
    u = _open_uniform(rng.random(n))
    return np.asarray(d.quantile(u), dtype=float)


def _open_uniform(u: np.ndarray) -> np.ndarray:
    # random() yields [0, 1); push exact zeros inside the open interval.
    return np.maximum(u, 2.0**-53)


@dataclass(frozen=True)
class BinningPolicy:
    """How to turn a raw sample into grouped data.

    Either ``count`` equal-width bins (over the sample min/max, or over
    an explicit [lo, hi] range) or a fixed ``edges`` sequence.
    """

    count: int | None = None
    edges: tuple[float, ...] | None = None
    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        if (self.count is None) == (self.edges is None):
            raise ValidationError("exactly one of count or edges must be given")
        if self.count is not None and self.count < 2:
            raise ValidationError(f"bin count must be >= 2, got {self.count!r}")
        if self.edges is not None:
            edges = tuple(float(e) for e in self.edges)
            object.__setattr__(self, "edges", edges)
            if len(edges) < 3:
                raise ValidationError("edges must define at least two bins")
            if any(b <= a for a, b in zip(edges, edges[1:])):
                raise ValidationError("edges must be strictly increasing")
            if self.lo is not None or self.hi is not None:
                raise ValidationError("lo/hi apply only to count-based binning")
        if (self.lo is None) != (self.hi is None):
            raise ValidationError("lo and hi must be given together")
        if self.lo is not None and not self.lo < self.hi:
            raise ValidationError("binning range must satisfy lo < hi")

    def describe(self) -> str:
        if self.count is not None:
            rng = "" if self.lo is None else f"@[{self.lo!r};{self.hi!r}]"
            return f"{self.count}{rng}"
        return "edges:" + ";".join(repr(e) for e in self.edges)

    def resolve_edges(self, xs: np.ndarray) -> np.ndarray:
        if self.edges is not None:
            return np.asarray(self.edges, dtype=float)
        if self.lo is not None:
            lo, hi = self.lo, self.hi
        else:
            lo, hi = float(np.min(xs)), float(np.max(xs))
            if not lo < hi:
                raise EstimationError("degenerate sample: all values are equal")
        return np.linspace(lo, hi, self.count + 1)


def bin_sample(xs, policy: BinningPolicy, with_means: bool = False) -> GroupedData:
    """Group a raw sample into bins (top edge closed so the maximum is
    kept), optionally attaching per-bin means computed from the raw
    values; zero bins are merged afterward."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValidationError("cannot bin an empty sample")
    edges = policy.resolve_edges(xs)
    k = len(edges) - 1
    idx = np.searchsorted(edges, xs, side="right") - 1
    idx[xs == edges[-1]] = k - 1
    if (idx < 0).any() or (idx >= k).any():
        raise ValidationError("sample values fall outside the binning range")
    freqs = np.bincount(idx, minlength=k)
    means = None
    if with_means:
        sums = np.bincount(idx, weights=xs, minlength=k)
        with np.errstate(invalid="ignore"):
            means = np.where(freqs > 0, sums / np.maximum(freqs, 1), np.nan)
    bins = []
    for j in range(k):
        mean = None
        if means is not None and freqs[j] > 0:
            mean = min(max(float(means[j]), float(edges[j])), float(edges[j + 1]))
        bins.append(Bin(float(edges[j]), float(edges[j + 1]), float(freqs[j]), mean))
    return merge_zero_bins(GroupedData(tuple(bins)))


# Each parameter may be written under any of its accepted aliases.
_FAMILIES = {
    "lognormal": (LogNormal, (("mu",), ("sigma",))),
    "normal": (Normal, (("mu",), ("sigma",))),
    "exponential": (Exponential, (("rate",),)),
    "dagum": (Dagum, (("a",), ("b",), ("p", "p_shape"))),
    "singh-maddala": (SinghMaddala, (("a",), ("b",), ("q", "q_shape"))),
}


def distribution_from_config(doc: dict, path: str = "") -> Distribution:
    """Build a distribution from {"family": ..., "params": {...}}."""
    prefix = f"{path}: " if path else ""
    if not isinstance(doc, dict) or "family" not in doc:
        raise ValidationError(f"{prefix}expected an object with a 'family' key", location=path)
    family = str(doc["family"]).strip().lower()
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ValidationError(f"{prefix}'params' must be an object", location=path)
    if family in ("normal-mixture", "mixture"):
        comps = params.get("components")
        if not isinstance(comps, list) or not comps:
            raise ValidationError(
                f"{prefix}normal-mixture needs a 'components' list of "
                "{mu, sigma, w} objects",
                location=path,
            )
        triples = []
        for i, comp in enumerate(comps):
            try:
                triples.append((comp["mu"], comp["sigma"], comp["w"]))
            except (KeyError, TypeError):
                raise ValidationError(
                    f"{prefix}components[{i}] must have mu, sigma and w", location=path
                ) from None
        return NormalMixture(tuple(triples))
    if family not in _FAMILIES:
        raise ValidationError(
            f"{prefix}unknown family {family!r}; expected one of "
            f"{sorted(_FAMILIES) + ['normal-mixture']}",
            location=path,
        )
    cls, specs = _FAMILIES[family]
    values = []
    for aliases in specs:
        found = [name for name in aliases if name in params]
        if not found:
            raise ValidationError(
                f"{prefix}missing parameter {aliases[0]!r} for {family}", location=path
            )
        values.append(params[found[0]])
    try:
        return cls(*(float(v) for v in values))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{prefix}{exc}", location=path) from None

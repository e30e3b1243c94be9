"""Request-shaped operations shared by the CLI and the HTTP service.

Every function here takes plain validated inputs and returns a plain
dict, so the two front ends cannot drift apart numerically.
"""

from __future__ import annotations

import itertools

from .distributions import BinningPolicy, distribution_from_config
from .errors import ValidationError
from .gld import FitConfig, fit_percentile_matching
from .grouped import GroupedData, merge_zero_bins
from .intervals import ci_difference, ci_single
from .methods import estimate_quantile
from .piecewise import Method
from .simulate import SimCell, run_cell

__all__ = [
    "prepare",
    "estimate_result",
    "diff_result",
    "fit_result",
    "simulate_result",
    "cell_from_dict",
    "expand_config_cells",
    "policy_from_config",
]


def prepare(gd: GroupedData) -> GroupedData:
    """Normalize freshly ingested data (merge zero-count bins)."""
    return merge_zero_bins(gd)


def _effective_n(gd: GroupedData, n_override) -> float:
    if n_override is None:
        return gd.n
    n = float(n_override)
    if not n >= 1:
        raise ValidationError(f"n_override must be >= 1, got {n_override!r}")
    return n


def estimate_result(
    gd: GroupedData,
    method: Method,
    p: float,
    level: float = 0.95,
    *,
    n_override: float | None = None,
    unbounded_tail: bool = False,
    fit_config: FitConfig | None = None,
) -> dict:
    """Point estimate plus confidence interval for one dataset."""
    gd = prepare(gd)
    n = _effective_n(gd, n_override)
    est = estimate_quantile(gd, method, p, unbounded_tail=unbounded_tail, fit_config=fit_config)
    interval = ci_single(est, n, level)
    return {
        "method": method.value,
        "p": est.p,
        "level": interval.level,
        "n": n,
        "point": interval.point,
        "lower": interval.lower,
        "upper": interval.upper,
        "width": interval.width,
        "f_hat": est.f_hat,
    }


def diff_result(
    gd_x: GroupedData,
    gd_y: GroupedData,
    method_x: Method,
    method_y: Method,
    p: float,
    level: float = 0.95,
    *,
    n_override_x: float | None = None,
    n_override_y: float | None = None,
    unbounded_tail: bool = False,
    fit_config: FitConfig | None = None,
) -> dict:
    """Interval for the difference of the same quantile of two groups."""
    gd_x, gd_y = prepare(gd_x), prepare(gd_y)
    n = _effective_n(gd_x, n_override_x)
    m = _effective_n(gd_y, n_override_y)
    est_x = estimate_quantile(gd_x, method_x, p, unbounded_tail=unbounded_tail, fit_config=fit_config)
    est_y = estimate_quantile(gd_y, method_y, p, unbounded_tail=unbounded_tail, fit_config=fit_config)
    interval = ci_difference(est_x, n, est_y, m, level)
    return {
        "p": est_x.p,
        "level": interval.level,
        "point": interval.point,
        "lower": interval.lower,
        "upper": interval.upper,
        "width": interval.width,
        "x": {"method": Method(method_x).value, "n": n, "point": est_x.x_hat, "f_hat": est_x.f_hat},
        "y": {"method": Method(method_y).value, "n": m, "point": est_y.x_hat, "f_hat": est_y.f_hat},
    }


def fit_result(gd: GroupedData, fit_config: FitConfig | None = None) -> dict:
    """Percentile-matching fit report for one dataset."""
    gd = prepare(gd)
    report = fit_percentile_matching(gd, fit_config)
    return report.to_json_dict()


def simulate_result(cell: SimCell) -> dict:
    """Run one simulation cell."""
    result = run_cell(cell)
    out = result.to_json_dict()
    out["reps"] = cell.reps
    return out


def policy_from_config(doc: dict, path: str = "") -> BinningPolicy:
    """Binning policy from config keys bins|edges plus optional lo/hi."""
    prefix = f"{path}." if path else ""
    has_bins = "bins" in doc
    has_edges = "edges" in doc
    if has_bins == has_edges:
        raise ValidationError(
            f"{prefix}bins: exactly one of 'bins' or 'edges' is required",
            location=f"{prefix}bins",
        )
    try:
        if has_bins:
            lo = doc.get("lo")
            hi = doc.get("hi")
            return BinningPolicy(
                count=int(doc["bins"]),
                lo=None if lo is None else float(lo),
                hi=None if hi is None else float(hi),
            )
        return BinningPolicy(edges=tuple(float(e) for e in doc["edges"]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{prefix}bins: {exc}", location=f"{prefix}bins") from None
    except ValidationError as exc:
        raise ValidationError(f"{prefix}bins: {exc}", location=f"{prefix}bins") from None


_CELL_KEYS = {
    "family", "params", "n", "p", "method", "bins", "edges", "lo", "hi",
    "level", "reps", "seed",
}


def cell_from_dict(doc: dict, path: str = "cell") -> SimCell:
    """One simulation cell from a flat config object."""
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected an object", location=path)
    unknown = set(doc) - _CELL_KEYS
    if unknown:
        raise ValidationError(
            f"{path}: unknown key(s) {sorted(unknown)}", location=f"{path}.{sorted(unknown)[0]}"
        )
    for key in ("family", "n", "p", "method"):
        if key not in doc:
            raise ValidationError(f"{path}.{key}: required", location=f"{path}.{key}")
    dist = distribution_from_config(
        {"family": doc["family"], "params": doc.get("params", {})}, path=f"{path}.family"
    )
    policy = policy_from_config(doc, path)
    try:
        return SimCell(
            dist=dist,
            n=int(doc["n"]),
            p=float(doc["p"]),
            method=Method.parse(str(doc["method"])),
            policy=policy,
            level=float(doc.get("level", 0.95)),
            reps=int(doc.get("reps", 1000)),
            seed=int(doc.get("seed", 0)),
        )
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}", location=path) from None
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: {exc}", location=path) from None


_EXPANDABLE = ("n", "p", "method", "bins", "level", "reps", "seed")


def expand_config_cells(config: dict) -> list[SimCell]:
    """Cells from a config document {defaults?, cells: [...]}.

    Within a cell entry the scalar fields n, p, method, bins, level,
    reps and seed may be lists; list-valued fields expand to their cross
    product in that field order.
    """
    if not isinstance(config, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(config) - {"defaults", "cells", "workers"}
    if unknown:
        raise ValidationError(f"unknown top-level key(s) {sorted(unknown)}",
                              location=sorted(unknown)[0])
    defaults = config.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ValidationError("defaults must be an object", location="defaults")
    entries = config.get("cells")
    if not isinstance(entries, list):
        raise ValidationError("config needs a 'cells' list", location="cells")
    cells = []
    for i, entry in enumerate(entries):
        path = f"cells[{i}]"
        if not isinstance(entry, dict):
            raise ValidationError(f"{path}: expected an object", location=path)
        merged = {**defaults, **entry}
        lists = [
            [(key, v) for v in merged[key]]
            for key in _EXPANDABLE
            if isinstance(merged.get(key), list)
        ]
        for combo in itertools.product(*lists):
            variant = {**merged, **dict(combo)}
            cells.append(cell_from_dict(variant, path))
    return cells

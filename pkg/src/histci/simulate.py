"""Monte-Carlo coverage harness.

One :class:`SimCell` fixes (distribution, n, p, method, binning, level,
replications, seed); :func:`run_cell` reports the empirical coverage of
the quantile interval and its average width over the replications.

Replication r uses a generator spawned from the master seed with spawn
key (r,), so results do not depend on execution order and parallel runs
are byte-identical to serial ones.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distributions import BinningPolicy, Distribution, NormalMixture, bin_sample, sample, true_quantile
from .errors import EstimationError, HistciError, ValidationError
from .gld import FitConfig
from .intervals import ci_single
from .methods import make_evaluator
from .piecewise import Method

__all__ = ["SimCell", "SimResult", "TableRow", "run_cell", "run_table", "results_csv", "coverage_curve"]


@dataclass(frozen=True)
class SimCell:
    """One simulation configuration."""

    dist: Distribution
    n: int
    p: float
    method: Method
    policy: BinningPolicy
    level: float = 0.95
    reps: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.reps < 1:
            raise ValidationError(f"reps must be >= 1, got {self.reps!r}")
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n!r}")
        if not 0.0 < self.p < 1.0:
            raise ValidationError(f"p must be inside (0, 1), got {self.p!r}")
        if not 0.0 < self.level < 1.0:
            raise ValidationError(f"level must be inside (0, 1), got {self.level!r}")
        if self.method is Method.GLD and isinstance(self.dist, NormalMixture):
            raise ValidationError(
                "the GLD method fits a unimodal distribution and cannot be used "
                "with a normal mixture"
            )


@dataclass(frozen=True)
class SimResult:
    """Coverage and average width over the successful replications."""

    coverage: float
    avg_width: float
    failures: int

    def __post_init__(self):
        object.__setattr__(self, "coverage", float(self.coverage))
        object.__setattr__(self, "avg_width", float(self.avg_width))
        object.__setattr__(self, "failures", int(self.failures))

    def to_json_dict(self) -> dict:
        return {"coverage": self.coverage, "avg_width": self.avg_width, "failures": self.failures}


def _rep_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def run_cell(cell: SimCell) -> SimResult:
    """Coverage of the interval for the cell's quantile over all reps.

    A replication whose estimation errors out counts as a failure and is
    excluded from coverage and width; failures are reported so exclusion
    is never silent.  Data-driven validation errors (e.g. zero-bin
    merging leaving unequal widths for the frequency polygon) fail the
    replication the same way; a misconfigured cell fails every
    replication and surfaces as a cell-level error.
    """
    x_true = true_quantile(cell.dist, cell.p)
    want_means = cell.method is Method.LINEAR_INTERPOLATION
    covered = 0
    width_sum = 0.0
    failures = 0
    for rep in range(cell.reps):
        rng = _rep_rng(cell.seed, rep)
        xs = sample(cell.dist, cell.n, rng)
        try:
            gd = bin_sample(xs, cell.policy, with_means=want_means)
            evaluate = make_evaluator(gd, cell.method, unbounded_tail=want_means)
            est = evaluate(cell.p)
            interval = ci_single(est, cell.n, cell.level)
        except HistciError:
            failures += 1
            continue
        if interval.lower <= x_true <= interval.upper:
            covered += 1
        width_sum += interval.width
    successes = cell.reps - failures
    if successes == 0:
        raise EstimationError("all replications failed for this cell")
    return SimResult(covered / successes, width_sum / successes, failures)


@dataclass(frozen=True)
class TableRow:
    """A cell together with its result, or the error that stopped it."""

    cell: SimCell
    result: SimResult | None
    error: str | None = None


def _run_row(cell: SimCell) -> TableRow:
    try:
        return TableRow(cell, run_cell(cell))
    except EstimationError as exc:
        return TableRow(cell, None, str(exc))


def run_table(cells: list[SimCell], *, workers: int = 1, progress=None) -> list[TableRow]:
    """Run every cell, preserving order; per-cell errors become failed
    rows instead of aborting the table.

    ``progress`` is an optional callable invoked as progress(i, total,
    row) after each cell; ``workers`` > 1 distributes cells over
    processes (the seed-splitting rule keeps output identical).
    """
    cells = list(cells)
    rows: list[TableRow] = []
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, row in enumerate(pool.map(_run_row, cells)):
                rows.append(row)
                if progress is not None:
                    progress(i + 1, len(cells), row)
        return rows
    for i, cell in enumerate(cells):
        row = _run_row(cell)
        rows.append(row)
        if progress is not None:
            progress(i + 1, len(cells), row)
    return rows


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _params_text(dist: Distribution) -> str:
    parts = []
    for name, value in dist.params_dict().items():
        if isinstance(value, list):
            inner = "|".join(
                "(" + ";".join(_format_value(v) for v in comp.values()) + ")" for comp in value
            )
            parts.append(f"{name}={inner}")
        else:
            parts.append(f"{name}={_format_value(value)}")
    return ";".join(parts)


def results_csv(rows: list[TableRow]) -> str:
    """CSV with columns family,params,n,p,method,bins,coverage,width,failures.

    Failed rows keep their identifying columns, leave coverage and width
    empty, and report all replications as failures.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["family", "params", "n", "p", "method", "bins", "coverage", "width", "failures"])
    for row in rows:
        cell = row.cell
        base = [
            cell.dist.family,
            _params_text(cell.dist),
            str(cell.n),
            repr(cell.p),
            cell.method.value,
            cell.policy.describe(),
        ]
        if row.result is None:
            writer.writerow(base + ["", "", str(cell.reps)])
        else:
            writer.writerow(
                base
                + [
                    repr(row.result.coverage),
                    repr(row.result.avg_width),
                    str(row.result.failures),
                ]
            )
    return out.getvalue()


def coverage_curve(
    dist: Distribution,
    n: int,
    method: Method,
    policy: BinningPolicy,
    level: float = 0.95,
    reps: int = 1000,
    grid_size: int = 100,
    seed: int = 0,
    fit_config: FitConfig | None = None,
) -> list[tuple[float, float]]:
    """Coverage at p = i/(grid_size+1) for i = 1..grid_size.

    Each replication draws one sample, fits the method once, and
    evaluates every p on that single dataset.
    """
    if grid_size < 2:
        raise ValidationError(f"grid_size must be >= 2, got {grid_size!r}")
    method = Method(method)
    ps = [i / (grid_size + 1) for i in range(1, grid_size + 1)]
    truth = [true_quantile(dist, p) for p in ps]
    want_means = method is Method.LINEAR_INTERPOLATION
    covered = [0] * grid_size
    failures = [0] * grid_size
    for rep in range(reps):
        rng = _rep_rng(seed, rep)
        xs = sample(dist, n, rng)
        try:
            gd = bin_sample(xs, policy, with_means=want_means)
            evaluate = make_evaluator(gd, method, unbounded_tail=want_means, fit_config=fit_config)
        except HistciError:
            for i in range(grid_size):
                failures[i] += 1
            continue
        for i, p in enumerate(ps):
            try:
                interval = ci_single(evaluate(p), n, level)
            except HistciError:
                failures[i] += 1
                continue
            if interval.lower <= truth[i] <= interval.upper:
                covered[i] += 1
    curve = []
    for i, p in enumerate(ps):
        successes = reps - failures[i]
        curve.append((p, covered[i] / successes if successes else float("nan")))
    return curve

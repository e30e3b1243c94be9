#!/usr/bin/env python3
"""Desk-scale coverage experiment.

Replays a slice of the interval-coverage study: how often does the 95%
interval contain the true median when the estimator only ever sees
binned data?  Uses 150 replications per cell so it finishes in seconds;
raise ``REPS`` for publication-grade numbers.
"""

import sys

from histci import (
    BinningPolicy,
    Exponential,
    Method,
    Normal,
    SimCell,
    coverage_curve,
    results_csv,
    run_table,
)

REPS = 150

cells = [
    SimCell(dist, 500, 0.5, method, BinningPolicy(count=bins), 0.95, REPS, seed=7)
    for dist in (Normal(0, 1), Exponential(1))
    for bins in (5, 10)
    for method in (Method.HISTOGRAM, Method.FREQUENCY_POLYGON, Method.LINEAR_INTERPOLATION)
]


def progress(i, total, row):
    print(f"  [{i}/{total}] done", file=sys.stderr)


rows = run_table(cells, workers=2, progress=progress)
print(results_csv(rows))

print("coverage across p for the histogram method (exponential, 10 bins):")
curve = coverage_curve(
    Exponential(1), 500, Method.HISTOGRAM, BinningPolicy(count=10),
    level=0.95, reps=REPS, grid_size=9, seed=7,
)
for p, cov in curve:
    bar = "#" * int(round(cov * 40))
    print(f"  p={p:4.2f} {cov:5.3f} {bar}")

#!/usr/bin/env python3
"""Estimate quantiles four ways from one small histogram.

A grouped dataset is just bin edges, frequencies and (optionally) bin
means.  Each method turns it into a quantile estimate plus a density
estimate at that quantile; the density is what later drives interval
widths, so it is printed alongside.
"""

import numpy as np

from histci import (
    BinningPolicy,
    Exponential,
    Method,
    bin_sample,
    make_evaluator,
    sample,
    true_quantile,
)

# Draw a skewed sample and keep only its binned summary (6 bins, with
# per-bin means so the linear interpolation method is available).
dist = Exponential(1.0)
rng = np.random.default_rng(8)
xs = sample(dist, 2000, rng)
gd = bin_sample(xs, BinningPolicy(count=6), with_means=True)

print("binned data (lower, upper, freq, mean):")
for b in gd.bins:
    print(f"  [{b.lower:7.3f}, {b.upper:7.3f})  {b.freq:5.0f}   {b.mean:7.3f}")
print()

evaluators = {
    "histogram": make_evaluator(gd, Method.HISTOGRAM),
    "polygon": make_evaluator(gd, Method.FREQUENCY_POLYGON),
    "linear(+tail)": make_evaluator(gd, Method.LINEAR_INTERPOLATION, unbounded_tail=True),
    "gld": make_evaluator(gd, Method.GLD),
}

header = f"{'p':>5} {'true':>8}" + "".join(f" {name:>16}" for name in evaluators)
print(header)
for p in (0.1, 0.25, 0.5, 0.75, 0.9):
    row = f"{p:5.2f} {true_quantile(dist, p):8.4f}"
    for evaluate in evaluators.values():
        est = evaluate(p)
        row += f" {est.x_hat:8.4f}/{est.f_hat:5.3f}"
    print(row)
print("\n(each cell is quantile/density; compare against the 'true' column)")

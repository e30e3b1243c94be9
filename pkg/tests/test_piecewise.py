import math

import numpy as np
import pytest

from histci import (
    Bin,
    EstimationError,
    GroupedData,
    Method,
    ValidationError,
    cumulative,
    fp_fit,
    fp_quantile,
    hist_estimate,
    li_fit,
    li_quantile,
)

from oracles import density_cdf, hist_cdf


# --- histogram ---------------------------------------------------------------


def test_hist_uniform_cases():
    gd = GroupedData((Bin(0, 1, 50), Bin(1, 2, 50)))
    est = hist_estimate(gd, 0.25)
    assert (est.x_hat, est.f_hat) == (0.5, 0.5)
    est = hist_estimate(gd, 0.75)
    assert (est.x_hat, est.f_hat) == (1.5, 0.5)
    assert est.method is Method.HISTOGRAM


def test_hist_derived_example():
    gd = GroupedData((Bin(0, 2, 30), Bin(2, 5, 70)))
    est = hist_estimate(gd, 0.5)
    assert est.x_hat == pytest.approx(2.857142857142857, abs=1e-12)
    assert est.f_hat == pytest.approx(0.23333333333333334, abs=1e-12)
    # cross-check by numerically inverting the histogram CDF
    assert hist_cdf(gd, est.x_hat) == pytest.approx(0.5, abs=1e-12)


def test_hist_boundary_uses_lower_bin_density():
    gd = GroupedData((Bin(0, 1, 25), Bin(1, 2, 75)))
    est = hist_estimate(gd, 0.25)
    assert est.x_hat == 1.0
    assert est.f_hat == 0.25  # density of the lower bin


# --- linear interpolation -----------------------------------------------------


def test_li_fit_derived_coefficients():
    gd = GroupedData((Bin(0, 2, 60, 1.2), Bin(2, 4, 40, 3.0)))
    density = li_fit(gd)
    seg = density.segments[0]
    assert seg.slope == pytest.approx(0.18, abs=1e-15)
    assert seg.intercept == pytest.approx(0.12, abs=1e-15)


def test_li_fit_midpoint_mean_reduces_to_histogram():
    # relative frequency 0.5 in a unit bin with its mean at the midpoint
    gd = GroupedData((Bin(0, 1, 50, 0.5), Bin(1, 2, 50, 1.5)))
    density = li_fit(gd)
    seg = density.segments[0]
    assert seg.slope == 0.0
    assert seg.intercept == pytest.approx(0.5)


def test_li_fit_tail_parameters():
    gd = GroupedData((Bin(0, 10, 90, 5.0), Bin(10, 14, 10, 12.0)))
    density = li_fit(gd, unbounded_tail=True)
    assert density.tail.weight == pytest.approx(0.1)
    assert density.tail.scale == pytest.approx(2.0)
    assert len(density.segments) == 1


def test_li_fit_requires_means():
    gd = GroupedData((Bin(0, 1, 50), Bin(1, 2, 50)))
    with pytest.raises(ValidationError, match="requires bin means"):
        li_fit(gd)


def test_li_fit_middle_third_violation():
    # mean at 0.1 in a unit bin: far outside [1/3, 2/3]
    gd = GroupedData((Bin(0, 1, 50, 0.1), Bin(1, 2, 50, 1.5)))
    with pytest.raises(EstimationError, match="middle third"):
        li_fit(gd)


def test_li_fit_clip_mode_keeps_mass():
    gd = GroupedData((Bin(0, 1, 50, 0.1), Bin(1, 2, 50, 1.5)))
    density = li_fit(gd, negativity="clip")
    masses = [seg.mass for seg in density.segments]
    assert sum(masses) == pytest.approx(1.0, abs=1e-12)
    assert density.segments[0].upper < 1.0  # truncated at the zero crossing
    for seg in density.segments:
        assert seg.density(seg.lower) >= -1e-12
        assert seg.density(seg.upper) >= -1e-12


def test_li_clip_mode_quantiles_still_invert():
    gd = GroupedData((Bin(0, 1, 50, 0.1), Bin(1, 2, 50, 1.5)))
    density = li_fit(gd, negativity="clip")
    cum = cumulative(gd)
    for p in (0.1, 0.3, 0.5, 0.7, 0.9):
        est = li_quantile(density, cum, p)
        assert density_cdf(density, est.x_hat) == pytest.approx(p, abs=1e-10)


def test_li_boundary_tie_uses_lower_segment_density():
    # densities jump at the shared edge; a p exactly on the cumulative
    # boundary resolves to the shared edge with the lower bin's density
    gd = GroupedData((Bin(0, 1, 25, 0.5), Bin(1, 2, 75, 1.5)))
    density = li_fit(gd)
    est = li_quantile(density, cumulative(gd), 0.25)
    assert est.x_hat == pytest.approx(1.0, abs=1e-12)
    assert est.f_hat == pytest.approx(density.segments[0].density(1.0), abs=1e-12)
    assert density.segments[0].density(1.0) != pytest.approx(
        density.segments[1].density(1.0)
    )


def test_li_fit_tail_needs_mean_above_lower_edge():
    gd = GroupedData((Bin(0, 10, 90, 5.0), Bin(10, 14, 10, 10.0)))
    with pytest.raises(EstimationError, match="tail"):
        li_fit(gd, unbounded_tail=True)


def test_li_quantile_uniform_fallback():
    gd = GroupedData((Bin(0, 1, 100, 0.5),))
    density = li_fit(gd)
    est = li_quantile(density, cumulative(gd), 0.4)
    assert est.x_hat == pytest.approx(0.4, abs=1e-15)
    assert est.f_hat == pytest.approx(1.0, abs=1e-15)


def test_li_quantile_tail_derived_example():
    gd = GroupedData((Bin(0, 10, 90, 5.0), Bin(10, 14, 10, 12.0)))
    density = li_fit(gd, unbounded_tail=True)
    est = li_quantile(density, cumulative(gd), 0.95)
    assert est.x_hat == pytest.approx(10 - 2 * math.log(0.5), abs=1e-12)  # 11.386294...
    assert est.f_hat == pytest.approx(0.025, abs=1e-15)
    # density is the derivative of the tail CDF: check by finite differences
    h = 1e-6
    dF = (density_cdf(density, est.x_hat + h) - density_cdf(density, est.x_hat - h)) / (2 * h)
    assert dF == pytest.approx(est.f_hat, rel=1e-6)


def test_li_quantile_two_bin_derived_example():
    gd = GroupedData((Bin(0, 2, 60, 1.2), Bin(2, 4, 40, 3.0)))
    density = li_fit(gd)
    est = li_quantile(density, cumulative(gd), 0.3)
    root = (-0.12 + math.sqrt(0.1224)) / 0.18
    assert est.x_hat == pytest.approx(root, abs=1e-12)
    assert est.x_hat == pytest.approx(1.27698, abs=1e-5)
    assert est.f_hat == pytest.approx(0.12 + 0.18 * root, abs=1e-12)
    assert est.f_hat == pytest.approx(0.349857, abs=1e-6)
    assert density_cdf(density, est.x_hat) == pytest.approx(0.3, abs=1e-10)


def test_li_degenerates_to_histogram_with_midpoint_means():
    rng = np.random.default_rng(5)
    edges = np.cumsum(rng.uniform(0.5, 2.0, size=7)) - 1.0
    freqs = rng.integers(5, 50, size=6).astype(float)
    bins = tuple(
        Bin(edges[i], edges[i + 1], freqs[i], 0.5 * (edges[i] + edges[i + 1]))
        for i in range(6)
    )
    gd = GroupedData(bins)
    density = li_fit(gd)
    cum = cumulative(gd)
    for p in np.linspace(0.03, 0.97, 21):
        est_li = li_quantile(density, cum, float(p))
        est_h = hist_estimate(gd, float(p))
        assert est_li.x_hat == pytest.approx(est_h.x_hat, abs=1e-12)
        assert est_li.f_hat == pytest.approx(est_h.f_hat, abs=1e-12)


# --- frequency polygon ---------------------------------------------------------


def test_fp_fit_breakpoints_and_masses():
    gd = GroupedData((Bin(0, 1, 20), Bin(1, 2, 80)))
    density = fp_fit(gd)
    lowers = [seg.lower for seg in density.segments] + [density.segments[-1].upper]
    assert lowers == pytest.approx([-0.5, 0.5, 1.5, 2.5])
    assert [seg.mass for seg in density.segments] == pytest.approx([0.1, 0.5, 0.4])
    assert sum(seg.mass for seg in density.segments) == pytest.approx(1.0, abs=1e-12)
    # endpoint densities 0, 0.2, 0.8, 0
    assert density.segments[0].density(-0.5) == pytest.approx(0.0, abs=1e-15)
    assert density.segments[0].density(0.5) == pytest.approx(0.2)
    assert density.segments[1].density(1.5) == pytest.approx(0.8)
    assert density.segments[2].density(2.5) == pytest.approx(0.0, abs=1e-15)


def test_fp_fit_single_bin_tent():
    gd = GroupedData((Bin(0, 1, 100),))
    density = fp_fit(gd)
    assert density.support == (-0.5, 1.5)
    assert density.density_at(0.5) == pytest.approx(1.0)
    assert density.density_at(-0.5) == pytest.approx(0.0, abs=1e-15)
    assert density.density_at(1.5) == pytest.approx(0.0, abs=1e-15)


def test_fp_fit_symmetric_two_bins():
    gd = GroupedData((Bin(0, 1, 50), Bin(1, 2, 50)))
    density = fp_fit(gd)
    assert density.density_at(0.5) == pytest.approx(0.5)
    assert density.density_at(1.5 - 1e-12) == pytest.approx(0.5)


def test_fp_fit_rejects_unequal_widths():
    gd = GroupedData((Bin(0, 1, 50), Bin(1, 3, 50)))
    with pytest.raises(ValidationError, match="equal bin widths"):
        fp_fit(gd)


def test_fp_quantile_examples():
    gd = GroupedData((Bin(0, 1, 20), Bin(1, 2, 80)))
    density = fp_fit(gd)
    est = fp_quantile(density, 0.1)
    assert est.x_hat == pytest.approx(0.5, abs=1e-12)
    assert est.f_hat == pytest.approx(0.2, abs=1e-12)
    est = fp_quantile(density, 0.6)
    assert density_cdf(density, est.x_hat) == pytest.approx(0.6, abs=1e-10)

    tent = fp_fit(GroupedData((Bin(0, 1, 100),)))
    est = fp_quantile(tent, 0.5)
    assert est.x_hat == pytest.approx(0.5, abs=1e-12)
    assert est.f_hat == pytest.approx(1.0, abs=1e-12)


def test_fp_mass_is_one_for_random_equal_width_data():
    rng = np.random.default_rng(9)
    for _ in range(20):
        k = int(rng.integers(1, 30))
        start = float(rng.uniform(-5, 5))
        h = float(rng.uniform(0.1, 3.0))
        freqs = rng.integers(1, 100, size=k).astype(float)
        bins = tuple(Bin(start + i * h, start + (i + 1) * h, freqs[i]) for i in range(k))
        density = fp_fit(GroupedData(bins))
        mass = sum(seg.mass for seg in density.segments)
        assert abs(mass - 1.0) < 1e-12


# --- shared properties ----------------------------------------------------------


def _random_grouped(rng, equal_widths=False, with_means=False, J=None):
    J = J or int(rng.integers(2, 11))
    if equal_widths:
        h = float(rng.uniform(0.2, 2.0))
        widths = np.full(J, h)
    else:
        widths = rng.uniform(0.2, 2.0, size=J)
    start = float(rng.uniform(-4, 4))
    edges = np.concatenate([[start], start + np.cumsum(widths)])
    freqs = rng.integers(1, 100, size=J).astype(float)
    bins = []
    for i in range(J):
        mean = None
        if with_means:
            # keep strictly inside the middle third so the fit is valid
            mid = 0.5 * (edges[i] + edges[i + 1])
            mean = mid + float(rng.uniform(-0.9, 0.9)) * widths[i] / 6.0
        bins.append(Bin(float(edges[i]), float(edges[i + 1]), freqs[i], mean))
    return GroupedData(tuple(bins))


def test_monotonicity_of_quantiles_all_methods():
    rng = np.random.default_rng(21)
    ps = np.linspace(0.01, 0.99, 99)
    for _ in range(10):
        gd_any = _random_grouped(rng, with_means=True)
        gd_eq = _random_grouped(rng, equal_widths=True)
        hist_x = [hist_estimate(gd_any, float(p)).x_hat for p in ps]
        assert all(a <= b + 1e-12 for a, b in zip(hist_x, hist_x[1:]))
        density = li_fit(gd_any, unbounded_tail=bool(rng.integers(2)))
        cum = cumulative(gd_any)
        li_x = [li_quantile(density, cum, float(p)).x_hat for p in ps]
        assert all(a <= b + 1e-12 for a, b in zip(li_x, li_x[1:]))
        fp_density = fp_fit(gd_eq)
        fp_x = [fp_quantile(fp_density, float(p)).x_hat for p in ps]
        assert all(a <= b + 1e-12 for a, b in zip(fp_x, fp_x[1:]))


def test_inversion_consistency_against_numeric_cdf():
    rng = np.random.default_rng(42)
    ps = np.linspace(0.01, 0.99, 99)
    for _ in range(5):
        gd = _random_grouped(rng, with_means=True)
        density = li_fit(gd, unbounded_tail=bool(rng.integers(2)))
        cum = cumulative(gd)
        for p in ps:
            est = li_quantile(density, cum, float(p))
            assert abs(density_cdf(density, est.x_hat) - p) < 1e-8
        gd_eq = _random_grouped(rng, equal_widths=True)
        fp_density = fp_fit(gd_eq)
        for p in ps:
            est = fp_quantile(fp_density, float(p))
            assert abs(density_cdf(fp_density, est.x_hat) - p) < 1e-8
        gd_any = _random_grouped(rng)
        for p in ps:
            est = hist_estimate(gd_any, float(p))
            assert abs(hist_cdf(gd_any, est.x_hat) - p) < 1e-8


def test_uniform_recovery_all_methods():
    # 10 equal bins over [0, 1] with equal counts and midpoint means
    bins = tuple(
        Bin(i / 10, (i + 1) / 10, 100.0, (i + 0.5) / 10) for i in range(10)
    )
    gd = GroupedData(bins)
    density_li = li_fit(gd)
    density_fp = fp_fit(gd)
    cum = cumulative(gd)
    for p in [i / 10 for i in range(1, 10)]:
        assert hist_estimate(gd, p).x_hat == pytest.approx(p, abs=1e-9)
        assert li_quantile(density_li, cum, p).x_hat == pytest.approx(p, abs=1e-9)
        assert fp_quantile(density_fp, p).x_hat == pytest.approx(p, abs=1e-9)

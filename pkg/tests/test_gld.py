import math

import numpy as np
import pytest

from histci import (
    Bin,
    BinningPolicy,
    EstimationError,
    FitConfig,
    GldParams,
    GroupedData,
    Method,
    Normal,
    ValidationError,
    bin_sample,
    empirical_percentiles,
    fit_percentile_matching,
    gld_density_at_p,
    gld_estimate,
    gld_quantile,
    gld_quantile_density,
    sample,
)


def test_gld_quantile_uniform_cases():
    params = GldParams(0, 1, 1, 1)  # uniform on [-1, 1]
    assert gld_quantile(params, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert gld_quantile(params, 0.75) == pytest.approx(0.5, abs=1e-15)
    params = GldParams(2, 0.5, 1, 1)
    assert gld_quantile(params, 0.75) == pytest.approx(3.0, abs=1e-15)


def test_gld_density_uniform_cases():
    params = GldParams(0, 1, 1, 1)
    for p in (0.1, 0.5, 0.9):
        assert gld_density_at_p(params, p) == pytest.approx(0.5)
    params = GldParams(0, 2, 1, 1)
    assert gld_density_at_p(params, 0.3) == pytest.approx(1.0)


def test_gld_density_matches_finite_difference():
    params = GldParams(0, 1, 0.1, 0.1)
    h = 1e-6
    fd = (gld_quantile(params, 0.5 + h) - gld_quantile(params, 0.5 - h)) / (2 * h)
    assert gld_quantile_density(params, 0.5) == pytest.approx(fd, rel=1e-5)


def test_gld_reciprocal_identity_on_grid():
    shapes = (-1.2, -0.5, 0.1, 0.5, 1.0, 2.0, 4.0)
    ps = np.linspace(0.01, 0.99, 99)
    for a in shapes:
        for b in shapes:
            params = GldParams(0.3, 1.7, a, b)
            for p in ps[::7]:
                q = gld_quantile_density(params, float(p))
                f = gld_density_at_p(params, float(p))
                assert abs(f * q - 1.0) < 1e-12


def test_gld_log_limit_handles_tiny_shapes():
    params = GldParams(0, 1, 1e-12, 1e-12)  # logistic limit
    assert gld_quantile(params, 0.5) == pytest.approx(0.0, abs=1e-12)
    assert gld_quantile(params, 0.75) == pytest.approx(math.log(3), abs=1e-6)


def test_gld_params_invariants():
    with pytest.raises(ValidationError):
        GldParams(0, 0, 1, 1)
    with pytest.raises(ValidationError):
        GldParams(0, 1, 0, 1)
    with pytest.raises(ValidationError):
        GldParams(0, 1, 1, 0)


def test_empirical_percentiles_examples():
    gd = GroupedData((Bin(0, 1, 50), Bin(1, 2, 50)))
    pairs = empirical_percentiles(gd)
    assert pairs == ((0.1, 0.2), (0.25, 0.5), (0.5, 1.0), (0.75, 1.5), (0.9, 1.8))
    gd = GroupedData((Bin(0, 2, 30), Bin(2, 5, 70)))
    assert dict(empirical_percentiles(gd))[0.5] == pytest.approx(2.857142857142857)
    gd = GroupedData((Bin(0, 1, 100),))
    pairs = empirical_percentiles(gd)
    for p, x in pairs:
        assert x == pytest.approx(p, abs=1e-15)


def _uniform_grouped(J=10):
    return GroupedData(tuple(Bin(i / J, (i + 1) / J, 100.0) for i in range(J)))


def test_fit_recovers_uniform():
    report = fit_percentile_matching(_uniform_grouped())
    assert report.residual < 1e-10
    assert abs(report.params.alpha - 1) < 0.05
    assert abs(report.params.beta - 1) < 0.05
    assert report.converged
    # the fitted quantile function reproduces the matched percentiles
    for p, x in report.matched_percentiles:
        assert gld_quantile(report.params, p) == pytest.approx(x, abs=1e-6)


def test_fit_single_bin_is_degenerate():
    with pytest.raises(EstimationError, match="two"):
        fit_percentile_matching(GroupedData((Bin(0, 1, 100),)))


def test_fit_normal_large_sample():
    rng = np.random.default_rng(123)
    xs = sample(Normal(0, 1), 10**5, rng)
    gd = bin_sample(xs, BinningPolicy(count=30))
    report = fit_percentile_matching(gd)
    assert abs(gld_quantile(report.params, 0.5)) < 0.02
    f_med = gld_density_at_p(report.params, 0.5)
    assert abs(f_med - 1 / math.sqrt(2 * math.pi)) < 0.02
    est = gld_estimate(gd, 0.9)
    assert abs(est.x_hat - 1.2816) < 0.05


def test_gld_estimate_uniform():
    est = gld_estimate(_uniform_grouped(), 0.5)
    assert est.method is Method.GLD
    assert est.x_hat == pytest.approx(0.5, abs=1e-3)
    assert est.f_hat == pytest.approx(1.0, abs=1e-2)


def test_gld_estimate_is_deterministic():
    a = gld_estimate(_uniform_grouped(), 0.5)
    b = gld_estimate(_uniform_grouped(), 0.5)
    assert a.x_hat == b.x_hat and a.f_hat == b.f_hat


def test_fit_shift_and_scale_equivariance():
    rng = np.random.default_rng(77)
    xs = sample(Normal(3, 2), 20_000, rng)
    gd = bin_sample(xs, BinningPolicy(count=16))
    base = fit_percentile_matching(gd)

    shift = 3.7
    gd_shift = GroupedData(
        tuple(Bin(b.lower + shift, b.upper + shift, b.freq) for b in gd.bins)
    )
    shifted = fit_percentile_matching(gd_shift)
    assert shifted.params.lmbda == pytest.approx(base.params.lmbda + shift, abs=1e-6)
    assert shifted.params.alpha == pytest.approx(base.params.alpha, abs=1e-6)
    assert shifted.params.beta == pytest.approx(base.params.beta, abs=1e-6)
    assert shifted.residual == pytest.approx(base.residual, rel=1e-6, abs=1e-12)
    for p in (0.2, 0.5, 0.8):
        assert gld_quantile(shifted.params, p) == pytest.approx(
            gld_quantile(base.params, p) + shift, abs=1e-6
        )

    scale = 2.5
    gd_scale = GroupedData(
        tuple(Bin(b.lower * scale, b.upper * scale, b.freq) for b in gd.bins)
    )
    scaled = fit_percentile_matching(gd_scale)
    for p in (0.2, 0.5, 0.8):
        assert gld_quantile(scaled.params, p) == pytest.approx(
            gld_quantile(base.params, p) * scale, rel=1e-5
        )


def test_fit_gradient_agrees_with_central_differences():
    gd = _uniform_grouped()
    report = fit_percentile_matching(gd)
    pts = report.matched_percentiles

    def objective(theta):
        params = GldParams(*theta)
        return sum((gld_quantile(params, p) - x) ** 2 for p, x in pts)

    theta = [report.params.lmbda, report.params.eta, report.params.alpha, report.params.beta]
    grad = []
    for i in range(4):
        h = 1e-6 * max(1.0, abs(theta[i]))
        up = list(theta)
        dn = list(theta)
        up[i] += h
        dn[i] -= h
        grad.append((objective(up) - objective(dn)) / (2 * h))
    # At a converged least-squares solution every component is ~0 on the
    # scale of the objective's curvature.
    assert max(abs(g) for g in grad) < 1e-4


def test_fit_config_round_trip():
    config = FitConfig(tol=1e-9, max_iterations=50)
    doc = config.to_dict()
    again = FitConfig.from_dict(doc)
    assert again.tol == config.tol
    assert again.max_iterations == 50
    assert again.shape_starts == config.shape_starts
    with pytest.raises(ValidationError, match="unknown fit config"):
        FitConfig.from_dict({"bogus": 1})


def test_fit_monotone_quantile_function():
    report = fit_percentile_matching(_uniform_grouped())
    ps = np.linspace(0.01, 0.99, 99)
    values = [gld_quantile(report.params, float(p)) for p in ps]
    assert all(b > a for a, b in zip(values, values[1:]))

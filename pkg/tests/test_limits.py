import numpy as np
import pytest

from pathwalk import WalkParameters, initial_spec
from pathwalk.limits import (
    LimitMixture,
    c_coefficient,
    growing_start_check,
    kolmogorov_distance,
    ks_sweep,
    scaled_cdf,
    uniform_tail_integral,
)
from pathwalk.timeavg import time_averaged


def test_c_coefficient_examples():
    assert c_coefficient(WalkParameters(10, 0.3), 0) == pytest.approx(4 / 7, abs=1e-15)
    for i in (0, 1, 7):
        assert c_coefficient(WalkParameters(10, 0.5), i) == 0.0
        assert c_coefficient(WalkParameters(10, 0.7), i) == 0.0
    assert c_coefficient(WalkParameters(10, 0.3), 2) == pytest.approx(0.1749271137026239, abs=1e-15)
    with pytest.raises(ValueError):
        c_coefficient(WalkParameters(10, 0.3), -1)


def test_mixture_cdf():
    mix = LimitMixture(0.25)
    assert mix.cdf(-0.1) == 0.0
    assert mix.cdf(0.0) == 0.25
    assert mix.cdf(1.0) == 1.0
    assert mix.cdf(2.0) == 1.0
    a = np.linspace(0.01, 1, 50)
    np.testing.assert_allclose(np.diff(mix.cdf(a)), 0.75 * np.diff(a), atol=1e-15)
    with pytest.raises(ValueError):
        LimitMixture(1.5)


def test_scaled_cdf_examples():
    params = WalkParameters(20, 0.3)
    pbar = time_averaged(params, initial_spec(params, 0))
    assert scaled_cdf(pbar, 0.0) == pbar.masses[0]
    grid = np.arange(1, 99) / 99
    values = scaled_cdf(pbar, grid)
    assert np.all(np.diff(values) >= 0)
    assert scaled_cdf(pbar, 1.0) == pytest.approx(1 - pbar.masses[-1], abs=1e-10)
    for a in (-0.01, 1.01):
        with pytest.raises(ValueError):
            scaled_cdf(pbar, a)


def test_scaled_cdf_exact_cutoffs():
    params = WalkParameters(100, 0.3)
    pbar = time_averaged(params, initial_spec(params, 0))
    cum = np.cumsum(pbar.masses)
    # 0.29 * 100 evaluates to 28.999999999999996
    assert scaled_cdf(pbar, 0.29) == cum[29]
    assert scaled_cdf(pbar, 0.57) == cum[57]
    assert scaled_cdf(pbar, 0.289) == cum[28]


def test_scaled_cdf_uniform_at_half():
    params = WalkParameters(2000, 0.5)
    pbar = time_averaged(params, initial_spec(params, 0))
    assert abs(scaled_cdf(pbar, 0.5) - 0.5) < 0.02


def test_kolmogorov_distance_grid():
    params = WalkParameters(8, 0.3)
    pbar = time_averaged(params, initial_spec(params, 0))
    mix = LimitMixture(c_coefficient(params, 0))
    a = np.arange(1, 9) / 9
    expected = np.max(np.abs(scaled_cdf(pbar, a) - mix.cdf(a)))
    assert kolmogorov_distance(pbar, mix, 9) == expected
    with pytest.raises(ValueError):
        kolmogorov_distance(pbar, mix, 1)


def test_kolmogorov_distance_examples():
    d = ks_sweep(0.5, lambda n: 0, [1000, 2000, 4000], 0.0)
    assert d[-1] < 0.02 and d[0] > d[1] > d[2]
    d = ks_sweep(0.3, lambda n: 0, [1000, 2000, 4000], 4 / 7)
    assert d[-1] < 0.02 and d[0] > d[1] > d[2]


@pytest.mark.parametrize("p", [0.2, 0.3, 0.4, 0.5, 0.7])
@pytest.mark.parametrize("i", [0, 1, 2, 5])
def test_uniform_tail_integral_identity(p, i):
    params = WalkParameters(10, p)
    assert abs(uniform_tail_integral(params, i) - (1 - c_coefficient(params, i))) < 1e-4


def test_uniform_tail_integral_examples():
    assert uniform_tail_integral(WalkParameters(10, 0.5), 0) == pytest.approx(1.0, abs=1e-12)
    assert uniform_tail_integral(WalkParameters(10, 0.3), 0) == pytest.approx(3 / 7, abs=1e-6)
    assert uniform_tail_integral(WalkParameters(10, 0.3), 2) == pytest.approx(1 - 0.1749271137026239, abs=1e-4)


def test_uniform_tail_integral_coarse_panels_still_close():
    assert uniform_tail_integral(WalkParameters(10, 0.3), 1, panels=256) == pytest.approx(
        1 - c_coefficient(WalkParameters(10, 0.3), 1), abs=1e-4
    )


def test_growing_start_examples():
    ns = [500, 1000, 2000, 4000]
    for rule in (lambda n: int(np.sqrt(n)), lambda n: n // 2):
        report = growing_start_check(0.3, rule, ns)
        assert report.decreasing
        assert report.final < 0.03
        assert report.ns == tuple(ns)
    report = growing_start_check(0.5, lambda n: int(np.sqrt(n)), [1000, 4000])
    assert report.final < 0.02


def test_growing_start_rejects_bad_rule():
    with pytest.raises(ValueError):
        growing_start_check(0.3, lambda n: 0, [100])
    with pytest.raises(ValueError):
        growing_start_check(0.3, lambda n: n + 1, [100])

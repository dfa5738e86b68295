import math

import numpy as np
import pytest

_l2est = pytest.importorskip("_l2est")


def test_kernel_info():
    info = _l2est.kernel_info(2)
    assert info["integral"] == 1.0
    assert info["t"] == 2.0
    assert info["varpi_1d"] == pytest.approx(155.0 / 56.0, rel=1e-15)
    assert _l2est.kappa(2, 0.0) == 1.5
    assert _l2est.kappa(2, 0.75) == -0.5
    assert _l2est.eval_t(2, [0.0], [1.0]) == pytest.approx(0.5, rel=1e-15)


def test_grid_matches_hand_enumeration():
    rows = _l2est.grid(100, 1)
    assert len(rows) == 7
    assert [r["exponents"] for r in rows] == [[k] for k in range(1, 8)]
    assert not rows[0]["small"]
    assert rows[6]["small"]
    assert _l2est.alpha_m(1000) == pytest.approx(0.14476482730108394, rel=1e-14)


def test_estimate_recovers_gaussian_l2_norm():
    data = _l2est.sample_density("gaussian_product", d=1, n=2000, seed=3)
    assert data.shape == (2000, 1)
    result = _l2est.estimate(data, b=2, q=2.0)
    target = math.sqrt(_l2est.density_info("gaussian_product", d=1)["l2_sq"])
    assert result["estimate"] == pytest.approx(target, abs=0.08)
    assert result["branch"] == "selected"

    combined = _l2est.estimate(data, b=2, q=2.0, isotropic=True)
    assert combined["branch"] in ("isotropic", "selected")
    assert combined["estimate"] == pytest.approx(target, abs=0.08)


def test_estimate_rejects_odd_and_small_samples():
    with pytest.raises(Exception):
        _l2est.estimate(np.zeros((101, 1)))
    with pytest.raises(Exception):
        _l2est.estimate(np.zeros((20, 1)))


def test_sampling_is_seeded():
    a = _l2est.sample_density("laplace_product", d=2, n=50, seed=11)
    b = _l2est.sample_density("laplace_product", d=2, n=50, seed=11)
    c = _l2est.sample_density("laplace_product", d=2, n=50, seed=12)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_rate_functions():
    assert _l2est.rate_exponent([1.0], [math.inf]) == 0.5
    assert _l2est.rate_exponent([0.5], [math.inf]) == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert _l2est.rate_exponent_isotropic(0.5, math.inf, 1) == _l2est.rate_exponent(
        [0.5], [math.inf]
    )
    assert _l2est.adaptive_rate([1.0], [math.inf], 100, isotropic_family=True) == pytest.approx(
        0.1, rel=1e-14
    )
    ob = _l2est.optimal_bandwidth([1.0], [math.inf], 1000)
    assert ob["h"][0] == pytest.approx(math.log(1000.0) / 1000.0, rel=1e-14)


def test_density_metadata():
    names = _l2est.density_names()
    assert "gaussian_product" in names and "gaussian_mixture" in names
    info = _l2est.density_info("laplace_product", d=2)
    assert info["l2_sq"] == pytest.approx(0.0625, rel=1e-14)


def test_oracle_star_risk_is_finite():
    v = _l2est.oracle_star_risk("gaussian_product", d=1, m=100, q=2.0, b=2)
    assert v > 0.0
    assert math.isfinite(v)

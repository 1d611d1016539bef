import math

import numpy as np
import pytest

import condinf


def test_three_point_fit():
    r = condinf.fit([1.0, 2.0, 3.0])
    assert r["beta_hat"][0] == pytest.approx(2.0, abs=1e-14)
    assert r["sigma_hat"] ** 2 == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert np.sum(r["ancillary"] ** 2) == pytest.approx(3.0, rel=1e-12)


def test_regression_fit_matches_numpy():
    rng = np.random.default_rng(3)
    X = np.column_stack([np.ones(20), rng.normal(size=20)])
    y = X @ np.array([1.0, -2.0]) + rng.normal(size=20)
    r = condinf.fit(y, X)
    ref = np.linalg.lstsq(X, y, rcond=None)[0]
    assert np.allclose(r["beta_hat"], ref, atol=1e-12)


def test_normal_log_density_and_score():
    z = [-1.0, 0.0, 2.5]
    ld = condinf.log_density("normal", z)
    for v, l in zip(z, ld):
        assert l == pytest.approx(-0.5 * v * v - 0.5 * math.log(2 * math.pi), abs=1e-12)
    assert condinf.score("normal", z) == pytest.approx([-v for v in z], abs=1e-12)


def test_streams_are_reproducible():
    a = condinf.uniforms(5, "rep", 1, 1000)
    b = condinf.uniforms(5, "rep", 1, 1000)
    c = condinf.uniforms(5, "rep", 2, 1000)
    assert a == b
    assert a != c
    z = np.array(condinf.normals(5, "z", 0, 20000))
    assert abs(z.mean()) < 0.05
    assert abs(z.var() - 1.0) < 0.05


def test_normal_score_quantities():
    y = condinf.sample("normal", 30, 1)
    a = condinf.fit(y)["ancillary"]
    q = condinf.theorem1_quantities(a)
    assert q["theta"][0] == pytest.approx(0.0, abs=1e-10)
    assert q["info"][0][0] == pytest.approx(1.0, abs=1e-10)
    assert q["scale_info"] == pytest.approx(2.0, abs=1e-10)
    p = condinf.plugin_quantities(a)
    assert p["source"] != q["source"]


def test_marginal_closed_form():
    y = condinf.sample("normal", 8, 2)
    a = condinf.fit(y)["ancillary"]
    t = [0.0, 0.5, -1.0]
    g = condinf.marginal_g_t(a, t=t)
    s = float(np.sum(a ** 2))
    for tv, gv in zip(t[1:], g[1:]):
        assert gv / g[0] == pytest.approx(((s + 8 * tv * tv) / s) ** -4, rel=1e-8)


def test_npi_with_normal_scores_is_normal_theory():
    y = np.array(condinf.sample("normal", 30, 4)) + 3.0
    r = condinf.fit(y)
    lo, hi = condinf.interval(y, method="npi", dist="normal")
    half = 1.959963984540054 * r["sigma_hat"] / math.sqrt(30)
    assert (hi[0] - lo[0]) / 2 == pytest.approx(half, rel=1e-10)
    assert (hi[0] + lo[0]) / 2 == pytest.approx(r["beta_hat"][0], rel=1e-12)


def test_pi_interval_is_seeded():
    y = condinf.sample("t(5)", 25, 6)
    a = condinf.interval(y, method="pi", seed=9, B=2000)
    b = condinf.interval(y, method="pi", seed=9, B=2000)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert a[0][0] < a[1][0]


def test_minimax_and_bioptimal():
    f = condinf.CmseQuadratic(0.0, 1.0, 0.0)
    g = condinf.CmseQuadratic(0.0, 100.0, 0.1)
    v = condinf.minimax(f, g)
    assert v == pytest.approx(1.0 / 11.0, rel=1e-12)
    assert f(v) == pytest.approx(g(v), abs=1e-12)
    assert condinf.bioptimal(f, g, 1.0, 1.0) == pytest.approx(10.0 / 101.0, rel=1e-12)


def test_errors_are_raised():
    with pytest.raises(condinf.CondinfError):
        condinf.fit([1.0, 1.0, 1.0])
    with pytest.raises(condinf.CondinfError):
        condinf.log_density("nonsense", [0.0])

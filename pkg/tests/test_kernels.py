"""Special-function kernels against scipy/mpmath references, plus
native/python backend parity."""

import numpy as np
import pytest
from scipy import special as sp

from emistat import _kernels as K
from emistat._kernels import _pykernels

BACKENDS = K.available_backends()


@pytest.fixture(params=BACKENDS)
def backend(request):
    K.set_backend(request.param)
    yield request.param
    K.set_backend(BACKENDS[-1])


def test_lgamma_matches_scipy(backend):
    x = np.array([0.05, 0.1, 0.37, 0.5, 0.99, 1.0, 1.5, 2.0, 7.3, 42.0, 250.0, 1e4])
    mine = K.lgamma(x)
    ref = sp.gammaln(x)
    assert np.max(np.abs(mine - ref) / (1.0 + np.abs(ref))) < 1e-13


def test_gammainc_accuracy(backend):
    rng = np.random.default_rng(1)
    for a in (0.25, 0.5, 1.0, 2.5, 7.0, 30.0, 150.0):
        x = np.concatenate([[0.0], rng.uniform(1e-6, 6.0 * a, 2000)])
        p = np.asarray(K.gammainc_p(a, x))
        q = np.asarray(K.gammainc_q(a, x))
        ref_p = sp.gammainc(a, x)
        rel = np.abs(p - ref_p) / np.maximum(ref_p, 1e-280)
        assert np.max(rel[ref_p > 1e-250]) < 1e-12
        assert np.max(np.abs(p + q - 1.0)) < 1e-12
        assert p[0] == 0.0 and q[0] == 1.0


def test_gammainc_monotone_in_x(backend):
    x = np.linspace(0.0, 40.0, 5000)
    p = np.asarray(K.gammainc_p(2.5, x))
    assert np.all(np.diff(p) >= 0.0)
    assert p[-1] == pytest.approx(1.0, abs=1e-12)  # true tail ~8e-16 at x=40


def test_betainc_matches_scipy(backend):
    rng = np.random.default_rng(2)
    for a, b in ((0.5, 0.5), (2.0, 3.0), (26.0, 0.5), (0.5, 25.0), (10.0, 10.0)):
        x = rng.uniform(0.0, 1.0, 500)
        mine = np.asarray(K.betainc(a, b, x))
        ref = sp.betainc(a, b, x)
        assert np.max(np.abs(mine - ref)) < 1e-13
    assert K.betainc(2.0, 3.0, 0.0) == 0.0
    assert K.betainc(2.0, 3.0, 1.0) == 1.0


def test_norm_cdf_absolute_and_tail_relative(backend):
    z = np.linspace(-37.0, 37.0, 3001)
    mine = np.asarray(K.norm_cdf(z))
    ref = sp.ndtr(z)
    assert np.max(np.abs(mine - ref)) < 1e-14
    sf = np.asarray(K.norm_sf(z))
    rel = np.abs(sf - sp.ndtr(-z)) / sp.ndtr(-z)
    assert np.max(rel) < 1e-12


def test_norm_ppf_absolute_error_with_mpmath(backend):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 400

    def implied_z_error(q, z):
        zq = mpmath.mpf(z)
        phi = mpmath.exp(-zq * zq / 2) / mpmath.sqrt(2 * mpmath.pi)
        return abs(float((mpmath.ncdf(zq) - mpmath.mpf(q)) / phi))

    grid = np.concatenate([np.geomspace(1e-300, 0.49, 80), [0.5],
                           1.0 - np.geomspace(1.1e-16, 0.49, 80)])
    worst = max(implied_z_error(float(q), K.norm_ppf(float(q))) for q in grid)
    assert worst < 1e-14


def test_norm_ppf_edges(backend):
    assert K.norm_ppf(0.0) == -np.inf
    assert K.norm_ppf(1.0) == np.inf
    assert np.isnan(K.norm_ppf(-0.1))
    assert np.isnan(K.norm_ppf(1.1))
    assert K.norm_ppf(0.5) == 0.0


def test_norm_roundtrip(backend):
    q = np.linspace(0.001, 0.999, 999)
    back = np.asarray(K.norm_cdf(K.norm_ppf(q)))
    assert np.max(np.abs(back - q)) < 1e-13


def test_sum_kernels_match_direct(backend):
    rng = np.random.default_rng(3)
    logx = np.log(rng.uniform(0.2, 40.0, 5000))
    x = np.exp(logx)
    assert K.power_sum(logx, 1.7, 0.4) == pytest.approx(
        np.exp(1.7 * (logx - 0.4)).sum(), rel=1e-12)
    assert K.softplus_sum(logx, 2.2, 0.1) == pytest.approx(
        np.logaddexp(0.0, 2.2 * (logx - 0.1)).sum(), rel=1e-12)
    assert K.log_shift_sum(x, 1.3) == pytest.approx(
        np.log(x + 1.3).sum(), rel=1e-12)


def test_scalar_in_scalar_out(backend):
    assert isinstance(K.norm_ppf(0.25), float)
    assert isinstance(K.norm_cdf(1.0), float)
    assert isinstance(K.gammainc_p(2.0, 1.0), float)
    assert isinstance(K.lgamma(4.5), float)
    out = K.norm_ppf(np.array([0.2, 0.8]))
    assert isinstance(out, np.ndarray) and out.shape == (2,)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels unavailable")
def test_backend_parity():
    native = K._BACKENDS["native"]
    rng = np.random.default_rng(4)
    x = rng.uniform(0.0, 40.0, 3000)
    q = rng.uniform(1e-12, 1.0 - 1e-12, 3000)
    z = rng.normal(0.0, 4.0, 3000)
    logx = np.log(rng.uniform(0.1, 60.0, 3000))
    assert np.max(np.abs(native.norm_ppf(q) - _pykernels.norm_ppf(q))) < 1e-12
    assert np.max(np.abs(native.norm_cdf(z) - _pykernels.norm_cdf(z))) < 1e-13
    for a in (0.5, 3.7):
        assert np.max(np.abs(np.asarray(native.gammainc_p(a, x))
                             - np.asarray(_pykernels.gammainc_p(a, x)))) < 1e-13
    assert native.power_sum(logx, 1.3, 0.2) == pytest.approx(
        _pykernels.power_sum(logx, 1.3, 0.2), rel=1e-13)
    assert native.softplus_sum(logx, 1.3, 0.2) == pytest.approx(
        _pykernels.softplus_sum(logx, 1.3, 0.2), rel=1e-13)
    assert native.log_shift_sum(np.exp(logx), 0.7) == pytest.approx(
        _pykernels.log_shift_sum(np.exp(logx), 0.7), rel=1e-13)

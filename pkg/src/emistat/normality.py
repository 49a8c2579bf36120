"""Lognormality checks: seven normality tests applied to log-transformed
cross-sections, plus quantile-quantile and rank-size plot data.

Test ids and the published approximations used for the p-values:
  SW   Shapiro-Wilk, Royston's algorithm (weights and normalizing
       transform), valid for 3 <= n <= 5000.
  SF   Shapiro-Francia, order-statistic correlation with Royston's
       normalizing transform of log(1 - W').
  LL   Lilliefors (Kolmogorov-Smirnov with estimated mean/sd),
       Dallal-Wilkinson p-value with the Stephens branch above p = 0.1.
  CVM  Cramer-von Mises, Stephens' modified statistic for the
       estimated-parameter case and its piecewise exponential p-value.
  AD   Anderson-Darling, same source as CVM.
  DP   D'Agostino-Pearson omnibus: squared skewness and kurtosis
       z transforms summed against chi-square(2); n >= 20.
  JB   Jarque-Bera against chi-square(2).

Rejection flags are strict comparisons: reject at level a iff p < a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .distributions import ParamVector, sf as dist_sf

TEST_IDS = ("SW", "SF", "LL", "CVM", "AD", "DP", "JB")

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class TestReport:
    test: str
    statistic: float
    p_value: float
    reject_05: bool
    reject_01: bool


@dataclass(frozen=True)
class PlotSeries:
    """Plot-ready point pairs plus reference line/curve."""

    kind: str                      # "qq" or "rank_size"
    points: tuple                  # ((x, y), ...)
    reference: tuple               # qq: (intercept, slope); rank_size: point pairs


def _chi2_sf_2(x: float) -> float:
    # survival of chi-square with 2 degrees of freedom
    return math.exp(-0.5 * x)


def _normal_scores(n: int) -> np.ndarray:
    i = np.arange(1, n + 1)
    return np.asarray(_k.norm_ppf((i - 0.375) / (n + 0.25)))


def _moments(y: np.ndarray):
    d = y - y.mean()
    m2 = float(np.mean(d * d))
    m3 = float(np.mean(d ** 3))
    m4 = float(np.mean(d ** 4))
    return m2, m3, m4


def _sw(y: np.ndarray):
    n = y.size
    ys = np.sort(y)
    ssd = float(np.sum((ys - ys.mean()) ** 2))
    if ssd <= 0.0:
        raise ValueError("zero range: test statistic undefined for constant data")
    if n == 3:
        a = np.array([-math.sqrt(0.5), 0.0, math.sqrt(0.5)])
    else:
        m = _normal_scores(n)
        ssm = float(np.sum(m * m))
        c = m / math.sqrt(ssm)
        u = 1.0 / math.sqrt(n)
        a_n = (c[-1] + 0.221157 * u - 0.147981 * u ** 2 - 2.071190 * u ** 3
               + 4.434685 * u ** 4 - 2.706056 * u ** 5)
        a = np.empty(n)
        if n <= 5:
            phi = (ssm - 2.0 * m[-1] ** 2) / (1.0 - 2.0 * a_n ** 2)
            a[1:-1] = m[1:-1] / math.sqrt(phi)
            a[-1] = a_n
            a[0] = -a_n
        else:
            a_n1 = (c[-2] + 0.042981 * u - 0.293762 * u ** 2 - 1.752461 * u ** 3
                    + 5.682633 * u ** 4 - 3.582633 * u ** 5)
            phi = ((ssm - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2)
                   / (1.0 - 2.0 * a_n ** 2 - 2.0 * a_n1 ** 2))
            a[2:-2] = m[2:-2] / math.sqrt(phi)
            a[-1], a[-2] = a_n, a_n1
            a[0], a[1] = -a_n, -a_n1
    w = float(np.dot(a, ys)) ** 2 / ssd
    w = min(w, 1.0)

    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        p = min(max(p, 0.0), 1.0)
        return w, p
    one_minus = max(1.0 - w, 1e-300)
    if n <= 11:
        g = -2.273 + 0.459 * n
        mu = 0.5440 - 0.39978 * n + 0.025054 * n ** 2 - 0.0006714 * n ** 3
        s = math.exp(1.3822 - 0.77857 * n + 0.062767 * n ** 2 - 0.0020322 * n ** 3)
        arg = g - math.log(one_minus)
        if arg <= 0.0:
            return w, 0.0
        z = (-math.log(arg) - mu) / s
    else:
        u = math.log(n)
        mu = -1.5861 - 0.31082 * u - 0.083751 * u ** 2 + 0.0038915 * u ** 3
        s = math.exp(-0.4803 - 0.082676 * u + 0.0030302 * u ** 2)
        z = (math.log(one_minus) - mu) / s
    return w, float(_k.norm_sf(z))


def _sf_test(y: np.ndarray):
    n = y.size
    ys = np.sort(y)
    m = _normal_scores(n)
    r = np.corrcoef(ys, m)[0, 1]
    w = float(r * r)
    u = math.log(n)
    v = math.log(u)
    mu = -1.2725 + 1.0521 * (v - u)
    s = 1.0308 - 0.26758 * (v + 2.0 / u)
    z = (math.log(max(1.0 - w, 1e-300)) - mu) / s
    return w, float(_k.norm_sf(z))


def _z_scores(y: np.ndarray) -> np.ndarray:
    sd = float(np.std(y, ddof=1))
    if sd <= 0.0:
        raise ValueError("zero range: test statistic undefined for constant data")
    z = np.asarray(_k.norm_cdf((np.sort(y) - y.mean()) / sd))
    return np.clip(z, 1e-300, 1.0 - 1e-16)


def _ll(y: np.ndarray):
    n = y.size
    z = _z_scores(y)
    i = np.arange(1, n + 1)
    d_plus = float(np.max(i / n - z))
    d_minus = float(np.max(z - (i - 1) / n))
    k = max(d_plus, d_minus)
    # Dallal-Wilkinson approximation; Stephens branch when it exceeds 0.1
    if n > 100:
        kd = k * (n / 100.0) ** 0.49
        nd = 100.0
    else:
        kd, nd = k, float(n)
    p = math.exp(-7.01256 * kd * kd * (nd + 2.78019)
                 + 2.99587 * kd * math.sqrt(nd + 2.78019)
                 - 0.122119 + 0.974598 / math.sqrt(nd) + 1.67997 / nd)
    if p > 0.1:
        kk = (math.sqrt(n) - 0.01 + 0.85 / math.sqrt(n)) * k
        if kk <= 0.302:
            p = 1.0
        elif kk <= 0.5:
            p = 2.76773 - 19.828315 * kk + 80.709644 * kk ** 2 - 138.55152 * kk ** 3 + 81.541484 * kk ** 4
        elif kk <= 0.9:
            p = -4.901232 + 40.662806 * kk - 97.490286 * kk ** 2 + 94.029866 * kk ** 3 - 32.355711 * kk ** 4
        elif kk <= 1.31:
            p = 6.198765 - 19.558097 * kk + 23.186922 * kk ** 2 - 12.234627 * kk ** 3 + 2.423045 * kk ** 4
        else:
            p = 0.0
    return k, min(max(p, 0.0), 1.0)


def _cvm(y: np.ndarray):
    n = y.size
    z = _z_scores(y)
    i = np.arange(1, n + 1)
    w = 1.0 / (12.0 * n) + float(np.sum((z - (2.0 * i - 1.0) / (2.0 * n)) ** 2))
    ww = (1.0 + 0.5 / n) * w
    if ww < 0.0275:
        p = 1.0 - math.exp(-13.953 + 775.5 * ww - 12542.61 * ww ** 2)
    elif ww < 0.051:
        p = 1.0 - math.exp(-5.903 + 179.546 * ww - 1515.29 * ww ** 2)
    elif ww < 0.092:
        p = math.exp(0.886 - 31.62 * ww + 10.897 * ww ** 2)
    elif ww < 1.1:
        p = math.exp(1.111 - 34.242 * ww + 12.832 * ww ** 2)
    else:
        p = 7.37e-10
    return w, min(max(p, 0.0), 1.0)


def _ad(y: np.ndarray):
    n = y.size
    z = _z_scores(y)
    i = np.arange(1, n + 1)
    a2 = -n - float(np.mean((2.0 * i - 1.0) * (np.log(z) + np.log1p(-z[::-1]))))
    aa = (1.0 + 0.75 / n + 2.25 / (n * n)) * a2
    if aa < 0.2:
        p = 1.0 - math.exp(-13.436 + 101.14 * aa - 223.73 * aa ** 2)
    elif aa < 0.34:
        p = 1.0 - math.exp(-8.318 + 42.796 * aa - 59.938 * aa ** 2)
    elif aa < 0.6:
        p = math.exp(0.9177 - 4.279 * aa - 1.38 * aa ** 2)
    elif aa < 10.0:
        p = math.exp(1.2937 - 5.709 * aa + 0.0186 * aa ** 2)
    else:
        p = 3.7e-24
    return a2, min(max(p, 0.0), 1.0)


def _skewness_z(n: int, m2: float, m3: float) -> float:
    b1 = m3 / m2 ** 1.5
    y = b1 * math.sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)))
    beta2 = (3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0)
             / ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0)))
    w2 = -1.0 + math.sqrt(2.0 * (beta2 - 1.0))
    delta = 1.0 / math.sqrt(0.5 * math.log(w2))
    alpha = math.sqrt(2.0 / (w2 - 1.0))
    if y == 0.0:
        y = 1e-300
    t = y / alpha
    return delta * math.log(t + math.sqrt(t * t + 1.0))


def _kurtosis_z(n: int, m2: float, m4: float) -> float:
    b2 = m4 / (m2 * m2)
    e = 3.0 * (n - 1.0) / (n + 1.0)
    var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) ** 2 * (n + 3.0) * (n + 5.0))
    x = (b2 - e) / math.sqrt(var)
    sqrt_b1 = (6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0))
               * math.sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0))))
    a = 6.0 + 8.0 / sqrt_b1 * (2.0 / sqrt_b1 + math.sqrt(1.0 + 4.0 / (sqrt_b1 * sqrt_b1)))
    term1 = 1.0 - 2.0 / (9.0 * a)
    denom = 1.0 + x * math.sqrt(2.0 / (a - 4.0))
    term2 = math.copysign(abs((1.0 - 2.0 / a) / denom) ** (1.0 / 3.0), denom)
    return (term1 - term2) / math.sqrt(2.0 / (9.0 * a))


def _dp(y: np.ndarray):
    n = y.size
    m2, m3, m4 = _moments(y)
    if m2 <= 0.0:
        raise ValueError("zero range: test statistic undefined for constant data")
    z1 = _skewness_z(n, m2, m3)
    z2 = _kurtosis_z(n, m2, m4)
    k2 = z1 * z1 + z2 * z2
    return k2, _chi2_sf_2(k2)


def _jb(y: np.ndarray):
    n = y.size
    m2, m3, m4 = _moments(y)
    if m2 <= 0.0:
        raise ValueError("zero range: test statistic undefined for constant data")
    s = m3 / m2 ** 1.5
    k = m4 / (m2 * m2)
    jb = n * (s * s / 6.0 + (k - 3.0) ** 2 / 24.0)
    return jb, _chi2_sf_2(jb)


_TESTS = {"SW": _sw, "SF": _sf_test, "LL": _ll, "CVM": _cvm, "AD": _ad,
          "DP": _dp, "JB": _jb}

_RANGES = {"SW": (3, 5000), "SF": (8, 5000), "LL": (8, None), "CVM": (8, None),
           "AD": (8, None), "DP": (20, None), "JB": (8, None)}


def test_normality(test: str, logged: np.ndarray) -> TestReport:
    """Run one normality test on already-log-transformed data."""
    if test not in _TESTS:
        raise ValueError(f"unknown test {test!r}; expected one of {TEST_IDS}")
    y = np.asarray(logged, dtype=np.float64).ravel()
    lo, hi = _RANGES[test]
    if y.size < lo or (hi is not None and y.size > hi):
        hi_txt = str(hi) if hi is not None else "inf"
        raise ValueError(f"{test} requires n in [{lo}, {hi_txt}], have {y.size}")
    stat, p = _TESTS[test](y)
    return TestReport(test=test, statistic=float(stat), p_value=float(p),
                      reject_05=p < 0.05, reject_01=p < 0.01)


def test_lognormality(test: str, data) -> TestReport:
    """Run one lognormality test: the chosen normality test on log(data)."""
    x = np.asarray(data, dtype=np.float64).ravel()
    if np.any(x <= 0.0) or np.any(~np.isfinite(x)):
        raise ValueError("data must be strictly positive and finite")
    return test_normality(test, np.log(x))


def qq_plot_data(data) -> PlotSeries:
    """Normal quantile-quantile pairs for log(data).

    x coordinates are standard-normal quantiles at offset plotting positions
    (i - 3/8)/(n + 1/4); the reference line passes through the quartile pair,
    reported as (intercept, slope).
    """
    x = np.asarray(data, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("empty data")
    if np.any(x <= 0.0) or np.any(~np.isfinite(x)):
        raise ValueError("data must be strictly positive and finite")
    y = np.sort(np.log(x))
    n = y.size
    q = _normal_scores(n)
    if n >= 2:
        y1, y3 = np.percentile(y, [25.0, 75.0])
        z1, z3 = np.asarray(_k.norm_ppf(np.array([0.25, 0.75])))
        slope = (y3 - y1) / (z3 - z1)
        intercept = y1 - slope * z1
    else:
        intercept, slope = float(y[0]), 0.0
    points = tuple((float(a), float(b)) for a, b in zip(q, y))
    return PlotSeries(kind="qq", points=points, reference=(float(intercept), float(slope)))


def rank_size_plot_data(data, fitted: ParamVector, curve_points: int = 200) -> PlotSeries:
    """Empirical and fitted rank-size pairs (survival scaled by N + 1).

    Empirical points are (x_(i), N + 1 - i); the reference curve samples
    (x, (N + 1) * S(x)) for the fitted lognormal on a log-spaced grid,
    intended for log-log axes.
    """
    if fitted.model != "LOG":
        raise ValueError(f"rank-size reference requires a LOG fit, got {fitted.model}")
    x = np.asarray(data, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("empty data")
    if np.any(x <= 0.0) or np.any(~np.isfinite(x)):
        raise ValueError("data must be strictly positive and finite")
    xs = np.sort(x)
    n = xs.size
    ranks = n + 1.0 - np.arange(1, n + 1)
    points = tuple((float(a), float(b)) for a, b in zip(xs, ranks))
    grid = np.geomspace(xs[0], xs[-1], curve_points)
    curve = (n + 1.0) * np.asarray(dist_sf(fitted, grid))
    reference = tuple((float(a), float(b)) for a, b in zip(grid, curve))
    return PlotSeries(kind="rank_size", points=points, reference=reference)

"""Simple-regression machinery shared by the growth and trend modules.

Centered formulas keep the estimates exact to machine precision on exact
relationships.  Variance estimators: classical OLS, heteroskedasticity-
consistent (HC1), and the Bartlett-kernel autocorrelation-robust sandwich
whose lag-0 special case is White's HC0 estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k


@dataclass(frozen=True)
class SimpleOLS:
    alpha: float
    beta: float
    se_alpha: float
    se_beta: float
    r_squared: float
    resid: np.ndarray
    x: np.ndarray
    n: int


def t_sf(t: float, df: int) -> float:
    """Upper tail P(T > t) of Student's t."""
    if not math.isfinite(t):
        return 0.0 if t > 0 else 1.0
    p_two = _k.betainc(df / 2.0, 0.5, df / (df + t * t))
    return 0.5 * p_two if t >= 0.0 else 1.0 - 0.5 * p_two


def t_test_two_sided(t: float, df: int) -> float:
    if not math.isfinite(t):
        return 0.0
    return float(_k.betainc(df / 2.0, 0.5, df / (df + t * t)))


def f_sf(f: float, d1: int, d2: int) -> float:
    """Upper tail of the F distribution."""
    if f <= 0.0:
        return 1.0
    return float(_k.betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f)))


def simple_ols(x, y) -> SimpleOLS:
    """OLS of y on an intercept and a single regressor."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    n = x.size
    if n != y.size:
        raise ValueError("x and y must have the same length")
    if n < 3:
        raise ValueError(f"need at least 3 observations, have {n}")
    xbar = float(np.mean(x))
    ybar = float(np.mean(y))
    dx = x - xbar
    sxx = float(np.dot(dx, dx))
    if sxx <= 0.0:
        raise ValueError("degenerate regressor: zero variance")
    beta = float(np.dot(dx, y - ybar)) / sxx
    alpha = ybar - beta * xbar
    resid = y - alpha - beta * x
    rss = float(np.dot(resid, resid))
    tss = float(np.dot(y - ybar, y - ybar))
    s2 = rss / (n - 2)
    se_beta = math.sqrt(s2 / sxx)
    se_alpha = math.sqrt(s2 * (1.0 / n + xbar * xbar / sxx))
    r2 = 1.0 - rss / tss if tss > 0.0 else 1.0
    return SimpleOLS(alpha=alpha, beta=beta, se_alpha=se_alpha, se_beta=se_beta,
                     r_squared=min(max(r2, 0.0), 1.0), resid=resid, x=x, n=n)


def _bread(x: np.ndarray):
    n = x.size
    xtx = np.array([[float(n), float(x.sum())],
                    [float(x.sum()), float(np.dot(x, x))]])
    return np.linalg.inv(xtx)


def sandwich_se(fit: SimpleOLS, lag: int = 0, hc1: bool = False):
    """(se_alpha, se_beta) from a robust sandwich covariance.

    lag = 0 gives White's HC0 (or HC1 with the n/(n-2) correction);
    lag > 0 adds Bartlett-weighted autocovariance terms of the scores,
    i.e. the usual autocorrelation-robust estimator for time-ordered data.
    """
    if lag < 0:
        raise ValueError("lag must be non-negative")
    n = fit.n
    u = np.column_stack([fit.resid, fit.resid * fit.x])  # scores per row
    meat = u.T @ u
    for j in range(1, min(lag, n - 1) + 1):
        w = 1.0 - j / (lag + 1.0)
        gamma = u[j:].T @ u[:-j]
        meat += w * (gamma + gamma.T)
    if hc1:
        meat *= n / (n - 2.0)
    bread = _bread(fit.x)
    cov = bread @ meat @ bread
    var = np.diag(cov)
    if np.any(var < 0.0):
        return (float("nan"), float("nan"))
    return (float(math.sqrt(var[0])), float(math.sqrt(var[1])))


def bartlett_default_lag(n: int) -> int:
    """Common automatic truncation lag floor(4 (n/100)^(2/9))."""
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))

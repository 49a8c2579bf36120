"""The six candidate size distributions on (0, inf).

Models and parameter order:
  EXP  exponential            (sigma,)
  FSK  Fisk / log-logistic    (beta, sigma)
  GAM  gamma                  (beta, sigma)
  LOG  lognormal              (mu, sigma)
  PA2  Lomax (Pareto II)      (alpha, sigma)
  WEI  Weibull                (alpha, sigma)

All scale/shape parameters must be positive; LOG's mu is unrestricted.
Densities are evaluated in log space first, so log_pdf stays finite for
extreme arguments where pdf underflows.  Quantiles are exact inverses where
a closed form exists; the gamma quantile is a bracketed, Newton-accelerated
numeric inverse of its CDF.  Sampling is inverse-transform from a single
seeded uniform stream, so one seed drives any model reproducibly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k

MODEL_IDS = ("EXP", "FSK", "GAM", "LOG", "PA2", "WEI")

PARAM_NAMES = {
    "EXP": ("sigma",),
    "FSK": ("beta", "sigma"),
    "GAM": ("beta", "sigma"),
    "LOG": ("mu", "sigma"),
    "PA2": ("alpha", "sigma"),
    "WEI": ("alpha", "sigma"),
}

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ParamVector:
    """A model id plus its ordered parameter values."""

    model: str
    theta: tuple[float, ...]

    def __post_init__(self):
        if self.model not in MODEL_IDS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODEL_IDS}")
        names = PARAM_NAMES[self.model]
        theta = tuple(float(t) for t in self.theta)
        if len(theta) != len(names):
            raise ValueError(f"{self.model} takes {len(names)} parameters "
                             f"{names}, got {len(theta)}")
        for name, value in zip(names, theta):
            if not math.isfinite(value):
                raise ValueError(f"{self.model} parameter {name} must be finite, got {value}")
            if not (self.model == "LOG" and name == "mu") and value <= 0.0:
                raise ValueError(f"{self.model} parameter {name} must be positive, got {value}")
        object.__setattr__(self, "theta", theta)

    @property
    def names(self) -> tuple[str, ...]:
        return PARAM_NAMES[self.model]


def _check_positive(x):
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(~np.isfinite(arr)):
        raise ValueError("x must be strictly positive and finite")
    return arr


def _check_prob(q):
    arr = np.asarray(q, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0) or np.any(~np.isfinite(arr)):
        raise ValueError("q must lie strictly inside (0, 1)")
    return arr


def _wrap(x, out):
    if np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0):
        return float(np.asarray(out).ravel()[0])
    return np.asarray(out)


# -- log densities ----------------------------------------------------------

def _log_pdf(p: ParamVector, x: np.ndarray) -> np.ndarray:
    m = p.model
    logx = np.log(x)
    if m == "EXP":
        (sigma,) = p.theta
        return -math.log(sigma) - x / sigma
    if m == "FSK":
        beta, sigma = p.theta
        t = beta * (logx - math.log(sigma))
        return math.log(beta) - logx + t - 2.0 * np.logaddexp(0.0, t)
    if m == "GAM":
        beta, sigma = p.theta
        return (-_k.lgamma(beta) - beta * math.log(sigma)
                + (beta - 1.0) * logx - x / sigma)
    if m == "LOG":
        mu, sigma = p.theta
        z = (logx - mu) / sigma
        return -logx - math.log(sigma) - _LOG_SQRT_2PI - 0.5 * z * z
    if m == "PA2":
        alpha, sigma = p.theta
        return (math.log(alpha) + alpha * math.log(sigma)
                - (alpha + 1.0) * np.log(x + sigma))
    if m == "WEI":
        alpha, sigma = p.theta
        t = alpha * (logx - math.log(sigma))
        with np.errstate(over="ignore"):
            return math.log(alpha) - logx + t - np.exp(t)
    raise AssertionError(m)


def log_pdf(p: ParamVector, x):
    """Log density at x > 0; finite wherever the density is representable."""
    return _wrap(x, _log_pdf(p, _check_positive(x)))


def pdf(p: ParamVector, x):
    """Density at x > 0."""
    return _wrap(x, np.exp(_log_pdf(p, _check_positive(x))))


# -- distribution functions -------------------------------------------------

def _cdf(p: ParamVector, x: np.ndarray) -> np.ndarray:
    m = p.model
    if m == "EXP":
        (sigma,) = p.theta
        return -np.expm1(-x / sigma)
    if m == "FSK":
        beta, sigma = p.theta
        t = beta * (np.log(x) - math.log(sigma))
        with np.errstate(over="ignore"):
            return np.where(t >= 0.0, 1.0 / (1.0 + np.exp(-t)),
                            np.exp(t) / (1.0 + np.exp(np.minimum(t, 0.0))))
    if m == "GAM":
        beta, sigma = p.theta
        return np.asarray(_k.gammainc_p(beta, np.asarray(x / sigma)))
    if m == "LOG":
        mu, sigma = p.theta
        return np.asarray(_k.norm_cdf(np.asarray((np.log(x) - mu) / sigma)))
    if m == "PA2":
        alpha, sigma = p.theta
        return -np.expm1(-alpha * np.log1p(x / sigma))
    if m == "WEI":
        alpha, sigma = p.theta
        with np.errstate(over="ignore"):
            return -np.expm1(-np.exp(alpha * (np.log(x) - math.log(sigma))))
    raise AssertionError(m)


def _sf(p: ParamVector, x: np.ndarray) -> np.ndarray:
    m = p.model
    if m == "EXP":
        (sigma,) = p.theta
        return np.exp(-x / sigma)
    if m == "FSK":
        beta, sigma = p.theta
        t = beta * (np.log(x) - math.log(sigma))
        with np.errstate(over="ignore"):
            return np.where(t <= 0.0, 1.0 / (1.0 + np.exp(t)),
                            np.exp(-t) / (1.0 + np.exp(np.minimum(-t, 0.0))))
    if m == "GAM":
        beta, sigma = p.theta
        return np.asarray(_k.gammainc_q(beta, np.asarray(x / sigma)))
    if m == "LOG":
        mu, sigma = p.theta
        return np.asarray(_k.norm_sf(np.asarray((np.log(x) - mu) / sigma)))
    if m == "PA2":
        alpha, sigma = p.theta
        return np.exp(-alpha * np.log1p(x / sigma))
    if m == "WEI":
        alpha, sigma = p.theta
        with np.errstate(over="ignore"):
            return np.exp(-np.exp(alpha * (np.log(x) - math.log(sigma))))
    raise AssertionError(m)


def cdf(p: ParamVector, x):
    """Distribution function at x > 0."""
    return _wrap(x, _cdf(p, _check_positive(x)))


def sf(p: ParamVector, x):
    """Survival function 1 - F(x), accurate in the upper tail."""
    return _wrap(x, _sf(p, _check_positive(x)))


# -- quantiles ---------------------------------------------------------------

def _gamma_quantile(beta: float, q: np.ndarray) -> np.ndarray:
    """Inverse of the regularized lower incomplete gamma in its x argument.

    Bracketed Newton iteration from a Wilson-Hilferty start; the bracket
    guarantees convergence, Newton gives the rate.
    """
    z = np.asarray(_k.norm_ppf(q), dtype=np.float64)
    c = 1.0 - 1.0 / (9.0 * beta) + z / (3.0 * math.sqrt(beta))
    y = beta * np.maximum(c, 0.01) ** 3
    small = q < 0.01
    if np.any(small):
        # leading-order inverse of P(a, y) ~ y^a / Gamma(a+1) near zero
        ys = np.exp((np.log(np.where(small, q, 0.5)) + _k.lgamma(beta + 1.0)) / beta)
        y = np.where(small, ys, y)
    y = np.maximum(y, 1e-300)

    lo = np.zeros_like(y)
    hi = np.full_like(y, np.inf)
    lga = _k.lgamma(beta)
    for _ in range(100):
        f = np.asarray(_k.gammainc_p(beta, y)) - q
        lo = np.where(f < 0.0, y, lo)
        hi = np.where(f > 0.0, y, hi)
        if np.all(np.abs(f) <= 1e-13):
            break
        with np.errstate(over="ignore", under="ignore"):
            dens = np.exp((beta - 1.0) * np.log(y) - y - lga)
        step = np.where(dens > 0.0, f / np.where(dens > 0.0, dens, 1.0), np.nan)
        y_new = y - step
        # fall back to bisection (or bracket expansion) when Newton leaves
        # the bracket or stalls
        bad = ~np.isfinite(y_new) | (y_new <= lo) | (y_new >= hi)
        mid = np.where(np.isinf(hi), y * 2.0, 0.5 * (lo + hi))
        y = np.where(bad, mid, y_new)
    return y


def _quantile(p: ParamVector, q: np.ndarray) -> np.ndarray:
    m = p.model
    if m == "EXP":
        (sigma,) = p.theta
        return -sigma * np.log1p(-q)
    if m == "FSK":
        beta, sigma = p.theta
        return sigma * np.exp((np.log(q) - np.log1p(-q)) / beta)
    if m == "GAM":
        beta, sigma = p.theta
        return sigma * _gamma_quantile(beta, q)
    if m == "LOG":
        mu, sigma = p.theta
        return np.exp(mu + sigma * np.asarray(_k.norm_ppf(q)))
    if m == "PA2":
        alpha, sigma = p.theta
        return sigma * np.expm1(-np.log1p(-q) / alpha)
    if m == "WEI":
        alpha, sigma = p.theta
        return sigma * np.exp(np.log(-np.log1p(-q)) / alpha)
    raise AssertionError(m)


def quantile(p: ParamVector, q):
    """Quantile function at q in (0, 1)."""
    return _wrap(q, _quantile(p, _check_prob(q)))


def sample(p: ParamVector, n: int, seed: int):
    """n inverse-transform draws, deterministic per seed."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    np.clip(u, 1e-300, 1.0 - 1e-16, out=u)
    return _quantile(p, u)

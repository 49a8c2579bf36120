"""Proportionate-growth analysis of year-over-year emissions.

Four regression specifications relate one year's emissions to the previous
year's, each with the null hypothesis under which growth is independent of
size:

  M1  log(S_t) on log(S_{t-1});        null beta = 1
  M2  S_t/S_{t-1} on (S_t+S_{t-1})/2;  null beta = 0
  M3  S_t/S_{t-1} on S_{t-1};          null beta = 0
  M4  log(S_t/S_{t-1}) on S_{t-1};     null beta = 0

M2's regressor is the arithmetic midpoint by construction, endogeneity and
all; the equation is estimated as written rather than corrected.
P-values are two-sided t tests with n - 2 degrees of freedom on plain OLS
standard errors; heteroskedasticity-consistent errors are available behind
the robust flag for sensitivity analysis.

``simulate_panel`` generates the multiplicative process those regressions
describe: S_t = S_{t-1} * exp(eps) with i.i.d. Gaussian log-shocks, whose
cross-sections become lognormal as the shocks accumulate.  It serves as the
test oracle for the estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from ._regression import sandwich_se, simple_ols, t_test_two_sided
from .distributions import ParamVector, _quantile
from .panel import EmissionsPanel

METHOD_IDS = ("M1", "M2", "M3", "M4")

_NULLS = {"M1": 1.0, "M2": 0.0, "M3": 0.0, "M4": 0.0}


@dataclass(frozen=True)
class GrowthSample:
    """Paired country emissions for two years."""

    countries: tuple[str, ...]
    start: np.ndarray    # S_{t-1}
    end: np.ndarray      # S_t
    year_from: int
    year_to: int

    @property
    def n(self) -> int:
        return len(self.countries)


@dataclass(frozen=True)
class GibratFit:
    method: str
    alpha: float
    beta: float
    se_beta: float
    null_value: float
    p_value: float
    n: int


def build_growth_sample(panel: EmissionsPanel, year_from: int, year_to: int) -> GrowthSample:
    """Pair countries present (hence positive) in both years."""
    i_from = panel.year_index(year_from)
    i_to = panel.year_index(year_to)
    a = panel.values[:, i_from]
    b = panel.values[:, i_to]
    keep = ~np.isnan(a) & ~np.isnan(b)
    n = int(keep.sum())
    if n < 3:
        raise ValueError(f"only {n} countries present in both {year_from} and "
                         f"{year_to}; need at least 3")
    countries = tuple(c for c, k in zip(panel.countries, keep) if k)
    return GrowthSample(countries=countries, start=a[keep].copy(), end=b[keep].copy(),
                        year_from=int(year_from), year_to=int(year_to))


def fit_gibrat(method: str, sample: GrowthSample, robust: bool = False) -> GibratFit:
    """OLS fit of one growth specification with its null-hypothesis test."""
    if method not in METHOD_IDS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHOD_IDS}")
    s0, s1 = sample.start, sample.end
    if method == "M1":
        x, y = np.log(s0), np.log(s1)
    elif method == "M2":
        x, y = 0.5 * (s1 + s0), s1 / s0
    elif method == "M3":
        x, y = s0, s1 / s0
    else:
        x, y = s0, np.log(s1 / s0)
    fit = simple_ols(x, y)
    se_beta = fit.se_beta
    if robust:
        _, se_beta = sandwich_se(fit, lag=0, hc1=True)
    null = _NULLS[method]
    t = (fit.beta - null) / se_beta
    p = t_test_two_sided(t, fit.n - 2)
    return GibratFit(method=method, alpha=fit.alpha, beta=fit.beta,
                     se_beta=se_beta, null_value=null, p_value=p, n=fit.n)


def simulate_panel(n_countries: int, n_years: int, initial, shock_sd: float,
                   seed: int) -> EmissionsPanel:
    """Multiplicative-growth panel: S_t = S_{t-1} * exp(N(0, shock_sd^2)).

    ``initial`` is either a ParamVector (level draws for year 1) or a positive
    constant.  shock_sd = 0 yields constant trajectories.  Deterministic per
    seed; one uniform stream drives initials and shocks.
    """
    if n_years < 2:
        raise ValueError("need at least 2 years")
    if n_countries < 1:
        raise ValueError("need at least 1 country")
    if shock_sd < 0.0:
        raise ValueError("shock_sd must be non-negative")
    rng = np.random.default_rng(seed)

    if isinstance(initial, ParamVector):
        u = np.clip(rng.random(n_countries), 1e-300, 1.0 - 1e-16)
        levels = _quantile(initial, u)
    else:
        value = float(initial)
        if value <= 0.0 or not math.isfinite(value):
            raise ValueError("constant initial level must be positive and finite")
        levels = np.full(n_countries, value)

    values = np.empty((n_countries, n_years))
    values[:, 0] = levels
    for t in range(1, n_years):
        u = np.clip(rng.random(n_countries), 1e-300, 1.0 - 1e-16)
        shocks = shock_sd * np.asarray(_k.norm_ppf(u))
        values[:, t] = values[:, t - 1] * np.exp(shocks)

    digits = len(str(n_countries))
    countries = tuple(f"C{i + 1:0{digits}d}" for i in range(n_countries))
    return EmissionsPanel(countries, tuple(range(1, n_years + 1)), values)

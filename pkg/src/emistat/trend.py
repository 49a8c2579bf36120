"""Linear time trends of the yearly lognormal parameter estimates.

Fits estimate = alpha + beta * year by OLS and reports both classical and
autocorrelation-robust (Bartlett-kernel sandwich) standard errors, the R
squared, and the global F test.  The robust default lag is the common
floor(4 (n/100)^(2/9)) rule; at lag 0 the sandwich reduces to White's HC0
estimator, not the classical one.  Point forecasts extrapolate the line.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._regression import bartlett_default_lag, f_sf, sandwich_se, simple_ols


@dataclass(frozen=True)
class TrendModel:
    response: str          # "mu" or "sigma" (label only)
    alpha: float
    beta: float
    se_alpha_ols: float
    se_beta_ols: float
    se_alpha_hac: float
    se_beta_hac: float
    r_squared: float
    f_p_value: float
    n: int
    hac_lag: int


def fit_trend(series, response: str, hac_lag: int | None = None) -> TrendModel:
    """Fit a parameter-versus-year line.

    series: iterable of (year, estimate) pairs, at least 3 distinct years.
    hac_lag: Bartlett truncation lag; defaults to floor(4 (n/100)^(2/9)).
    """
    if response not in ("mu", "sigma"):
        raise ValueError(f"response must be 'mu' or 'sigma', got {response!r}")
    pairs = [(float(year), float(value)) for year, value in series]
    years = [p[0] for p in pairs]
    if len(set(years)) < 3:
        raise ValueError(f"need at least 3 distinct years, have {len(set(years))}")
    fit = simple_ols(years, [p[1] for p in pairs])
    lag = bartlett_default_lag(fit.n) if hac_lag is None else int(hac_lag)
    se_a_hac, se_b_hac = sandwich_se(fit, lag=lag)
    if fit.se_beta > 0.0:
        t_beta = fit.beta / fit.se_beta
        f_stat = t_beta * t_beta
    else:
        f_stat = float("inf")  # exact fit
    return TrendModel(response=response, alpha=fit.alpha, beta=fit.beta,
                      se_alpha_ols=fit.se_alpha, se_beta_ols=fit.se_beta,
                      se_alpha_hac=se_a_hac, se_beta_hac=se_b_hac,
                      r_squared=fit.r_squared,
                      f_p_value=f_sf(f_stat, 1, fit.n - 2),
                      n=fit.n, hac_lag=lag)


def predict(model: TrendModel, year: int) -> float:
    """Point prediction alpha + beta * year."""
    return model.alpha + model.beta * float(year)

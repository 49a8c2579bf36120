"""Maximum-likelihood fitting of the six size models plus AIC ranking.

The lognormal and exponential estimates are closed-form (log-moment and
sample-mean respectively).  The other four models are maximized numerically
with a derivative-free simplex descent on the negative log-likelihood in
log-transformed parameter space, which enforces positivity without a
constrained optimizer.  Standard errors come from the inverse observed
information (central-difference Hessian at the optimum).

The Lomax likelihood is monotone in its shape parameter on light-tailed
data; the search is capped at alpha = 1e6 and such fits carry a boundary
flag but still report their information criteria, keeping six-way model
comparisons total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .distributions import MODEL_IDS, ParamVector

_SHAPE_CAP = 1e6          # Lomax alpha search cap
_SIMPLEX_TOL = 1e-10      # relative simplex diameter at convergence
_MAX_EVALS = 4000
_RESTARTS = 3
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class FitResult:
    """One model fitted to one cross-section."""

    model: str
    params: ParamVector
    se: tuple[float, ...]
    loglik: float
    aic: float
    bic: float
    hqc: float
    n: int
    converged: bool
    boundary: bool
    sample_id: tuple  # identity of the fitted data, for ranking safety


@dataclass(frozen=True)
class ModelRanking:
    """AIC differences and support groups for one six-model comparison."""

    models: tuple[str, ...]
    delta: dict
    group: dict
    best: str
    boundary: dict


class _Stats:
    """Sufficient statistics shared by the likelihood evaluations."""

    def __init__(self, data):
        x = np.asarray(data, dtype=np.float64).ravel()
        if x.size < 3:
            raise ValueError(f"need at least 3 observations, have {x.size}")
        if np.any(x <= 0.0) or np.any(~np.isfinite(x)):
            raise ValueError("data must be strictly positive and finite")
        self.x = x
        self.logx = np.log(x)
        self.n = x.size
        self.sx = float(x.sum())
        self.slx = float(self.logx.sum())
        self.slx2 = float((self.logx * self.logx).sum())

    @property
    def sample_id(self):
        return (self.n, self.sx, self.slx)


def _nll(model: str, theta, st: _Stats) -> float:
    n = st.n
    if model == "EXP":
        (sigma,) = theta
        return n * math.log(sigma) + st.sx / sigma
    if model == "GAM":
        beta, sigma = theta
        return (n * _k.lgamma(beta) + n * beta * math.log(sigma)
                - (beta - 1.0) * st.slx + st.sx / sigma)
    if model == "LOG":
        mu, sigma = theta
        ss = st.slx2 - 2.0 * mu * st.slx + n * mu * mu
        return n * math.log(sigma) + n * _LOG_SQRT_2PI + st.slx + ss / (2.0 * sigma * sigma)
    if model == "WEI":
        alpha, sigma = theta
        ls = math.log(sigma)
        return -(n * math.log(alpha) - n * ls + (alpha - 1.0) * (st.slx - n * ls)
                 - _k.power_sum(st.logx, alpha, ls))
    if model == "FSK":
        beta, sigma = theta
        ls = math.log(sigma)
        return -(n * math.log(beta) - st.slx + beta * (st.slx - n * ls)
                 - 2.0 * _k.softplus_sum(st.logx, beta, ls))
    if model == "PA2":
        alpha, sigma = theta
        return -(n * math.log(alpha) + n * alpha * math.log(sigma)
                 - (alpha + 1.0) * _k.log_shift_sum(st.x, sigma))
    raise ValueError(f"unknown model {model!r}")


def log_likelihood(params: ParamVector, data) -> float:
    """Sum of log densities of data under params."""
    st = data if isinstance(data, _Stats) else _Stats(data)
    return -_nll(params.model, params.theta, st)


# -- starting values ----------------------------------------------------------

def _start(model: str, st: _Stats):
    x, logx, n = st.x, st.logx, st.n
    mean = st.sx / n
    var = float(np.var(x))
    mlog = st.slx / n
    sdlog = math.sqrt(max(st.slx2 / n - mlog * mlog, 1e-12))
    if model == "EXP":
        return (mean,)
    if model == "LOG":
        return (mlog, sdlog)
    if model == "GAM":
        beta0 = mean * mean / var if var > 0 else 1.0
        beta0 = min(max(beta0, 1e-3), 1e6)
        return (beta0, mean / beta0)
    if model == "WEI":
        # log-log regression of the empirical survival on log x
        order = np.argsort(x)
        p = (np.arange(1, n + 1)) / (n + 1.0)
        yy = np.log(-np.log1p(-p))
        xx = logx[order]
        sxx = float(np.var(xx))
        alpha0 = float(np.cov(xx, yy, bias=True)[0, 1]) / sxx if sxx > 0 else 1.0
        alpha0 = min(max(alpha0, 0.05), 50.0)
        # intercept gives the scale: log sigma = mean(log x) - mean(yy)/alpha
        sigma0 = math.exp(float(np.mean(xx)) - float(np.mean(yy)) / alpha0)
        return (alpha0, max(sigma0, 1e-12))
    if model == "FSK":
        beta0 = math.pi / (math.sqrt(3.0) * max(sdlog, 1e-6))
        return (min(max(beta0, 0.05), 200.0), math.exp(mlog))
    if model == "PA2":
        ratio = var / (mean * mean) if mean > 0 else 2.0
        if ratio > 1.0 + 1e-9:
            alpha0 = 2.0 * ratio / (ratio - 1.0)
        else:
            alpha0 = 1.5
        alpha0 = min(max(alpha0, 0.1), 1e3)
        return (alpha0, mean * max(alpha0 - 1.0, 0.5))
    raise ValueError(f"unknown model {model!r}")


# -- simplex optimizer ---------------------------------------------------------

def _nelder_mead(fn, x0, tol=_SIMPLEX_TOL, max_evals=_MAX_EVALS):
    """Minimize fn over R^d; returns (x, f, converged)."""
    d = len(x0)
    pts = [np.array(x0, dtype=float)]
    for i in range(d):
        step = 0.05 * (1.0 + abs(x0[i]))
        v = pts[0].copy()
        v[i] += step
        pts.append(v)
    vals = [fn(p) for p in pts]
    evals = len(pts)
    while evals < max_evals:
        order = np.argsort(vals)
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        diam = max(np.max(np.abs(p - pts[0])) for p in pts[1:])
        if diam <= tol * (1.0 + np.max(np.abs(pts[0]))):
            return pts[0], vals[0], True
        centroid = np.mean(pts[:-1], axis=0)
        worst = pts[-1]
        refl = centroid + (centroid - worst)
        f_refl = fn(refl)
        evals += 1
        if f_refl < vals[0]:
            expand = centroid + 2.0 * (centroid - worst)
            f_exp = fn(expand)
            evals += 1
            if f_exp < f_refl:
                pts[-1], vals[-1] = expand, f_exp
            else:
                pts[-1], vals[-1] = refl, f_refl
        elif f_refl < vals[-2]:
            pts[-1], vals[-1] = refl, f_refl
        else:
            contract = centroid + 0.5 * (worst - centroid)
            f_con = fn(contract)
            evals += 1
            if f_con < vals[-1]:
                pts[-1], vals[-1] = contract, f_con
            else:
                for i in range(1, d + 1):
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
                    vals[i] = fn(pts[i])
                evals += d
    order = np.argsort(vals)
    return pts[order[0]], vals[order[0]], False


def _to_theta(model: str, y):
    if model == "LOG":
        return (float(y[0]), math.exp(y[1]))
    theta = tuple(math.exp(v) for v in y)
    if model == "PA2":
        return (min(theta[0], _SHAPE_CAP), theta[1])
    return theta


def _from_theta(model: str, theta):
    if model == "LOG":
        return np.array([theta[0], math.log(theta[1])])
    return np.log(np.asarray(theta, dtype=float))


def _fit_numeric(model: str, st: _Stats):
    def objective(y):
        theta = _to_theta(model, y)
        try:
            val = _nll(model, theta, st)
        except (OverflowError, ValueError):
            return float("inf")
        return val if math.isfinite(val) else float("inf")

    y0 = _from_theta(model, _start(model, st))
    best_y, best_f, converged = _nelder_mead(objective, y0)
    attempt = 0
    while not converged and attempt < _RESTARTS:
        attempt += 1
        sign = 1.0 if attempt % 2 else -1.0
        y_try = best_y + sign * 0.3 * attempt
        y, f, converged = _nelder_mead(objective, y_try)
        if f < best_f:
            best_y, best_f = y, f
    theta = _to_theta(model, best_y)
    # the clamped surface is flat above the cap, so the simplex can settle
    # anywhere in its neighbourhood; treat that whole region as the boundary
    boundary = model == "PA2" and theta[0] >= 0.99 * _SHAPE_CAP
    return theta, converged, boundary


def _hessian_se(model: str, theta, st: _Stats):
    """Standard errors from the inverse central-difference Hessian of the NLL."""
    k = len(theta)
    h = [1e-5 * (1.0 + abs(t)) for t in theta]

    def f(t):
        try:
            v = _nll(model, tuple(t), st)
        except (OverflowError, ValueError):
            return float("nan")
        return v

    H = np.empty((k, k))
    f0 = f(theta)
    for i in range(k):
        for j in range(i, k):
            t = np.array(theta, dtype=float)
            if i == j:
                t[i] = theta[i] + h[i]
                fp = f(t)
                t[i] = theta[i] - h[i]
                fm = f(t)
                H[i, i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i])
            else:
                vals = {}
                for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    t = np.array(theta, dtype=float)
                    t[i] = theta[i] + si * h[i]
                    t[j] = theta[j] + sj * h[j]
                    vals[(si, sj)] = f(t)
                H[i, j] = H[j, i] = (vals[(1, 1)] - vals[(1, -1)]
                                     - vals[(-1, 1)] + vals[(-1, -1)]) / (4.0 * h[i] * h[j])
    try:
        cov = np.linalg.inv(H)
        diag = np.diag(cov)
        if np.any(~np.isfinite(diag)) or np.any(diag <= 0.0):
            raise np.linalg.LinAlgError
        return tuple(float(v) for v in np.sqrt(diag))
    except np.linalg.LinAlgError:
        return tuple(float("nan") for _ in range(k))


def fit_mle(model: str, data, method: str = "auto") -> FitResult:
    """Fit one model by maximum likelihood.

    method: "auto" uses closed forms for LOG and EXP and the simplex
    optimizer otherwise; "numeric" forces the optimizer for any model.
    """
    if model not in MODEL_IDS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODEL_IDS}")
    if method not in ("auto", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    st = data if isinstance(data, _Stats) else _Stats(data)

    converged, boundary = True, False
    if method == "auto" and model == "LOG":
        mu = st.slx / st.n
        sigma = math.sqrt(max(st.slx2 / st.n - mu * mu, 0.0))
        if sigma == 0.0:
            raise ValueError("degenerate data: all values equal, lognormal scale is zero")
        theta = (mu, sigma)
    elif method == "auto" and model == "EXP":
        theta = (st.sx / st.n,)
    else:
        theta, converged, boundary = _fit_numeric(model, st)

    loglik = -_nll(model, theta, st)
    k = len(theta)
    n = st.n
    aic = -2.0 * loglik + 2.0 * k
    bic = -2.0 * loglik + k * math.log(n)
    hqc = -2.0 * loglik + 2.0 * k * math.log(math.log(n))
    se = _hessian_se(model, theta, st)
    return FitResult(model=model, params=ParamVector(model, theta), se=se,
                     loglik=float(loglik), aic=float(aic), bic=float(bic),
                     hqc=float(hqc), n=n, converged=converged,
                     boundary=boundary, sample_id=st.sample_id)


def fit_all(data, method: str = "auto") -> list[FitResult]:
    """Fit all six models to the same data."""
    st = _Stats(data)
    return [fit_mle(m, st, method=method) for m in MODEL_IDS]


def rank_models(fits) -> ModelRanking:
    """AIC difference classification of six fits of the same data.

    Groups: best_fit (delta <= 2), little_support (2 < delta <= 20),
    no_support (delta > 20).  Boundary-flagged fits participate but keep
    their flag in the report.
    """
    fits = list(fits)
    models = tuple(f.model for f in fits)
    if sorted(models) != sorted(MODEL_IDS):
        raise ValueError(f"expected one fit per model {MODEL_IDS}, got {models}")
    ids = {f.sample_id for f in fits}
    if len(ids) != 1:
        raise ValueError("fits were not computed on the same data")
    aic_min = min(f.aic for f in fits)
    delta = {f.model: f.aic - aic_min for f in fits}

    def classify(d):
        if d <= 2.0:
            return "best_fit"
        if d <= 20.0:
            return "little_support"
        return "no_support"

    group = {m: classify(d) for m, d in delta.items()}
    best = min(fits, key=lambda f: f.aic).model
    return ModelRanking(models=models, delta=delta, group=group, best=best,
                        boundary={f.model: f.boundary for f in fits})

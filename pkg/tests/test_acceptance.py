"""Acceptance suite.

Criteria 1-9 run from synthetic inputs alone; criterion 10 needs a
user-supplied EDGAR v7.0 CSV export (EMISTAT_EDGAR_CSV or data/edgar.csv)
and is skipped with an explicit message when absent.  Each criterion prints
one pass line (run with -s to stream them).
"""

import math
import time

import numpy as np
import pytest

from emistat.distributions import MODEL_IDS, ParamVector, sample
from emistat.fitting import fit_all, fit_mle, rank_models
from emistat.gibrat import build_growth_sample, fit_gibrat, simulate_panel
from emistat import normality as nt
from emistat.normality import TEST_IDS
from emistat.panel import load_panel, summarize_year
from emistat.policy import (PolicyScenario, allocate_targets, compute_global_ratio,
                            inequality_index, solve_parameter, sort_with_countries)
from emistat.trend import fit_trend, predict

from conftest import edgar_path
from oracles import theil_integral


def report(criterion, text):
    print(f"[acceptance] criterion {criterion}: PASS - {text}")


def test_criterion_1_closed_form_mle_oracle():
    t0 = time.time()
    data = [1.0, math.e, math.e ** 2]
    fit = fit_mle("LOG", data)
    assert fit.params.theta[0] == pytest.approx(1.0, abs=1e-12)
    assert fit.params.theta[1] == pytest.approx(math.sqrt(2.0 / 3.0), abs=1e-12)
    numeric = fit_mle("LOG", data, method="numeric")
    assert numeric.params.theta[0] == pytest.approx(fit.params.theta[0], abs=1e-8)
    assert numeric.params.theta[1] == pytest.approx(fit.params.theta[1], abs=1e-8)
    elapsed = time.time() - t0
    assert elapsed < 1.0
    report(1, f"closed-form and numeric lognormal fits agree ({elapsed:.2f}s)")


def test_criterion_2_fisher_information_rates():
    t0 = time.time()
    sigma, n, reps = 2.4, 2000, 2000
    p = ParamVector("LOG", (2.5, sigma))
    mu_hat = np.empty(reps)
    sd_hat = np.empty(reps)
    for i in range(reps):
        fit = fit_mle("LOG", sample(p, n, seed=1_000_000 + i))
        mu_hat[i], sd_hat[i] = fit.params.theta
    ratio_mu = np.std(mu_hat, ddof=1) / (sigma / math.sqrt(n))
    ratio_sd = np.std(sd_hat, ddof=1) / (sigma / math.sqrt(2 * n))
    elapsed = time.time() - t0
    assert 0.95 <= ratio_mu <= 1.05, ratio_mu
    assert 0.95 <= ratio_sd <= 1.05, ratio_sd
    assert elapsed < 60.0
    report(2, f"sd ratios mu {ratio_mu:.3f}, sigma {ratio_sd:.3f} ({elapsed:.1f}s)")


TRUE_PARAMS = {"EXP": (2.0,), "FSK": (2.2, 3.0), "GAM": (2.5, 1.3),
               "LOG": (2.5, 2.4), "PA2": (2.0, 1.0), "WEI": (1.7, 2.0)}


@pytest.mark.parametrize("model", MODEL_IDS)
def test_criterion_3_model_selection_recovery(model):
    # NOTE: the EXP row of this criterion is not attainable as stated.  EXP
    # is nested inside GAM (shape = 1) and WEI (shape = 1) and is the
    # shape -> inf limit of PA2, so under an EXP truth each rival's
    # likelihood-ratio statistic stays chi-square(1) no matter the sample
    # size, and P(delta_EXP <= 2) = P(max rival LR <= 4) ~ 0.93 (measured
    # 0.926 over 1000 replicates).  The criterion is asserted as written
    # and the EXP case fails honestly; the other five models are not
    # nested in any rival and pass with margin.
    t0 = time.time()
    reps = 100
    p = ParamVector(model, TRUE_PARAMS[model])
    hits = 0
    for i in range(reps):
        data = sample(p, 10_000, seed=2_000_000 + 10_000 * MODEL_IDS.index(model) + i)
        ranking = rank_models(fit_all(data))
        hits += ranking.group[model] == "best_fit"
    rate = hits / reps
    elapsed = time.time() - t0
    assert elapsed < 300.0
    assert rate >= 0.95, (
        f"{model}: best-fit recovery {rate:.2f} < 0.95"
        + (" (structural: AIC cannot consistently hold a true nested submodel"
           " within delta<=2 of its nesting rivals)" if model == "EXP" else ""))
    report(3, f"{model} best-fit recovery {rate:.2f} ({elapsed:.1f}s)")


def test_criterion_4_test_size_calibration():
    t0 = time.time()
    reps, n = 2000, 200
    p = ParamVector("LOG", (2.0, 2.3))
    hits = {t: 0 for t in TEST_IDS}
    for i in range(reps):
        data = sample(p, n, seed=3_000_000 + i)
        for t in TEST_IDS:
            hits[t] += nt.test_lognormality(t, data).reject_05
    rates = {t: h / reps for t, h in hits.items()}
    elapsed = time.time() - t0
    for t, r in rates.items():
        assert 0.03 <= r <= 0.07, f"{t}: {r}"
    assert elapsed < 120.0
    report(4, f"rejection rates {rates} ({elapsed:.1f}s)")


def test_criterion_5_growth_exact_algebra():
    c = 1.03
    rng = np.random.default_rng(8)
    s0 = rng.uniform(0.5, 100.0, 60)
    from emistat.panel import EmissionsPanel
    panel = EmissionsPanel(tuple(f"K{i:02d}" for i in range(60)), (2000, 2001),
                           np.column_stack([s0, c * s0]))
    sample_ = build_growth_sample(panel, 2000, 2001)
    m1 = fit_gibrat("M1", sample_)
    m3 = fit_gibrat("M3", sample_)
    assert m1.beta == pytest.approx(1.0, abs=1e-12)
    assert m1.alpha == pytest.approx(math.log(c), abs=1e-12)
    assert m3.beta == pytest.approx(0.0, abs=1e-12)
    assert m3.alpha == pytest.approx(c, abs=1e-12)
    report(5, "noiseless proportional growth gives exact M1/M3 coefficients")


def test_criterion_6_asymptotic_lognormality():
    t0 = time.time()
    reps = 200
    shock = 0.1
    sw_pass = 0
    var_rows = []
    checkpoints = (20, 50, 100)
    for i in range(reps):
        panel = simulate_panel(500, 100, ParamVector("LOG", (2.0, 1.0)), shock,
                               seed=4_000_000 + i)
        final = panel.values_for_year(100)
        sw_pass += not nt.test_lognormality("SW", final).reject_05
        logs = np.log(panel.values)
        var_rows.append([np.var(logs[:, t - 1]) for t in checkpoints])
    rate = sw_pass / reps
    assert rate >= 0.9, rate
    mean_vars = np.mean(var_rows, axis=0)
    var0 = 1.0  # initial log-variance of the LOG(2, 1) levels
    for t, v in zip(checkpoints, mean_vars):
        expected = var0 + (t - 1) * shock ** 2
        assert abs(v - expected) / expected < 0.05, (t, v, expected)
    elapsed = time.time() - t0
    report(6, f"SW pass rate {rate:.3f}, log-variance growth linear ({elapsed:.1f}s)")


def test_criterion_7_printed_value_scale_law():
    lhs = math.exp(2.7850 - 1.5053)
    rhs = 1.6180 / 0.45
    assert abs(lhs - rhs) / rhs < 0.0025
    base = np.sort(sample(ParamVector("LOG", (2.5, 2.4)), 208, seed=5))
    r_hi = compute_global_ratio(2.7850, 2.3474, base)
    r_lo = compute_global_ratio(1.5053, 2.3474, base)
    assert r_hi / r_lo == pytest.approx(lhs, rel=1e-12)
    report(7, f"scale-law identity holds: {lhs:.4f} vs {rhs:.4f}")


def test_criterion_8_policy_round_trip():
    t0 = time.time()
    rng = np.random.default_rng(9)
    for rep in range(25):
        base = np.sort(sample(ParamVector("LOG", (2.5, 2.4)), 208,
                              seed=5_000_000 + rep))
        r_target = float(rng.uniform(0.1, 3.0))
        sigma_fixed = float(rng.uniform(0.5, 3.0))
        mu = solve_parameter("mu", sigma_fixed, r_target, base)
        assert abs(compute_global_ratio(mu, sigma_fixed, base) - r_target) \
            <= 1e-10 * r_target
        labels = tuple(f"C{i:03d}" for i in range(208))
        scenario = PolicyScenario(1990, 1990, 2030, base, base, labels,
                                  mu, sigma_fixed, r_target)
        targets = allocate_targets(scenario)
        agg = sum(t.target_ratio * t.reference_emissions for t in targets) / base.sum()
        assert agg == pytest.approx(compute_global_ratio(mu, sigma_fixed, base),
                                    rel=1e-12)
    elapsed = time.time() - t0
    assert elapsed < 5.0
    report(8, f"25 random scenarios round-trip to 1e-10 ({elapsed:.2f}s)")


def test_criterion_9_theil_identity():
    rng = np.random.default_rng(10)
    for _ in range(20):
        mu = float(rng.uniform(-1.0, 3.0))
        sigma = float(rng.uniform(0.3, 2.5))
        numeric = theil_integral(mu, sigma)
        assert numeric == pytest.approx(inequality_index(sigma), abs=1e-6)
    report(9, "numeric Theil integral equals sigma^2/2 for 20 random draws")


# -- criterion 10: requires the real EDGAR panel -----------------------------

TABLE_SUMMARY = {
    # year: (n, max, min, mean, sd, skewness, kurtosis)
    1970: (208, 4693.3, 0.0008, 75.0, 365.1, 10.3, 121.8),
    2000: (208, 6004.4, 0.0017, 120.1, 518.7, 8.8, 88.1),
    2019: (208, 11771.1, 0.0020, 176.4, 915.7, 10.6, 124.6),
}
TREND_COEF = {"mu": (-55.3221, 0.0286), "sigma": (27.5025, -0.0124)}
PREDICTIONS = {2025: (2.6418, 2.4094), 2030: (2.7850, 2.3474), 2035: (2.9281, 2.2854)}


@pytest.fixture(scope="module")
def edgar_panel():
    path = edgar_path()
    if path is None:
        pytest.skip("EDGAR v7.0 export not supplied (set EMISTAT_EDGAR_CSV); "
                    "criteria 1-9 constitute the acceptance suite")
    return load_panel(path)


def test_criterion_10_edgar_reproduction(edgar_panel):
    t0 = time.time()
    panel = edgar_panel

    for year, (n, mx, mn, mean, sd, skew, kurt) in TABLE_SUMMARY.items():
        s = summarize_year(panel, year)
        assert s.n == n
        assert s.max == pytest.approx(mx, abs=0.05 + 0.0005 * mx)
        assert s.min == pytest.approx(mn, abs=5e-5)
        assert s.mean == pytest.approx(mean, abs=0.05 + 0.0005 * mean)
        assert s.sd == pytest.approx(sd, abs=0.05 + 0.0005 * sd)
        assert s.skewness == pytest.approx(skew, abs=0.05 + 0.005 * skew)
        assert s.kurtosis == pytest.approx(kurt, rel=0.02)

    years = [y for y in panel.years if 1970 <= y <= 2021]
    assert len(years) == 52
    mu_series, sigma_series = [], []
    rejections = {"SW": 0, "SF": 0, "JB": 0}
    for year in years:
        data = panel.values_for_year(year)
        ranking = rank_models(fit_all(data))
        assert ranking.group["LOG"] == "best_fit", year
        fit = fit_mle("LOG", data)
        mu_series.append((year, fit.params.theta[0]))
        sigma_series.append((year, fit.params.theta[1]))
        for t in rejections:
            rejections[t] += nt.test_lognormality(t, data).reject_05
    assert rejections == {"SW": 0, "SF": 0, "JB": 0}

    models = {"mu": fit_trend(mu_series, "mu"),
              "sigma": fit_trend(sigma_series, "sigma")}
    for resp, (a_ref, b_ref) in TREND_COEF.items():
        m = models[resp]
        assert m.alpha == pytest.approx(a_ref, rel=0.01)
        assert m.beta == pytest.approx(b_ref, rel=0.01)
    for year, (mu_ref, sigma_ref) in PREDICTIONS.items():
        assert predict(models["mu"], year) == pytest.approx(mu_ref, abs=0.02)
        assert predict(models["sigma"], year) == pytest.approx(sigma_ref, abs=0.02)

    base = np.sort(panel.values_for_year(1990))
    sigma_2030 = predict(models["sigma"], 2030)
    mu_t = solve_parameter("mu", sigma_2030, 0.45, base)
    assert mu_t == pytest.approx(1.5053, abs=0.005)

    elapsed = time.time() - t0
    assert elapsed < 300.0
    report(10, f"EDGAR reproduction within stated tolerances ({elapsed:.1f}s)")

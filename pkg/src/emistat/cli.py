"""Command-line pipeline over emissions panels.

Subcommands: summarize, rank, test, gibrat, trend, policy, simulate.
Inputs are CSV panels (long or wide, auto-detected); every command writes
deterministic CSV reports into --out, so identical invocations produce
byte-identical files.  P-value grids additionally emit a small SVG heatmap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import gibrat as gb
from . import normality as nt
from . import policy as pol
from . import trend as tr
from .distributions import MODEL_IDS, ParamVector
from .fitting import fit_all, fit_mle, rank_models
from .panel import EmissionsPanel, convert_carbon_to_co2, load_panel, summarize_year, write_panel
from .reports import (beta_cell, p_value_color, svg_heatmap, write_csv,
                      write_plot_series)

DATASET_KEYS = ("edgar", "gcb", "cdiac")


def _sniff_format(path) -> str:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().lower()
    first = [t.strip() for t in header.split(",")]
    if first[:3] == ["country", "year", "emissions"] and len(first) == 3:
        return "long"
    return "wide"


def _parse_inputs(args) -> dict:
    """--input entries (KEY=PATH or PATH with --dataset) -> {key: path}."""
    inputs = {}
    for entry in args.input or []:
        if "=" in entry:
            key, _, path = entry.partition("=")
            key = key.strip().lower()
        elif args.dataset:
            key, path = args.dataset.lower(), entry
        else:
            raise ValueError(f"--input {entry!r} needs KEY=PATH form or --dataset")
        if key not in DATASET_KEYS:
            raise ValueError(f"unknown dataset key {key!r}; expected one of {DATASET_KEYS}")
        if key in inputs:
            raise ValueError(f"dataset {key!r} given twice")
        inputs[key] = path
    if not inputs:
        raise ValueError("no --input given")
    if args.dataset and args.dataset.lower() not in inputs:
        raise ValueError(f"--dataset {args.dataset!r} does not match any --input")
    if args.dataset:
        inputs = {args.dataset.lower(): inputs[args.dataset.lower()]}
    return inputs


def _load_inputs(args) -> dict:
    """Load, optionally carbon-convert, and year-filter all input panels."""
    convert_keys = ()
    if args.convert_carbon is not None:
        convert_keys = (DATASET_KEYS if args.convert_carbon == "all"
                        else tuple(k.strip().lower() for k in args.convert_carbon.split(",")))
        for key in convert_keys:
            if key not in DATASET_KEYS:
                raise ValueError(f"--convert-carbon: unknown dataset key {key!r}")
    panels = {}
    for key, path in _parse_inputs(args).items():
        form = args.format if args.format != "auto" else _sniff_format(path)
        panel = load_panel(path, format=form)
        if key in convert_keys:
            panel = convert_carbon_to_co2(panel)
        panels[key] = panel
    return panels


def _years_in_range(panel: EmissionsPanel, years_arg) -> list[int]:
    if years_arg is None:
        return list(panel.years)
    lo, hi = years_arg
    return [y for y in panel.years if lo <= y <= hi]


def _parse_years(text):
    if text is None:
        return None
    try:
        lo, _, hi = text.partition(":")
        return (int(lo), int(hi))
    except ValueError:
        raise ValueError(f"--years expects A:B, got {text!r}") from None


def _parse_alpha(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"--alpha expects two levels like 0.05,0.01, got {text!r}")
    loose, strict = float(parts[0]), float(parts[1])
    if not (0.0 < strict < loose < 1.0):
        raise ValueError(f"--alpha levels must satisfy 0 < strict < loose < 1, got {text!r}")
    return loose, strict


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- subcommands ---------------------------------------------------------------

def cmd_summarize(args) -> int:
    out = _outdir(args)
    rows = []
    for key, panel in sorted(_load_inputs(args).items()):
        for year in _years_in_range(panel, args.years):
            s = summarize_year(panel, year)
            rows.append([key, s.year, s.n, s.max, s.min, s.mean, s.sd,
                         s.skewness, s.kurtosis])
    write_csv(out / "summary.csv",
              ["dataset", "year", "n", "max", "min", "mean", "sd", "skewness", "kurtosis"],
              rows)
    return 0


def cmd_rank(args) -> int:
    out = _outdir(args)
    rows = []
    freq: dict = {}
    for key, panel in sorted(_load_inputs(args).items()):
        for year in _years_in_range(panel, args.years):
            fits = fit_all(panel.values_for_year(year))
            ranking = rank_models(fits)
            for f in sorted(fits, key=lambda f: f.model):
                rows.append([key, year, f.model, f.loglik, f.aic, f.bic, f.hqc,
                             ranking.delta[f.model], ranking.group[f.model],
                             f.converged, f.boundary])
                bucket = freq.setdefault((key, f.model), {"best_fit": 0,
                                                          "little_support": 0,
                                                          "no_support": 0})
                bucket[ranking.group[f.model]] += 1
    write_csv(out / "model_ranks.csv",
              ["dataset", "year", "model", "loglik", "aic", "bic", "hqc",
               "delta", "group", "converged", "boundary"],
              rows)
    frows = [[key, model, group, count]
             for (key, model), buckets in sorted(freq.items())
             for group, count in buckets.items()]
    write_csv(out / "rank_frequencies.csv",
              ["dataset", "model", "group", "years"], frows)
    return 0


def cmd_test(args) -> int:
    out = _outdir(args)
    loose, strict = args.alpha
    rows, grid_rows = [], []
    counts: dict = {}
    for key, panel in sorted(_load_inputs(args).items()):
        years = _years_in_range(panel, args.years)
        colors = [[None] * len(years) for _ in nt.TEST_IDS]
        for j, year in enumerate(years):
            data = panel.values_for_year(year)
            for i, test in enumerate(nt.TEST_IDS):
                rep = nt.test_lognormality(test, data)
                rows.append([key, year, test, rep.statistic, rep.p_value,
                             rep.p_value < loose, rep.p_value < strict])
                color = p_value_color(rep.p_value)
                colors[i][j] = color
                grid_rows.append([key, year, test, rep.p_value, color])
                bucket = counts.setdefault((key, test), [0, 0, 0])
                bucket[0] += 1
                bucket[1] += rep.p_value < loose
                bucket[2] += rep.p_value < strict
        if years:
            svg_heatmap(out / f"normality_grid_{key}.svg", list(nt.TEST_IDS),
                        [str(y) for y in years], colors)
            plot_year = args.plot_year if args.plot_year is not None else years[-1]
            if plot_year in years:
                data = panel.values_for_year(plot_year)
                fitted = fit_mle("LOG", data).params
                write_plot_series(out / f"qq_{key}_{plot_year}.csv",
                                  nt.qq_plot_data(data))
                write_plot_series(out / f"rank_size_{key}_{plot_year}.csv",
                                  nt.rank_size_plot_data(data, fitted))
    write_csv(out / "normality.csv",
              ["dataset", "year", "test", "statistic", "p_value",
               f"reject_{loose}", f"reject_{strict}"], rows)
    write_csv(out / "normality_grid.csv",
              ["dataset", "year", "test", "p_value", "color"], grid_rows)
    write_csv(out / "normality_counts.csv",
              ["dataset", "test", "years_total", f"rejected_{loose}", f"rejected_{strict}"],
              [[key, test, *vals] for (key, test), vals in sorted(counts.items())])
    return 0


def cmd_gibrat(args) -> int:
    out = _outdir(args)
    beta_rows, p_rows = [], []
    grids: dict = {}
    for key, panel in sorted(_load_inputs(args).items()):
        years = _years_in_range(panel, args.years)
        periods = []
        colors = [[] for _ in gb.METHOD_IDS]
        for y0, y1 in zip(years, years[1:]):
            period = f"{y0}-{y1}"
            periods.append(period)
            try:
                sample = gb.build_growth_sample(panel, y0, y1)
                fits = [gb.fit_gibrat(m, sample, robust=args.robust)
                        for m in gb.METHOD_IDS]
            except ValueError:
                fits = None
            if fits is None:
                beta_rows.append([period, key, "NA", "NA", "NA", "NA"])
                p_rows.append([period, key, "NA", "NA", "NA", "NA"])
                for i in range(len(gb.METHOD_IDS)):
                    colors[i].append("white")
            else:
                beta_rows.append([period, key] + [beta_cell(f.method, f.beta)
                                                  for f in fits])
                p_rows.append([period, key] + [f.p_value for f in fits])
                for i, f in enumerate(fits):
                    colors[i].append(p_value_color(f.p_value))
        if periods:
            grids[key] = (periods, colors)
    write_csv(out / "growth_beta.csv",
              ["period", "dataset", "M1", "M2", "M3", "M4"], beta_rows)
    write_csv(out / "growth_pvalues.csv",
              ["period", "dataset", "M1", "M2", "M3", "M4"], p_rows)
    for key, (periods, colors) in grids.items():
        svg_heatmap(out / f"growth_grid_{key}.svg", list(gb.METHOD_IDS),
                    periods, colors)
    return 0


def _parameter_series(panel: EmissionsPanel, years):
    mu_series, sigma_series = [], []
    for year in years:
        fit = fit_mle("LOG", panel.values_for_year(year))
        mu_series.append((year, fit.params.theta[0]))
        sigma_series.append((year, fit.params.theta[1]))
    return mu_series, sigma_series


def _parse_predict_years(text):
    try:
        return [int(p.strip()) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ValueError(f"--predict-years expects a comma list of years, got {text!r}") from None


def cmd_trend(args) -> int:
    out = _outdir(args)
    predict_years = _parse_predict_years(args.predict_years)
    coef_rows, pred_rows = [], []
    for key, panel in sorted(_load_inputs(args).items()):
        years = _years_in_range(panel, args.years)
        mu_series, sigma_series = _parameter_series(panel, years)
        models = {"mu": tr.fit_trend(mu_series, "mu"),
                  "sigma": tr.fit_trend(sigma_series, "sigma")}
        for response, m in models.items():
            coef_rows.append([key, response, m.alpha, m.se_alpha_ols, m.se_alpha_hac,
                              m.beta, m.se_beta_ols, m.se_beta_hac, m.r_squared,
                              m.f_p_value, m.n, m.hac_lag])
        base = np.sort(panel.values_for_year(args.base_year))
        for year in predict_years:
            mu_t = tr.predict(models["mu"], year)
            sigma_t = tr.predict(models["sigma"], year)
            ratio = (pol.compute_global_ratio(mu_t, sigma_t, base)
                     if sigma_t > 0.0 else float("nan"))
            pred_rows.append([key, year, mu_t, sigma_t, ratio])
    write_csv(out / "trend_coefficients.csv",
              ["dataset", "response", "alpha", "se_alpha_ols", "se_alpha_hac",
               "beta", "se_beta_ols", "se_beta_hac", "r_squared", "f_p_value",
               "n", "hac_lag"], coef_rows)
    write_csv(out / "trend_predictions.csv",
              ["dataset", "year", "mu", "sigma", "global_ratio"], pred_rows)
    return 0


def cmd_policy(args) -> int:
    out = _outdir(args)
    spec = pol.parse_scenario_file(args.scenario)
    panels = _load_inputs(args)
    key = spec["dataset"] or args.dataset
    if key is None and len(panels) == 1:
        key = next(iter(panels))
    if key not in panels:
        raise ValueError(f"scenario dataset {key!r} not among inputs {sorted(panels)}")
    panel = panels[key]

    base = np.sort(panel.values_for_year(spec["base_year"]))
    ref_countries = panel.countries_for_year(spec["reference_year"])
    ref_values = panel.values_for_year(spec["reference_year"])
    labels, ref = pol.sort_with_countries(ref_countries, ref_values)

    if spec["from_trend"]:
        years = _years_in_range(panel, args.years)
        mu_series, sigma_series = _parameter_series(panel, years)
        series = mu_series if spec["fix"] == "mu" else sigma_series
        model = tr.fit_trend(series, spec["fix"])
        fixed_value = tr.predict(model, spec["target_year"])
    else:
        fixed_value = spec["fixed_value"]

    free = "sigma" if spec["fix"] == "mu" else "mu"
    solved = pol.solve_parameter(free, fixed_value, spec["R_target"], base)
    mu_t, sigma_t = ((fixed_value, solved) if spec["fix"] == "mu"
                     else (solved, fixed_value))

    scenario = pol.PolicyScenario(
        base_year=spec["base_year"], reference_year=spec["reference_year"],
        target_year=spec["target_year"], base_emissions=base,
        reference_emissions=ref, reference_countries=labels,
        mu_t=mu_t, sigma_t=sigma_t, r_target=spec["R_target"])
    targets = pol.allocate_targets(scenario)

    write_csv(out / "targets.csv",
              ["country", "rank", "reference_emissions", "r_i", "group"],
              [[t.country, t.rank, t.reference_emissions, t.target_ratio, t.group]
               for t in targets])
    write_csv(out / "policy_plot.csv", ["rank", "r_i"],
              [[t.rank, t.target_ratio] for t in targets])

    base_sigma = fit_mle("LOG", base).params.theta[1]
    achieved = pol.compute_global_ratio(mu_t, sigma_t, base)
    summary = [
        ("dataset", key),
        ("base_year", spec["base_year"]),
        ("reference_year", spec["reference_year"]),
        ("target_year", spec["target_year"]),
        ("n_countries", len(targets)),
        ("R_target", spec["R_target"]),
        ("R_achieved", achieved),
        ("mu_t", mu_t),
        ("sigma_t", sigma_t),
        ("theil_target", pol.inequality_index(sigma_t)),
        ("theil_base_year", pol.inequality_index(base_sigma)),
        ("inequality_change", pol.inequality_index(sigma_t) - pol.inequality_index(base_sigma)),
        ("low_emission", sum(1 for t in targets if t.group == "low_emission")),
        ("middle_emission", sum(1 for t in targets if t.group == "middle_emission")),
        ("high_emission", sum(1 for t in targets if t.group == "high_emission")),
    ]
    write_csv(out / "scenario_summary.csv", ["key", "value"], summary)
    return 0


def _parse_initial(text):
    if ":" in text:
        model, _, rest = text.partition(":")
        model = model.strip().upper()
        if model not in MODEL_IDS:
            raise ValueError(f"--initial model {model!r} not one of {MODEL_IDS}")
        theta = tuple(float(p) for p in rest.split(","))
        return ParamVector(model, theta)
    return float(text)


def cmd_simulate(args) -> int:
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    panel = gb.simulate_panel(args.countries, args.n_years,
                              _parse_initial(args.initial),
                              args.shock_sd, args.seed)
    write_panel(panel, out)
    return 0


# -- wiring --------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, scenario=False):
    p.add_argument("--input", action="append", metavar="KEY=PATH",
                   help="input panel CSV; repeatable; KEY in edgar|gcb|cdiac")
    p.add_argument("--dataset", help="restrict to one dataset key")
    p.add_argument("--format", choices=("auto", "long", "wide"), default="auto")
    p.add_argument("--years", type=_parse_years, default=None, metavar="A:B")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=_parse_alpha, default=(0.05, 0.01),
                   metavar="LOOSE,STRICT")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--convert-carbon", nargs="?", const="all", default=None,
                   metavar="KEYS", help="convert listed datasets (default all) "
                   "from MtC to MtCO2 at load")
    if scenario:
        p.add_argument("--scenario", required=True, metavar="FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emistat",
        description="Size-distribution analysis of country-level emissions panels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="per-year descriptive statistics")
    _add_common(p)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("rank", help="six-model fits and AIC support groups per year")
    _add_common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("test", help="seven lognormality tests per year")
    _add_common(p)
    p.add_argument("--plot-year", type=int, default=None,
                   help="year for the qq/rank-size plot data (default: last)")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("gibrat", help="year-over-year proportionate-growth regressions")
    _add_common(p)
    p.add_argument("--robust", action="store_true",
                   help="heteroskedasticity-consistent standard errors")
    p.set_defaults(func=cmd_gibrat)

    p = sub.add_parser("trend", help="parameter-versus-year lines and forecasts")
    _add_common(p)
    p.add_argument("--base-year", type=int, default=1990)
    p.add_argument("--predict-years", default="2025,2030,2035")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("policy", help="allocate a global reduction target")
    _add_common(p, scenario=True)
    p.set_defaults(func=cmd_policy)

    p = sub.add_parser("simulate", help="write a synthetic proportionate-growth panel")
    p.add_argument("--countries", type=int, required=True)
    p.add_argument("--n-years", type=int, required=True)
    p.add_argument("--initial", default="LOG:2.0,1.0",
                   help="MODEL:p1,p2 level distribution or a positive constant")
    p.add_argument("--shock-sd", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"emistat: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

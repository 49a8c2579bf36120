"""Command-line pipeline: file outputs, determinism, error handling."""

import csv
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from emistat.cli import main
from emistat.gibrat import simulate_panel
from emistat.distributions import ParamVector
from emistat.panel import load_panel, write_panel


@pytest.fixture(scope="module")
def panel_csv(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("panels")
    panel = simulate_panel(80, 12, ParamVector("LOG", (2.0, 1.8)), 0.08, seed=21)
    path = tmp / "panel.csv"
    write_panel(panel, path)
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_summarize_writes_table(panel_csv, tmp_path):
    out = tmp_path / "rep"
    assert main(["summarize", "--input", f"gcb={panel_csv}", "--out", str(out)]) == 0
    header, rows = read_csv(out / "summary.csv")
    assert header == ["dataset", "year", "n", "max", "min", "mean", "sd",
                      "skewness", "kurtosis"]
    assert len(rows) == 12
    assert rows[0][0] == "gcb" and rows[0][2] == "80"


def test_summarize_empty_year_range(panel_csv, tmp_path):
    out = tmp_path / "rep"
    assert main(["summarize", "--input", f"gcb={panel_csv}",
                 "--years", "3000:3001", "--out", str(out)]) == 0
    _, rows = read_csv(out / "summary.csv")
    assert rows == []


def test_unknown_dataset_key_fails(panel_csv, tmp_path, capsys):
    out = tmp_path / "rep"
    code = main(["summarize", "--input", f"nope={panel_csv}", "--out", str(out)])
    assert code == 1
    assert "unknown dataset key" in capsys.readouterr().err


def test_rank_outputs(panel_csv, tmp_path):
    out = tmp_path / "rep"
    assert main(["rank", "--input", f"gcb={panel_csv}", "--years", "1:3",
                 "--out", str(out)]) == 0
    header, rows = read_csv(out / "model_ranks.csv")
    assert header[:4] == ["dataset", "year", "model", "loglik"]
    assert len(rows) == 3 * 6
    groups = {r[8] for r in rows}
    assert groups <= {"best_fit", "little_support", "no_support"}
    delta_by_year = {}
    for r in rows:
        delta_by_year.setdefault(r[1], []).append(float(r[7]))
    for deltas in delta_by_year.values():
        assert min(deltas) == 0.0
    _, freq_rows = read_csv(out / "rank_frequencies.csv")
    total = sum(int(r[3]) for r in freq_rows)
    assert total == 3 * 6


def test_test_outputs_grid_and_svg(panel_csv, tmp_path):
    out = tmp_path / "rep"
    assert main(["test", "--input", f"gcb={panel_csv}", "--years", "1:6",
                 "--out", str(out)]) == 0
    header, rows = read_csv(out / "normality.csv")
    assert header == ["dataset", "year", "test", "statistic", "p_value",
                      "reject_0.05", "reject_0.01"]
    assert len(rows) == 6 * 7
    for row in rows:
        p = float(row[4])
        assert (row[5] == "true") == (p < 0.05)
        assert (row[6] == "true") == (p < 0.01)
    _, grid = read_csv(out / "normality_grid.csv")
    assert {r[4] for r in grid} <= {"white", "yellow", "red"}
    svg = (out / "normality_grid_gcb.svg").read_text()
    assert svg.startswith("<svg") and "rect" in svg
    _, counts = read_csv(out / "normality_counts.csv")
    assert len(counts) == 7
    # plot data for the last year in range, in x,y,series form
    header, qq = read_csv(out / "qq_gcb_6.csv")
    assert header == ["x", "y", "series"]
    labels = {r[2] for r in qq}
    assert labels == {"points", "reference"}
    assert sum(1 for r in qq if r[2] == "points") == 80
    _, rs = read_csv(out / "rank_size_gcb_6.csv")
    ranks = [float(r[1]) for r in rs if r[2] == "points"]
    assert max(ranks) == 80.0 and min(ranks) == 1.0


def test_gibrat_outputs(panel_csv, tmp_path):
    out = tmp_path / "rep"
    assert main(["gibrat", "--input", f"gcb={panel_csv}", "--out", str(out)]) == 0
    header, rows = read_csv(out / "growth_beta.csv")
    assert header == ["period", "dataset", "M1", "M2", "M3", "M4"]
    assert len(rows) == 11
    assert rows[0][0] == "1-2"
    # M1 printed to 2 decimals, M2-M4 in 1-digit scientific notation
    assert "." in rows[0][2] and len(rows[0][2].split(".")[1]) == 2
    assert "e" in rows[0][3]
    _, ps = read_csv(out / "growth_pvalues.csv")
    for r in ps:
        for cell in r[2:]:
            assert 0.0 <= float(cell) <= 1.0
    assert (out / "growth_grid_gcb.svg").exists()


def test_trend_outputs(panel_csv, tmp_path):
    out = tmp_path / "rep"
    assert main(["trend", "--input", f"gcb={panel_csv}", "--base-year", "1",
                 "--predict-years", "15,20", "--out", str(out)]) == 0
    header, rows = read_csv(out / "trend_coefficients.csv")
    assert [r[1] for r in rows] == ["mu", "sigma"]
    assert float(rows[0][8]) <= 1.0
    header, preds = read_csv(out / "trend_predictions.csv")
    assert header == ["dataset", "year", "mu", "sigma", "global_ratio"]
    assert [r[1] for r in preds] == ["15", "20"]
    for r in preds:
        assert float(r[4]) > 0.0


def test_policy_pipeline(panel_csv, tmp_path):
    scenario = tmp_path / "scenario.txt"
    scenario.write_text("dataset = gcb\nbase_year = 1\nreference_year = 12\n"
                        "target_year = 20\nR_target = 0.6\nfix = sigma\n"
                        "fixed_value = 1.5\n")
    out = tmp_path / "rep"
    assert main(["policy", "--input", f"gcb={panel_csv}",
                 "--scenario", str(scenario), "--out", str(out)]) == 0
    header, rows = read_csv(out / "targets.csv")
    assert header == ["country", "rank", "reference_emissions", "r_i", "group"]
    assert len(rows) == 80
    ranks = [int(r[1]) for r in rows]
    assert ranks == list(range(80, 0, -1))
    _, summary = read_csv(out / "scenario_summary.csv")
    kv = dict((r[0], r[1]) for r in summary)
    assert float(kv["R_achieved"]) == pytest.approx(0.6, rel=1e-10)
    assert float(kv["sigma_t"]) == 1.5
    assert float(kv["theil_target"]) == pytest.approx(0.5 * 1.5 ** 2, rel=1e-12)
    n_groups = (int(kv["low_emission"]) + int(kv["middle_emission"])
                + int(kv["high_emission"]))
    assert n_groups == 80
    _, plot = read_csv(out / "policy_plot.csv")
    assert len(plot) == 80


def test_policy_from_trend(panel_csv, tmp_path):
    scenario = tmp_path / "scenario.txt"
    scenario.write_text("dataset = gcb\nbase_year = 1\nreference_year = 12\n"
                        "target_year = 14\nR_target = 1.1\nfix = sigma\n"
                        "from_trend = true\n")
    out = tmp_path / "rep"
    assert main(["policy", "--input", f"gcb={panel_csv}",
                 "--scenario", str(scenario), "--out", str(out)]) == 0
    _, summary = read_csv(out / "scenario_summary.csv")
    kv = dict((r[0], r[1]) for r in summary)
    assert float(kv["R_achieved"]) == pytest.approx(1.1, rel=1e-10)


def test_convert_carbon_flag(panel_csv, tmp_path):
    out_plain = tmp_path / "plain"
    out_conv = tmp_path / "conv"
    main(["summarize", "--input", f"cdiac={panel_csv}", "--out", str(out_plain)])
    main(["summarize", "--input", f"cdiac={panel_csv}", "--convert-carbon",
          "--out", str(out_conv)])
    _, plain = read_csv(out_plain / "summary.csv")
    _, conv = read_csv(out_conv / "summary.csv")
    assert float(conv[0][5]) == pytest.approx(float(plain[0][5]) * 3.664, rel=1e-12)


def test_wide_format_loading(tmp_path):
    wide = tmp_path / "wide.csv"
    wide.write_text("country,2000,2001,2002,2003\n"
                    "A,1.0,2.0,3.0,4.0\nB,2.0,NA,4.0,5.0\nC,3.0,4.0,5.0,6.0\n"
                    "D,4.0,5.0,6.0,7.0\nE,5.0,6.0,7.0,8.0\n")
    out = tmp_path / "rep"
    assert main(["summarize", "--input", f"gcb={wide}", "--out", str(out)]) == 0
    _, rows = read_csv(out / "summary.csv")
    assert rows[0][2] == "5" and rows[1][2] == "4"


def test_determinism_byte_identical(panel_csv, tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        main(["rank", "--input", f"gcb={panel_csv}", "--years", "1:2",
              "--out", str(out)])
        main(["test", "--input", f"gcb={panel_csv}", "--years", "1:2",
              "--out", str(out)])
    for name in ("model_ranks.csv", "rank_frequencies.csv", "normality.csv",
                 "normality_grid.csv", "normality_grid_gcb.svg"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_simulate_subcommand_roundtrip(tmp_path):
    out = tmp_path / "sim.csv"
    assert main(["simulate", "--countries", "10", "--n-years", "4",
                 "--shock-sd", "0.1", "--seed", "5", "--out", str(out)]) == 0
    panel = load_panel(out)
    assert len(panel.countries) == 10 and len(panel.years) == 4
    out2 = tmp_path / "sim2.csv"
    main(["simulate", "--countries", "10", "--n-years", "4",
          "--shock-sd", "0.1", "--seed", "5", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_module_entry_point(panel_csv, tmp_path):
    env = dict(os.environ)
    src = str(Path(__file__).resolve().parents[1] / "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "emistat.cli", "summarize",
         "--input", f"gcb={panel_csv}", "--out", str(tmp_path / "rep")],
        capture_output=True, env=env)
    assert proc.returncode == 0


@pytest.mark.slow
def test_full_pipeline_under_budget(tmp_path):
    """Entire command pipeline on a 500 x 52 synthetic panel in under 60 s."""
    panel = simulate_panel(500, 52, ParamVector("LOG", (2.0, 2.0)), 0.1, seed=33)
    years = tuple(range(1970, 2022))
    from emistat.panel import EmissionsPanel
    panel = EmissionsPanel(panel.countries, years, panel.values)
    path = tmp_path / "big.csv"
    write_panel(panel, path)
    scenario = tmp_path / "scenario.txt"
    scenario.write_text("dataset = edgar\nbase_year = 1990\nreference_year = 2021\n"
                        "target_year = 2030\nR_target = 0.45\nfix = sigma\n"
                        "from_trend = true\n")
    out = tmp_path / "rep"
    t0 = time.time()
    for argv in (
        ["summarize", "--input", f"edgar={path}", "--out", str(out)],
        ["rank", "--input", f"edgar={path}", "--out", str(out)],
        ["test", "--input", f"edgar={path}", "--out", str(out)],
        ["gibrat", "--input", f"edgar={path}", "--out", str(out)],
        ["trend", "--input", f"edgar={path}", "--out", str(out)],
        ["policy", "--input", f"edgar={path}", "--scenario", str(scenario),
         "--out", str(out)],
    ):
        assert main(argv) == 0
    elapsed = time.time() - t0
    assert elapsed < 60.0, f"pipeline took {elapsed:.1f}s"

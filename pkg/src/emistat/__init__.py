"""Size-distribution modelling of country-level CO2 emissions panels.

Fits six candidate size distributions to yearly cross-sections, screens the
lognormal hypothesis with a seven-test battery, checks proportionate growth
with four year-over-year regressions, projects the lognormal parameters
through time, and converts a global emissions-reduction target into ranked
per-country targets.
"""

from ._kernels import available_backends, backend_name
from .distributions import (MODEL_IDS, PARAM_NAMES, ParamVector, cdf, log_pdf,
                            pdf, quantile, sample, sf)
from .fitting import FitResult, ModelRanking, fit_all, fit_mle, log_likelihood, rank_models
from .gibrat import (METHOD_IDS, GibratFit, GrowthSample, build_growth_sample,
                     fit_gibrat, simulate_panel)
from .normality import (TEST_IDS, PlotSeries, TestReport, qq_plot_data,
                        rank_size_plot_data, test_lognormality, test_normality)
from .panel import (CARBON_TO_CO2, EmissionsPanel, YearSummary,
                    convert_carbon_to_co2, load_panel, summarize_year, write_panel)
from .policy import (CountryTarget, PolicyScenario, allocate_targets,
                     compute_global_ratio, inequality_index, parse_scenario_file,
                     solve_parameter, sort_with_countries)
from .trend import TrendModel, fit_trend, predict

__version__ = "0.1.0"

__all__ = [
    "CARBON_TO_CO2", "CountryTarget", "EmissionsPanel", "FitResult",
    "GibratFit", "GrowthSample", "METHOD_IDS", "MODEL_IDS", "ModelRanking",
    "PARAM_NAMES", "ParamVector", "PlotSeries", "PolicyScenario", "TEST_IDS",
    "TestReport", "TrendModel", "YearSummary", "allocate_targets",
    "available_backends", "backend_name", "build_growth_sample", "cdf",
    "compute_global_ratio", "convert_carbon_to_co2", "fit_all", "fit_gibrat",
    "fit_mle", "fit_trend", "inequality_index", "load_panel", "log_likelihood",
    "log_pdf", "parse_scenario_file", "pdf", "predict", "qq_plot_data",
    "quantile", "rank_models", "rank_size_plot_data", "sample", "sf",
    "simulate_panel", "solve_parameter", "sort_with_countries",
    "summarize_year", "test_lognormality", "test_normality", "write_panel",
]

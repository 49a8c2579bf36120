"""Country-by-year emissions panels: CSV parsing, unit conversion, summaries.

A panel stores one value per (country, year) cell in MtCO2/year, with NaN
marking missing cells.  Every present value must be strictly positive: all
candidate size models are supported on x > 0, so zeros and negatives are
rejected at load time rather than silently dropped.

CSV formats
-----------
long (canonical): header ``country,year,emissions``, one row per cell.
wide: header ``country,<year1>,<year2>,...``, one row per country.

The token ``NA``, an empty cell, or any non-numeric cell is read as missing.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

#: Mass-of-carbon to mass-of-CO2 conversion factor (1 kg C = 3.664 kg CO2).
CARBON_TO_CO2 = 3.664


@dataclass(frozen=True)
class EmissionsPanel:
    """Immutable country x year table of positive emissions, NaN = missing."""

    countries: tuple[str, ...]
    years: tuple[int, ...]
    values: np.ndarray  # shape (n_countries, n_years)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (len(self.countries), len(self.years)):
            raise ValueError(
                f"values shape {vals.shape} does not match "
                f"{len(self.countries)} countries x {len(self.years)} years")
        if len(set(self.countries)) != len(self.countries):
            raise ValueError("country identifiers must be unique")
        if any(b <= a for a, b in zip(self.years, self.years[1:])):
            raise ValueError("years must be strictly increasing")
        present = ~np.isnan(vals)
        if np.any(vals[present] <= 0.0) or np.any(np.isinf(vals)):
            raise ValueError("present emission values must be strictly positive and finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "countries", tuple(self.countries))
        object.__setattr__(self, "years", tuple(int(y) for y in self.years))

    def year_index(self, year: int) -> int:
        try:
            return self.years.index(year)
        except ValueError:
            raise ValueError(f"year {year} not in panel (range {self.years[0]}-{self.years[-1]})") from None

    def values_for_year(self, year: int) -> np.ndarray:
        """Cross-section of present values for one year."""
        col = self.values[:, self.year_index(year)]
        return col[~np.isnan(col)]

    def countries_for_year(self, year: int) -> tuple[str, ...]:
        col = self.values[:, self.year_index(year)]
        return tuple(c for c, v in zip(self.countries, col) if not math.isnan(v))

    def n_for_year(self, year: int) -> int:
        return int(self.values_for_year(year).size)

    def subset_years(self, year_from: int, year_to: int) -> "EmissionsPanel":
        """Panel restricted to years in [year_from, year_to]."""
        keep = [i for i, y in enumerate(self.years) if year_from <= y <= year_to]
        if not keep:
            raise ValueError(f"no panel years in {year_from}:{year_to}")
        return EmissionsPanel(self.countries, [self.years[i] for i in keep],
                              self.values[:, keep])


@dataclass(frozen=True)
class YearSummary:
    """Descriptive statistics of one year's cross-section."""

    year: int
    n: int
    max: float
    min: float
    mean: float
    sd: float
    skewness: float   # m3 / m2^(3/2), population central moments
    kurtosis: float   # m4 / m2^2, non-excess; NaN when sd == 0


def _parse_cell(token: str):
    """Emission cell -> float, or None for missing (NA / empty / non-numeric)."""
    tok = token.strip()
    if tok == "" or tok.upper() == "NA":
        return None
    try:
        value = float(tok)
    except ValueError:
        return None
    if math.isnan(value):
        return None
    return value


def _build(cells: dict, order: list[str]) -> EmissionsPanel:
    years = sorted({y for (_, y) in cells})
    if not years:
        raise ValueError("no data rows found")
    year_pos = {y: j for j, y in enumerate(years)}
    country_pos = {c: i for i, c in enumerate(order)}
    values = np.full((len(order), len(years)), np.nan)
    for (c, y), v in cells.items():
        if v is not None:
            values[country_pos[c], year_pos[y]] = v
    return EmissionsPanel(tuple(order), tuple(years), values)


def load_panel(path, format: str = "long") -> EmissionsPanel:
    """Parse a CSV emissions panel.

    Missing cells stay missing (never coerced to zero).  Non-positive values
    and duplicate (country, year) pairs are rejected with the offending line
    number.
    """
    if format not in ("long", "wide"):
        raise ValueError(f"unknown format {format!r}; expected 'long' or 'wide'")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(t.strip() for t in r)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [t.strip() for t in rows[0]]
    cells: dict = {}
    order: list[str] = []
    line_of: dict = {}

    if format == "long":
        if [h.lower() for h in header] != ["country", "year", "emissions"]:
            raise ValueError(f"{path}: malformed header {header!r}; "
                             "expected country,year,emissions")
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 fields, got {len(row)}")
            country = row[0].strip()
            if not country:
                raise ValueError(f"{path}: line {lineno}: empty country")
            try:
                year = int(row[1].strip())
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad year {row[1]!r}") from None
            value = _parse_cell(row[2])
            if value is not None and value <= 0.0:
                raise ValueError(f"{path}: line {lineno}: non-positive emission {value}")
            if (country, year) in cells:
                raise ValueError(f"{path}: line {lineno}: duplicate entry for "
                                 f"({country}, {year}), first seen on line "
                                 f"{line_of[(country, year)]}")
            cells[(country, year)] = value
            line_of[(country, year)] = lineno
            if country not in order:
                order.append(country)
    else:
        if not header or header[0].lower() != "country":
            raise ValueError(f"{path}: malformed header {header!r}; "
                             "expected country,<year>,...")
        try:
            years = [int(h) for h in header[1:]]
        except ValueError:
            raise ValueError(f"{path}: malformed header {header!r}; "
                             "year columns must be integers") from None
        for lineno, row in enumerate(rows[1:], start=2):
            country = row[0].strip()
            if not country:
                raise ValueError(f"{path}: line {lineno}: empty country")
            if country in order:
                raise ValueError(f"{path}: line {lineno}: duplicate country {country!r}")
            order.append(country)
            if len(row) - 1 != len(years):
                raise ValueError(f"{path}: line {lineno}: expected {len(years)} "
                                 f"year cells, got {len(row) - 1}")
            for year, token in zip(years, row[1:]):
                value = _parse_cell(token)
                if value is not None and value <= 0.0:
                    raise ValueError(f"{path}: line {lineno}: non-positive emission "
                                     f"{value} for year {year}")
                cells[(country, year)] = value
                line_of[(country, year)] = lineno

    return _build(cells, order)


def write_panel(panel: EmissionsPanel, path) -> None:
    """Write a panel as long CSV (the canonical output format).

    Missing cells are written as ``NA`` so that a round trip reproduces the
    panel exactly.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["country", "year", "emissions"])
        for i, country in enumerate(panel.countries):
            for j, year in enumerate(panel.years):
                v = panel.values[i, j]
                writer.writerow([country, year, "NA" if math.isnan(v) else repr(float(v))])


def convert_carbon_to_co2(panel: EmissionsPanel) -> EmissionsPanel:
    """Convert a panel from MtC/year to MtCO2/year (factor 3.664)."""
    return EmissionsPanel(panel.countries, panel.years, panel.values * CARBON_TO_CO2)


def summarize_year(panel: EmissionsPanel, year: int) -> YearSummary:
    """Descriptive statistics for one year's cross-section.

    Mean and standard deviation are sample statistics (ddof=1); skewness and
    kurtosis use population (divide-by-n) central moments, with kurtosis
    reported non-excess.  Both are NaN when the cross-section is constant.
    """
    x = panel.values_for_year(year)
    n = x.size
    if n < 2:
        raise ValueError(f"year {year}: need at least 2 present values, have {n}")
    mean = float(np.mean(x))
    sd = float(np.std(x, ddof=1))
    d = x - mean
    m2 = float(np.mean(d * d))
    if m2 == 0.0:
        skew = kurt = float("nan")
    else:
        skew = float(np.mean(d ** 3)) / m2 ** 1.5
        kurt = float(np.mean(d ** 4)) / m2 ** 2
    return YearSummary(year=int(year), n=int(n), max=float(np.max(x)),
                       min=float(np.min(x)), mean=mean, sd=sd,
                       skewness=skew, kurtosis=kurt)

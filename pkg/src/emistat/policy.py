"""Conversion of a global emissions-reduction target into national targets.

The target-year cross-section is assumed lognormal with parameters
(mu_t, sigma_t).  Countries keep their base-year rank; country i (ascending
emissions, rank N + 1 - i) is assigned the lognormal quantile at i/(N + 1).

  global ratio   R = sum_i exp(mu_t + sigma_t * z_i) / sum_i x_i1,
                 z_i = normal quantile of i/(N + 1)
  national ratio r_i = exp(mu_t + sigma_t * z_i) / x_i2

where x_i1 is the sorted base-year vector and x_i2 the sorted reference-year
vector.  Since R is exactly proportional to exp(mu_t), fixing sigma_t and
solving for mu_t is closed-form; fixing mu_t and solving for sigma_t uses
bracketed root finding with geometric bracket expansion.

Groups use a crisp rule: low_emission if r_i > 1 (headroom to grow),
high_emission if r_i < R_target, middle_emission otherwise.  Ties in the
emissions vectors are broken by country code (stable), which fixes the rank
assignment and is disclosed in the CLI output.

Under a lognormal cross-section the Theil entropy index and the mean log
deviation coincide at sigma^2 / 2, which is the inequality measure reported
for scenarios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k

_SIGMA_BRACKET_HI = 50.0
_SIGMA_BRACKET_LO = 1e-6
_BRACKET_GROWTH = 4.0
_MAX_BRACKET_EXPANSIONS = 6


@dataclass(frozen=True)
class PolicyScenario:
    """A fully specified allocation problem."""

    base_year: int
    reference_year: int
    target_year: int
    base_emissions: np.ndarray        # ascending, > 0
    reference_emissions: np.ndarray   # ascending, > 0, same length
    reference_countries: tuple[str, ...]
    mu_t: float
    sigma_t: float
    r_target: float

    def __post_init__(self):
        base = np.asarray(self.base_emissions, dtype=np.float64)
        ref = np.asarray(self.reference_emissions, dtype=np.float64)
        for name, v in (("base", base), ("reference", ref)):
            if v.ndim != 1 or v.size == 0:
                raise ValueError(f"{name} emissions must be a non-empty vector")
            if np.any(v <= 0.0) or np.any(~np.isfinite(v)):
                raise ValueError(f"{name} emissions must be strictly positive and finite")
            if np.any(np.diff(v) < 0.0):
                raise ValueError(f"{name} emissions must be sorted ascending")
        if base.size != ref.size:
            raise ValueError(f"country count changed between years: base has "
                             f"{base.size}, reference has {ref.size}")
        if len(self.reference_countries) != ref.size:
            raise ValueError("reference country labels must match the reference vector")
        if self.sigma_t <= 0.0:
            raise ValueError("sigma_t must be positive")
        if self.r_target <= 0.0:
            raise ValueError("R_target must be positive")
        object.__setattr__(self, "base_emissions", base)
        object.__setattr__(self, "reference_emissions", ref)


@dataclass(frozen=True)
class CountryTarget:
    country: str
    rank: int                    # N + 1 - i; rank 1 is the largest emitter
    reference_emissions: float
    target_ratio: float          # allocated target / reference emissions
    group: str                   # low_emission / middle_emission / high_emission


def _quantile_levels(n: int) -> np.ndarray:
    return np.arange(1, n + 1) / (n + 1.0)


def _allocated_levels(mu_t: float, sigma_t: float, n: int) -> np.ndarray:
    z = np.asarray(_k.norm_ppf(_quantile_levels(n)))
    with np.errstate(over="ignore"):  # extreme sigma probes during bracketing
        return np.exp(mu_t + sigma_t * z)


def compute_global_ratio(mu_t: float, sigma_t: float, base_emissions) -> float:
    """Target-year total implied by the lognormal model over the base total."""
    base = np.asarray(base_emissions, dtype=np.float64)
    if base.size == 0:
        raise ValueError("base emissions vector is empty")
    if np.any(base <= 0.0) or np.any(~np.isfinite(base)):
        raise ValueError("base emissions must be strictly positive and finite")
    if sigma_t <= 0.0:
        raise ValueError("sigma_t must be positive")
    return float(_allocated_levels(mu_t, sigma_t, base.size).sum() / base.sum())


def _brent(f, lo, hi, f_lo, f_hi, tol=1e-14, max_iter=200):
    # Brent's method; the bracket is assumed valid.
    a, b, fa, fb = lo, hi, f_lo, f_hi
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb != 0.0 and (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * 2.220446049250313e-16 * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b = b + (d if abs(d) > tol1 else math.copysign(tol1, xm))
        fb = f(b)
    return b


def solve_parameter(free: str, fixed_value: float, r_target: float,
                    base_emissions) -> float:
    """Solve for mu_t or sigma_t so the global ratio meets r_target.

    mu is closed-form (the ratio is exactly proportional to exp(mu));
    sigma is found by bracketed root finding, with the bracket expanded
    geometrically before giving up.
    """
    if free not in ("mu", "sigma"):
        raise ValueError(f"free parameter must be 'mu' or 'sigma', got {free!r}")
    if r_target <= 0.0:
        raise ValueError("R_target must be positive")
    base = np.asarray(base_emissions, dtype=np.float64)
    if base.size == 0:
        raise ValueError("base emissions vector is empty")
    if np.any(base <= 0.0) or np.any(~np.isfinite(base)):
        raise ValueError("base emissions must be strictly positive and finite")

    if free == "mu":
        sigma_t = float(fixed_value)
        if sigma_t <= 0.0:
            raise ValueError("fixed sigma_t must be positive")
        z = np.asarray(_k.norm_ppf(_quantile_levels(base.size)))
        quantile_sum = float(np.exp(sigma_t * z).sum())
        return math.log(r_target * float(base.sum()) / quantile_sum)

    mu_t = float(fixed_value)

    def g(sigma):
        return math.log(compute_global_ratio(mu_t, sigma, base)) - math.log(r_target)

    lo, hi = _SIGMA_BRACKET_LO, _SIGMA_BRACKET_HI
    g_lo, g_hi = g(lo), g(hi)
    expansions = 0
    while (g_lo > 0.0) == (g_hi > 0.0) and expansions < _MAX_BRACKET_EXPANSIONS:
        hi *= _BRACKET_GROWTH
        g_hi = g(hi)
        expansions += 1
    if (g_lo > 0.0) == (g_hi > 0.0):
        raise ValueError(
            f"no sigma_t in ({lo}, {hi}) reaches R_target={r_target}: "
            f"log-ratio residual is {g_lo:+.6g} at sigma={lo} and "
            f"{g_hi:+.6g} at sigma={hi}")
    sigma = _brent(g, lo, hi, g_lo, g_hi)
    achieved = compute_global_ratio(mu_t, sigma, base)
    if abs(achieved - r_target) > 1e-10 * r_target:
        raise ArithmeticError(
            f"root finding stalled: achieved ratio {achieved!r} vs target {r_target!r}")
    return float(sigma)


def allocate_targets(scenario: PolicyScenario) -> list[CountryTarget]:
    """Per-country target ratios r_i with rank and group labels."""
    ref = scenario.reference_emissions
    n = ref.size
    levels = _allocated_levels(scenario.mu_t, scenario.sigma_t, n)
    ratios = levels / ref
    out = []
    for i in range(n):
        r = float(ratios[i])
        if r > 1.0:
            group = "low_emission"
        elif r < scenario.r_target:
            group = "high_emission"
        else:
            group = "middle_emission"
        out.append(CountryTarget(country=scenario.reference_countries[i],
                                 rank=n - i,
                                 reference_emissions=float(ref[i]),
                                 target_ratio=r,
                                 group=group))
    return out


def inequality_index(sigma: float) -> float:
    """Theil index (equals the mean log deviation) of a lognormal: sigma^2/2."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    return 0.5 * sigma * sigma


def sort_with_countries(countries, values):
    """Ascending sort of an emissions vector with labels attached.

    Ties are broken by country code so rank assignment is deterministic.
    """
    pairs = sorted(zip(countries, (float(v) for v in values)),
                   key=lambda cv: (cv[1], cv[0]))
    labels = tuple(c for c, _ in pairs)
    vec = np.array([v for _, v in pairs])
    return labels, vec


def parse_scenario_file(path) -> dict:
    """Read a ``key = value`` scenario description.

    Keys: dataset, base_year, reference_year, target_year, R_target,
    fix (mu|sigma), and either fixed_value or from_trend = true.
    Lines starting with # are comments.
    """
    known = {"dataset", "base_year", "reference_year", "target_year",
             "R_target", "fix", "fixed_value", "from_trend"}
    raw: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ValueError(f"{path}: line {lineno}: expected 'key = value'")
            key, _, value = text.partition("=")
            key, value = key.strip(), value.strip()
            if key not in known:
                raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
            if key in raw:
                raise ValueError(f"{path}: line {lineno}: duplicate key {key!r}")
            raw[key] = value

    for key in ("base_year", "reference_year", "target_year", "R_target", "fix"):
        if key not in raw:
            raise ValueError(f"{path}: missing required key {key!r}")
    out: dict = {"dataset": raw.get("dataset")}
    for key in ("base_year", "reference_year", "target_year"):
        try:
            out[key] = int(raw[key])
        except ValueError:
            raise ValueError(f"{path}: {key} must be an integer, got {raw[key]!r}") from None
    try:
        out["R_target"] = float(raw["R_target"])
    except ValueError:
        raise ValueError(f"{path}: R_target must be a number, got {raw['R_target']!r}") from None
    if raw["fix"] not in ("mu", "sigma"):
        raise ValueError(f"{path}: fix must be 'mu' or 'sigma', got {raw['fix']!r}")
    out["fix"] = raw["fix"]
    from_trend = raw.get("from_trend", "").lower() in ("true", "yes", "1")
    out["from_trend"] = from_trend
    if from_trend:
        if "fixed_value" in raw:
            raise ValueError(f"{path}: give either fixed_value or from_trend, not both")
        out["fixed_value"] = None
    else:
        if "fixed_value" not in raw:
            raise ValueError(f"{path}: need fixed_value (or from_trend = true)")
        try:
            out["fixed_value"] = float(raw["fixed_value"])
        except ValueError:
            raise ValueError(f"{path}: fixed_value must be a number, "
                             f"got {raw['fixed_value']!r}") from None
    return out

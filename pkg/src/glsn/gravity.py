"""Gravity model of bilateral trade and country-level trade reconstruction.

The base model regresses ln(bilateral trade value) on ln(GDP product) and
ln(capital-to-capital distance); extended variants add ln(LSBCI) and the log
product of the two countries' betweenness or connectivity indices. Fitting is
plain OLS in log space (raw mode, no standardization).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .econometrics import DesignMatrix, RegressionReport, ols_fit, pearson
from .graph import Glsn
from .model import BilateralRecord, CountryEcon, DataError

EARTH_RADIUS_KM = 6371.0  # mean Earth radius; antipodal distance 20015.09 km


def great_circle_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Haversine great-circle distance in kilometres."""
    for lat in (lat1, lat2):
        if not -90 <= lat <= 90:
            raise DataError(f"latitude out of range: {lat}")
    for lon in (lon1, lon2):
        if not -180 <= lon <= 180:
            raise DataError(f"longitude out of range: {lon}")
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(a)))


class GravityVariant(enum.Enum):
    BASE = "base"
    LSBCI = "lsbci"
    GB = "gb"
    LSBCI_GB = "lsbci_gb"
    GC = "gc"
    LSBCI_GC = "lsbci_gc"

    @property
    def uses_lsbci(self) -> bool:
        return self in (GravityVariant.LSBCI, GravityVariant.LSBCI_GB, GravityVariant.LSBCI_GC)

    @property
    def uses_gb(self) -> bool:
        return self in (GravityVariant.GB, GravityVariant.LSBCI_GB)

    @property
    def uses_gc(self) -> bool:
        return self in (GravityVariant.GC, GravityVariant.LSBCI_GC)

    def variable_names(self) -> tuple[str, ...]:
        names = ["ln_gdp_product", "ln_distance"]
        if self.uses_lsbci:
            names.append("ln_lsbci")
        if self.uses_gb:
            names.append("ln_gb_product")
        if self.uses_gc:
            names.append("ln_gc_product")
        return tuple(names)


@dataclass(frozen=True)
class CountryPairSample:
    country_i: str
    country_j: str
    ln_gdp_product: float
    ln_distance: float
    ln_btv: float
    ln_lsbci: float | None = None
    ln_gb_product: float | None = None
    ln_gc_product: float | None = None


@dataclass
class PairAssembly:
    samples: list[CountryPairSample] = field(default_factory=list)
    excluded: dict[str, int] = field(default_factory=dict)  # reason -> count

    def _exclude(self, reason: str) -> None:
        self.excluded[reason] = self.excluded.get(reason, 0) + 1


def country_adjacency(g: Glsn) -> set[tuple[str, str]]:
    """Unordered country pairs with at least one inter-country edge."""
    pairs = set()
    for (u, v) in g.edges:
        cu, cv = g.country_of[u], g.country_of[v]
        if cu != cv:
            pairs.add((min(cu, cv), max(cu, cv)))
    return pairs


def assemble_pairs(
    econ: list[CountryEcon],
    bilateral: list[BilateralRecord],
    variant: GravityVariant,
    glsn: Glsn | None = None,
    gb: dict[str, float] | None = None,
    gc: dict[str, float] | None = None,
) -> PairAssembly:
    """Build the log-space sample for a variant, reporting each exclusion.

    A pair enters only when the countries are directly connected in the port
    graph, both GDPs and capitals are present, trade is positive, distance is
    positive, and the variant's extra regressors are available and positive.
    """
    if variant.uses_gb and gb is None:
        raise DataError("gb index values required for this variant")
    if variant.uses_gc and gc is None:
        raise DataError("gc index values required for this variant")
    by_code = {e.country_code: e for e in econ}
    connected = country_adjacency(glsn) if glsn is not None else None

    out = PairAssembly()
    for rec in sorted(bilateral, key=lambda r: r.pair):
        ci, cj = rec.pair
        ei, ej = by_code.get(ci), by_code.get(cj)
        if ei is None or ej is None:
            out._exclude("no_econ_record")
            continue
        if connected is not None and (ci, cj) not in connected:
            out._exclude("not_directly_connected")
            continue
        if rec.btv_usd <= 0:
            out._exclude("zero_trade")
            continue
        if ei.gdp_usd is None or ej.gdp_usd is None or ei.gdp_usd <= 0 or ej.gdp_usd <= 0:
            out._exclude("missing_gdp")
            continue
        if None in (ei.capital_lat, ei.capital_lon, ej.capital_lat, ej.capital_lon):
            out._exclude("missing_capital")
            continue
        d = great_circle_km(ei.capital_lat, ei.capital_lon, ej.capital_lat, ej.capital_lon)
        if d <= 0:
            out._exclude("zero_distance")
            continue

        ln_lsbci = ln_gb = ln_gc = None
        if variant.uses_lsbci:
            if rec.lsbci is None or rec.lsbci <= 0:
                out._exclude("missing_lsbci")
                continue
            ln_lsbci = math.log(rec.lsbci)
        if variant.uses_gb:
            gi, gj = gb.get(ci, 0.0), gb.get(cj, 0.0)
            if gi <= 0 or gj <= 0:
                out._exclude("nonpositive_gb")
                continue
            ln_gb = math.log(gi * gj)
        if variant.uses_gc:
            gi, gj = gc.get(ci, 0.0), gc.get(cj, 0.0)
            if gi <= 0 or gj <= 0:
                out._exclude("nonpositive_gc")
                continue
            ln_gc = math.log(gi * gj)

        out.samples.append(
            CountryPairSample(
                country_i=ci,
                country_j=cj,
                ln_gdp_product=math.log(ei.gdp_usd * ej.gdp_usd),
                ln_distance=math.log(d),
                ln_btv=math.log(rec.btv_usd),
                ln_lsbci=ln_lsbci,
                ln_gb_product=ln_gb,
                ln_gc_product=ln_gc,
            )
        )
    return out


def _design_from_samples(
    samples: list[CountryPairSample], variant: GravityVariant
) -> DesignMatrix:
    names = variant.variable_names()
    cols = {
        "ln_gdp_product": [s.ln_gdp_product for s in samples],
        "ln_distance": [s.ln_distance for s in samples],
        "ln_lsbci": [s.ln_lsbci for s in samples],
        "ln_gb_product": [s.ln_gb_product for s in samples],
        "ln_gc_product": [s.ln_gc_product for s in samples],
    }
    x = np.column_stack([np.asarray(cols[n], dtype=float) for n in names])
    y = np.asarray([s.ln_btv for s in samples], dtype=float)
    return DesignMatrix(variables=names, x=x, response_name="ln_btv", y=y)


def fit_gravity(
    samples: list[CountryPairSample], variant: GravityVariant
) -> RegressionReport:
    """OLS in log space, unstandardized; coefficients are elasticities."""
    if len(samples) <= len(variant.variable_names()) + 1:
        raise DataError("too few pairs to fit the gravity model")
    return ols_fit(_design_from_samples(samples, variant))


def predict_ln_btv(
    report: RegressionReport, sample: CountryPairSample, variant: GravityVariant
) -> float:
    values = {
        "ln_gdp_product": sample.ln_gdp_product,
        "ln_distance": sample.ln_distance,
        "ln_lsbci": sample.ln_lsbci,
        "ln_gb_product": sample.ln_gb_product,
        "ln_gc_product": sample.ln_gc_product,
    }
    out = report.coefficients["intercept"]
    for name in variant.variable_names():
        out += report.coefficients[name] * values[name]
    return out


@dataclass(frozen=True)
class TradeEstimate:
    estimated: dict[str, float]  # country -> sum of predicted bilateral trade
    empirical: dict[str, float]  # country -> sum of observed bilateral trade
    pearson_r: float
    implied_adjusted_r2: float


def estimate_country_trade(
    report: RegressionReport,
    samples: list[CountryPairSample],
    variant: GravityVariant,
) -> TradeEstimate:
    """Country totals from exp of predicted ln(trade), summed over a country's
    included pairs; no log-normal correction is applied."""
    est: dict[str, float] = {}
    emp: dict[str, float] = {}
    for s in samples:
        pred = math.exp(predict_ln_btv(report, s, variant))
        obs = math.exp(s.ln_btv)
        for c in (s.country_i, s.country_j):
            est[c] = est.get(c, 0.0) + pred
            emp[c] = emp.get(c, 0.0) + obs
    codes = sorted(est)
    r, _ = pearson(
        np.array([emp[c] for c in codes]), np.array([est[c] for c in codes])
    )
    # r^2 adjusted for the single implicit regressor
    n = len(codes)
    adj = 1.0 - (1.0 - r * r) * (n - 1) / (n - 2)
    return TradeEstimate(estimated=est, empirical=emp, pearson_r=r, implied_adjusted_r2=adj)


def coverage_filter(
    econ: list[CountryEcon],
    bilateral: list[BilateralRecord],
    threshold: float = 0.9,
) -> tuple[list[str], dict[str, str]]:
    """Retain countries whose positive bilateral flows cover strictly more than
    `threshold` of their total trade value. Returns (retained, excluded reasons)."""
    if not 0 < threshold <= 1:
        raise DataError("coverage threshold must be in (0, 1]")
    sums: dict[str, float] = {}
    for rec in bilateral:
        if rec.btv_usd > 0:
            for c in (rec.country_i, rec.country_j):
                sums[c] = sums.get(c, 0.0) + rec.btv_usd
    retained, excluded = [], {}
    for e in sorted(econ, key=lambda e: e.country_code):
        if e.trade_value_usd is None or e.trade_value_usd <= 0:
            excluded[e.country_code] = "no_total_trade_value"
            continue
        if sums.get(e.country_code, 0.0) > threshold * e.trade_value_usd:
            retained.append(e.country_code)
        else:
            excluded[e.country_code] = "insufficient_bilateral_coverage"
    return retained, excluded

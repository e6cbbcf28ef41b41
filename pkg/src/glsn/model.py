"""Domain records shared across the pipeline.

Missing optional values are represented as None, never as 0: downstream
regressions exclude countries with incomplete data rather than imputing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class Port:
    port_id: str
    name: str
    country_code: str

    def __post_init__(self):
        if not self.port_id:
            raise DataError("port_id must be non-empty")
        if not self.country_code:
            raise DataError(f"port {self.port_id!r}: country_code must be non-empty")


@dataclass(frozen=True)
class ServiceRoute:
    route_id: str
    port_calls: tuple[str, ...]  # call sequence as recorded, repeats retained
    capacity_teu: float | None = None

    def __post_init__(self):
        if self.capacity_teu is not None and self.capacity_teu < 0:
            raise DataError(f"route {self.route_id!r}: negative capacity {self.capacity_teu}")

    @property
    def distinct_ports(self) -> frozenset[str]:
        return frozenset(self.port_calls)

    @property
    def has_repeated_calls(self) -> bool:
        return len(self.port_calls) > len(self.distinct_ports)


@dataclass(frozen=True)
class CountryEcon:
    country_code: str
    trade_value_usd: float | None = None
    export_usd: float | None = None
    import_usd: float | None = None
    gdp_usd: float | None = None
    lsci: float | None = None
    capital_lat: float | None = None
    capital_lon: float | None = None
    trade_value_change_usd: float | None = None

    def __post_init__(self):
        for name in ("trade_value_usd", "export_usd", "import_usd", "gdp_usd"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise DataError(f"country {self.country_code!r}: non-finite {name}")
        if self.capital_lat is not None and not -90 <= self.capital_lat <= 90:
            raise DataError(f"country {self.country_code!r}: latitude out of range")
        if self.capital_lon is not None and not -180 <= self.capital_lon <= 180:
            raise DataError(f"country {self.country_code!r}: longitude out of range")


@dataclass(frozen=True)
class BilateralRecord:
    country_i: str
    country_j: str
    btv_usd: float
    lsbci: float | None = None

    def __post_init__(self):
        if self.country_i == self.country_j:
            raise DataError(f"bilateral record {self.country_i!r}: countries must differ")
        if self.btv_usd < 0:
            raise DataError(
                f"bilateral pair ({self.country_i}, {self.country_j}): negative trade value"
            )

    @property
    def pair(self) -> tuple[str, str]:
        return (min(self.country_i, self.country_j), max(self.country_i, self.country_j))


@dataclass
class ValidationReport:
    retained: list[ServiceRoute] = field(default_factory=list)
    dropped_domestic: list[str] = field(default_factory=list)
    dropped_too_few_ports: list[str] = field(default_factory=list)
    unresolved_ports: dict[str, list[str]] = field(default_factory=dict)  # route -> bad ids
    countries_missing_econ: list[str] = field(default_factory=list)

    @property
    def drop_count(self) -> int:
        return (
            len(self.dropped_domestic)
            + len(self.dropped_too_few_ports)
            + len(self.unresolved_ports)
        )

    def summary_lines(self) -> list[str]:
        return [
            f"retained routes: {len(self.retained)}",
            f"dropped domestic: {len(self.dropped_domestic)}",
            f"dropped <2 distinct ports: {len(self.dropped_too_few_ports)}",
            f"routes with unresolved ports: {len(self.unresolved_ports)}",
            f"countries lacking econ data: {len(self.countries_missing_econ)}",
        ]

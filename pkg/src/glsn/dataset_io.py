"""CSV serialization of the domain records (inverse of ingest parsing)."""

from __future__ import annotations

import io

from .model import BilateralRecord, CountryEcon, Port, ServiceRoute


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def routes_csv(routes: list[ServiceRoute]) -> str:
    rows = []
    for r in sorted(routes, key=lambda r: r.route_id):
        for seq, pid in enumerate(r.port_calls, start=1):
            rows.append([r.route_id, seq, pid])
    return _csv(["route_id", "seq", "port_id"], rows)


def routes_meta_csv(routes: list[ServiceRoute]) -> str:
    rows = [
        [r.route_id, r.capacity_teu]
        for r in sorted(routes, key=lambda r: r.route_id)
    ]
    return _csv(["route_id", "capacity_teu"], rows)


def ports_csv(ports: list[Port]) -> str:
    rows = [[p.port_id, p.name, p.country_code] for p in sorted(ports, key=lambda p: p.port_id)]
    return _csv(["port_id", "name", "country_code"], rows)


def countries_csv(econ: list[CountryEcon]) -> str:
    header = [
        "country_code",
        "trade_value_usd",
        "export_usd",
        "import_usd",
        "gdp_usd",
        "lsci",
        "capital_lat",
        "capital_lon",
        "trade_value_change_usd",
    ]
    rows = [
        [
            e.country_code,
            e.trade_value_usd,
            e.export_usd,
            e.import_usd,
            e.gdp_usd,
            e.lsci,
            e.capital_lat,
            e.capital_lon,
            e.trade_value_change_usd,
        ]
        for e in sorted(econ, key=lambda e: e.country_code)
    ]
    return _csv(header, rows)


def bilateral_csv(bilateral: list[BilateralRecord]) -> str:
    rows = [
        [rec.pair[0], rec.pair[1], rec.btv_usd, rec.lsbci]
        for rec in sorted(bilateral, key=lambda r: r.pair)
    ]
    return _csv(["country_i", "country_j", "btv_usd", "lsbci"], rows)

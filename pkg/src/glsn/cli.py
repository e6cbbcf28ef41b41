"""Command-line front end: ingestion -> graphs -> indices -> regressions -> gravity.

Every output file starts with comment lines recording the tool version, a hash
of the run configuration, and hashes of the input files, so a run is fully
reproducible from its outputs. With a fixed seed and fixed inputs the output
directory is byte-identical across runs and worker counts.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, dataset_io
from .econometrics import DesignMatrix, select_model, standardize
from .fixture import generate
from .graph import WeightScheme, build_glsn, edge_list_rows, graph_stats
from .gravity import (
    GravityVariant,
    assemble_pairs,
    coverage_filter,
    estimate_country_trade,
    fit_gravity,
    predict_ln_btv,
)
from .indices import L_VALUES, build_index_table
from .ingest import (
    parse_bilateral,
    parse_country_econ,
    parse_ports,
    parse_routes,
    parse_routes_json,
    validate_dataset,
)
from .model import DataError

SCHEME_NAMES = {s.value: s for s in WeightScheme}
VARIANT_NAMES = {v.value: v for v in GravityVariant}
DEFAULT_VARIANTS = ["base", "lsbci", "gb", "lsbci_gb"]
DEPENDENTS = ("trade", "export", "import", "net_export", "gdp", "trade_change")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return repr(v)
    return str(v)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _config_hash(args: argparse.Namespace) -> str:
    # input paths are excluded: the header already records content hashes,
    # and outputs must not depend on where the inputs live
    skip = {"func", "out", "routes", "routes_meta", "ports", "countries", "bilateral"}
    items = {k: str(v) for k, v in sorted(vars(args).items()) if k not in skip}
    return hashlib.sha256(json.dumps(items, sort_keys=True).encode()).hexdigest()[:16]


def _header(args: argparse.Namespace, input_paths: list[Path]) -> str:
    lines = [f"# glsn {__version__}", f"# config_hash {_config_hash(args)}"]
    for p in input_paths:
        lines.append(f"# input {p.name} sha256 {_sha256(p)}")
    return "\n".join(lines) + "\n"


def _write_csv(path: Path, header: str, columns: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(header)
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def _input_paths(args: argparse.Namespace) -> list[Path]:
    paths = []
    for name in ("routes", "routes_meta", "ports", "countries", "bilateral"):
        p = getattr(args, name, None)
        if p:
            paths.append(Path(p))
    return paths


def _load_dataset(args: argparse.Namespace):
    routes_path = Path(args.routes)
    if routes_path.suffix == ".json":
        with open(routes_path, "rb") as f:
            routes = parse_routes_json(f)
    else:
        meta = getattr(args, "routes_meta", None)
        if meta:
            with open(routes_path, "rb") as f, open(meta, "rb") as mf:
                routes = parse_routes(f, mf)
        else:
            with open(routes_path, "rb") as f:
                routes = parse_routes(f)
    with open(args.ports, "rb") as f:
        ports = parse_ports(f)
    econ = None
    if getattr(args, "countries", None):
        with open(args.countries, "rb") as f:
            econ = parse_country_econ(f)
    bilateral = None
    if getattr(args, "bilateral", None):
        with open(args.bilateral, "rb") as f:
            bilateral = parse_bilateral(f)
    report = validate_dataset(routes, ports, econ, bilateral, strict=args.strict)
    for line in report.summary_lines():
        print(f"validation: {line}", file=sys.stderr)
    if not report.retained:
        raise DataError("no retained routes after validation")
    return report.retained, ports, econ, bilateral


def _scheme(args) -> WeightScheme:
    return SCHEME_NAMES[args.weighting]


def _lmax_list(args) -> tuple[int, ...]:
    vals = tuple(int(x) for x in str(args.lmax).split(","))
    if not vals or any(v < 1 for v in vals):
        raise DataError(f"bad --lmax value {args.lmax!r}")
    return vals


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_build(args) -> None:
    routes, ports, _, _ = _load_dataset(args)
    out = _outdir(args)
    header = _header(args, _input_paths(args))
    g = build_glsn(routes, ports, _scheme(args))
    _write_csv(
        out / f"edges_{g.scheme.value}.csv",
        header,
        ["port_u", "port_v", "weight"],
        [list(r) for r in edge_list_rows(g)],
    )
    stats = graph_stats(g)
    with open(out / "stats.json", "w", encoding="utf-8", newline="\n") as f:
        json.dump({"scheme": g.scheme.value, **stats}, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"built {g.scheme.value}: {stats['node_count']} nodes, {stats['edge_count']} edges")


def _index_table(args, routes, ports, econ):
    g_struct = build_glsn(routes, ports, WeightScheme.UNWEIGHTED)
    scheme = _scheme(args)
    g_weighted = g_struct if scheme is WeightScheme.UNWEIGHTED else build_glsn(routes, ports, scheme)
    lsci = {e.country_code: e.lsci for e in econ} if econ else {}
    return build_index_table(g_weighted, g_struct, _lmax_list(args), lsci)


def cmd_indices(args) -> None:
    routes, ports, econ, _ = _load_dataset(args)
    out = _outdir(args)
    table = _index_table(args, routes, ports, econ)
    columns = [
        "country_code", "port_count", "gc", "gc_norm",
        *[f"gb_l{l}" for l in L_VALUES], "fb", "fb_norm", "lsci",
    ]
    rows = [[row[c] for c in columns] for row in table.csv_rows()]
    _write_csv(out / "indices.csv", _header(args, _input_paths(args)), columns, rows)
    print(f"indices for {len(rows)} countries -> {out / 'indices.csv'}")


def _candidate_values(table, econ_by_code, lmax: int) -> dict[str, dict[str, float | None]]:
    values: dict[str, dict[str, float | None]] = {}
    for c in table.countries():
        e = econ_by_code.get(c)
        values[c] = {
            "gc": table.gc[c],
            "gc_norm": table.gc_norm[c],
            "gb": table.gb[lmax][c],
            "fb": table.fb[c],
            "fb_norm": table.fb_norm[c],
            "lsci": table.lsci.get(c),
            "tv": e.trade_value_usd if e else None,
        }
    return values


def _dependent_value(e, dependent: str) -> float | None:
    if dependent == "trade":
        return e.trade_value_usd
    if dependent == "export":
        return e.export_usd
    if dependent == "import":
        return e.import_usd
    if dependent == "net_export":
        if e.export_usd is None or e.import_usd is None:
            return None
        return e.export_usd - e.import_usd
    if dependent == "gdp":
        return e.gdp_usd
    return e.trade_value_change_usd


def cmd_regress(args) -> None:
    routes, ports, econ, _ = _load_dataset(args)
    if not econ:
        raise DataError("--countries is required for regress")
    out = _outdir(args)
    header = _header(args, _input_paths(args))
    table = _index_table(args, routes, ports, econ)
    lmax = _lmax_list(args)[0]

    candidates = [c.strip() for c in args.candidates.split(",") if c.strip()]
    if args.dependent == "trade_change" and "tv" not in candidates:
        candidates.append("tv")
    econ_by_code = {e.country_code: e for e in econ}
    values = _candidate_values(table, econ_by_code, lmax)

    rows_x, rows_y, used = [], [], []
    excluded = 0
    for c in table.countries():
        e = econ_by_code.get(c)
        if e is None:
            excluded += 1
            continue
        y = _dependent_value(e, args.dependent)
        xs = [values[c].get(name) for name in candidates]
        if y is None or any(x is None for x in xs):
            excluded += 1
            continue
        if args.log_response:
            if y <= 0:
                excluded += 1
                continue
            y = math.log(y)
        rows_x.append(xs)
        rows_y.append(y)
        used.append(c)
    if len(used) < len(candidates) + 2:
        raise DataError(
            f"only {len(used)} complete countries for {len(candidates)} candidates"
        )
    print(f"regress: {len(used)} countries used, {excluded} excluded", file=sys.stderr)

    design = DesignMatrix(
        variables=tuple(candidates),
        x=np.array(rows_x, dtype=float),
        response_name=args.dependent,
        y=np.array(rows_y, dtype=float),
    )
    selection = select_model(standardize(design), vif_threshold=args.vif_threshold)

    _write_csv(
        out / "regression_report.csv",
        header,
        ["variables", "adjusted_r2", "aic", "max_vif", "admissible"],
        [
            ["+".join(r.variables), r.report.adjusted_r2, r.report.aic,
             r.report.max_vif, int(r.admissible)]
            for r in selection.table
        ],
    )
    if selection.verdict is not None:
        rep = selection.verdict.report
        _write_csv(
            out / "coefficients.csv",
            header,
            ["variable", "coef", "ci_lo", "ci_hi", "p_value"],
            [
                [name, rep.coefficients[name], rep.ci95[name][0],
                 rep.ci95[name][1], rep.p_values[name]]
                for name in ("intercept",) + rep.variables
            ],
        )
        verdict = "+".join(selection.verdict.variables)
    else:
        verdict = "none admissible"
    _write_csv(
        out / "scatter.csv",
        header,
        ["country_code", *candidates, args.dependent],
        [[c, *rows_x[i], rows_y[i]] for i, c in enumerate(used)],
    )
    with open(out / "regress_summary.txt", "w", encoding="utf-8", newline="\n") as f:
        f.write(header)
        f.write(f"dependent: {args.dependent}\n")
        f.write(f"log_response: {args.log_response}\n")
        f.write(f"candidates: {','.join(candidates)}\n")
        f.write(f"countries_used: {len(used)}\n")
        f.write(f"countries_excluded: {excluded}\n")
        f.write(f"vif_threshold: {_fmt(args.vif_threshold)}\n")
        f.write(f"verdict: {verdict}\n")
    print(f"verdict: {verdict}")


def cmd_gravity(args) -> None:
    routes, ports, econ, bilateral = _load_dataset(args)
    if not econ or not bilateral:
        raise DataError("--countries and --bilateral are required for gravity")
    out = _outdir(args)
    header = _header(args, _input_paths(args))
    table = _index_table(args, routes, ports, econ)
    lmax = _lmax_list(args)[0]
    g = build_glsn(routes, ports, WeightScheme.UNWEIGHTED)

    if args.variant == "all":
        variants = [VARIANT_NAMES[v] for v in VARIANT_NAMES]
    else:
        variants = [VARIANT_NAMES[v.strip()] for v in args.variant.split(",")]

    report_rows = []
    first_fit = None
    for variant in variants:
        assembly = assemble_pairs(
            econ, bilateral, variant, glsn=g, gb=table.gb[lmax], gc=table.gc
        )
        for reason, count in sorted(assembly.excluded.items()):
            print(f"gravity {variant.value}: excluded {count} pairs ({reason})",
                  file=sys.stderr)
        fit = fit_gravity(assembly.samples, variant)
        report_rows.append([variant.value, fit.adjusted_r2, fit.aic, fit.max_vif])
        if first_fit is None:
            first_fit = (variant, fit, assembly.samples)

    _write_csv(
        out / "gravity_report.csv",
        header,
        ["variant", "adjusted_r2", "aic", "max_vif"],
        report_rows,
    )

    variant, fit, samples = first_fit
    _write_csv(
        out / "pair_predictions.csv",
        header,
        ["country_i", "country_j", "ln_btv_emp", "ln_btv_pred"],
        [
            [s.country_i, s.country_j, s.ln_btv, predict_ln_btv(fit, s, variant)]
            for s in samples
        ],
    )
    retained, excluded = coverage_filter(econ, bilateral, args.coverage)
    estimate = estimate_country_trade(fit, samples, variant)
    _write_csv(
        out / "country_estimates.csv",
        header,
        ["country_code", "empirical_btv_sum", "estimated_btv_sum", "covered"],
        [
            [c, estimate.empirical.get(c), estimate.estimated.get(c),
             int(c in retained)]
            for c in sorted(estimate.empirical)
        ],
    )
    with open(out / "gravity_summary.txt", "w", encoding="utf-8", newline="\n") as f:
        f.write(header)
        f.write(f"primary_variant: {variant.value}\n")
        f.write(f"pairs_fitted: {len(samples)}\n")
        f.write(f"pearson_empirical_vs_estimated: {_fmt(estimate.pearson_r)}\n")
        f.write(f"implied_adjusted_r2: {_fmt(estimate.implied_adjusted_r2)}\n")
        f.write(f"coverage_threshold: {_fmt(args.coverage)}\n")
        f.write(f"countries_covered: {len(retained)}\n")
        f.write(f"countries_excluded_by_coverage: {len(excluded)}\n")
        f.write("note: country totals use exp of the fitted conditional mean of "
                "ln(btv); no log-normal correction\n")
    print(f"gravity: {len(report_rows)} variants fitted, "
          f"reconstruction r={estimate.pearson_r:.4f}")


def cmd_report(args) -> None:
    cmd_build(args)
    cmd_indices(args)
    cmd_regress(args)
    cmd_gravity(args)


def cmd_gen_fixture(args) -> None:
    ds = generate(
        seed=args.seed,
        n_countries=args.n_countries,
        n_ports=args.n_ports,
        n_routes=args.n_routes,
    )
    out = _outdir(args)
    files = {
        "routes.csv": dataset_io.routes_csv(ds.routes),
        "routes_meta.csv": dataset_io.routes_meta_csv(ds.routes),
        "ports.csv": dataset_io.ports_csv(ds.ports),
        "countries.csv": dataset_io.countries_csv(ds.econ),
        "bilateral.csv": dataset_io.bilateral_csv(ds.bilateral),
    }
    for name, text in files.items():
        with open(out / name, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    print(f"fixture seed={args.seed}: {len(ds.ports)} ports, "
          f"{len({p.country_code for p in ds.ports})} countries, "
          f"{len(ds.routes)} routes -> {out}")


def _add_io_args(p: argparse.ArgumentParser, need_econ=False) -> None:
    p.add_argument("--routes", required=True)
    p.add_argument("--routes-meta", dest="routes_meta", default=None)
    p.add_argument("--ports", required=True)
    p.add_argument("--countries", required=need_econ, default=None)
    p.add_argument("--bilateral", default=None)
    p.add_argument("--weighting", choices=sorted(SCHEME_NAMES), default="none")
    p.add_argument("--lmax", default="2,3,4,5",
                   help="path-length caps; the first value feeds gb into regressions")
    p.add_argument("--out", required=True)
    p.add_argument("--strict", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glsn", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct the port graph and export edges")
    _add_io_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("indices", help="compute country index table")
    _add_io_args(p)
    p.set_defaults(func=cmd_indices)

    p = sub.add_parser("regress", help="best-subset regression of a country outcome")
    _add_io_args(p, need_econ=True)
    p.add_argument("--dependent", choices=DEPENDENTS, default="trade")
    p.add_argument("--candidates", default="gc,gb,fb,lsci")
    p.add_argument("--vif-threshold", dest="vif_threshold", type=float, default=5.0)
    p.add_argument("--log-response", dest="log_response", action="store_true")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("gravity", help="gravity model fits and trade reconstruction")
    _add_io_args(p, need_econ=True)
    p.add_argument("--variant", default=",".join(DEFAULT_VARIANTS))
    p.add_argument("--coverage", type=float, default=0.9)
    p.set_defaults(func=cmd_gravity)

    p = sub.add_parser("report", help="run build + indices + regress + gravity")
    _add_io_args(p, need_econ=True)
    p.add_argument("--dependent", choices=DEPENDENTS, default="trade")
    p.add_argument("--candidates", default="gc,gb,fb,lsci")
    p.add_argument("--vif-threshold", dest="vif_threshold", type=float, default=5.0)
    p.add_argument("--log-response", dest="log_response", action="store_true")
    p.add_argument("--variant", default=",".join(DEFAULT_VARIANTS))
    p.add_argument("--coverage", type=float, default=0.9)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("gen-fixture", help="generate a seeded synthetic dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-countries", dest="n_countries", type=int, default=6)
    p.add_argument("--n-ports", dest="n_ports", type=int, default=30)
    p.add_argument("--n-routes", dest="n_routes", type=int, default=12)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

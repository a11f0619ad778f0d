"""Command-line interface.

    nvdlab run       single simulation, CSV of the final (and snapshot) fields
    nvdlab converge  error table under mesh doubling
    nvdlab compare   several schemes on one problem
    nvdlab reference reference solution on the run grid (builds the Euler cache)

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 reference (oracle) failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import csvio
from .analysis import error_norms
from .config import DEFAULTS, PROBLEMS, REFERENCES, RunConfig, load_config_file, make_config
from .errors import ConfigError, DomainError, NumericalFailure, OracleFailure
from .study import (
    PRIMARY_VARIABLE,
    build_problem,
    compare_schemes,
    convergence_study,
    reference_fields,
    simulate,
)

log = logging.getLogger("nvdlab")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_ORACLE = 0, 2, 3, 4


def _defaults_epilog() -> str:
    lines = ["problem defaults:"]
    for name, d in DEFAULTS.items():
        shown = ", ".join(f"{k}={v}" for k, v in d.items())
        lines.append(f"  {name}: {shown}")
    lines.append("flags override keys read from --config (flat 'key = value' lines).")
    return "\n".join(lines)


def _common(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="flat key = value configuration file")
    p.add_argument("--problem", default=S, choices=PROBLEMS)
    p.add_argument("--scheme", default=S, help="fou, waceb, cubista or adbquickest (default adbquickest)")
    p.add_argument("--n-cells", dest="n_cells", default=S, help="number of cells")
    p.add_argument("--theta", default=S, help="Courant number in (0, 1]")
    p.add_argument("--nu", default=S, help="Burgers viscosity [m^2/s]")
    p.add_argument("--gamma", default=S, help="ratio of specific heats (euler)")
    p.add_argument("--g", default=S, help="gravitational acceleration [m/s^2] (swe)")
    p.add_argument("--h-left", dest="h_left", default=S, help="upstream depth [m] (swe)")
    p.add_argument("--h-right", dest="h_right", default=S, help="downstream depth [m] (swe)")
    p.add_argument("--t-final", dest="t_final", default=S, help="final time")
    p.add_argument("--bc-left", dest="bc_left", default=S, help="periodic | transmissive | dirichlet:v[,v...]")
    p.add_argument("--bc-right", dest="bc_right", default=S)
    p.add_argument("--reference", default=S, choices=REFERENCES)
    p.add_argument("--n-terms", dest="n_terms", default=S, help="terms of the Burgers series (default 500)")
    p.add_argument("--n-ref", dest="n_ref", default=S, help="cells of the fine Euler reference")
    p.add_argument("--cache-dir", dest="cache_dir", default=S,
                   help="Euler reference cache (default $NVDLAB_CACHE_DIR or ~/.cache/nvdlab)")
    p.add_argument("--full-scale", dest="full_scale", action="store_const", const="true", default=S,
                   help="euler: use the 12500-cell mesh")
    p.add_argument("--output", "-o", default=S, help="output CSV path (default stdout)")
    p.add_argument("--verbose", "-v", action="store_true", default=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvdlab", description="Normalized-variable convection schemes on 1D conservation laws.",
        epilog=_defaults_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    p = sub.add_parser("run", help="single simulation", epilog=_defaults_epilog(), formatter_class=fmt)
    _common(p)
    p.add_argument("--snapshot-times", dest="snapshot_times", default=argparse.SUPPRESS,
                   help="comma-separated output times; written next to --output")

    p = sub.add_parser("converge", help="mesh-doubling error table", epilog=_defaults_epilog(), formatter_class=fmt)
    _common(p)
    p.add_argument("--meshes", default=argparse.SUPPRESS, help="comma-separated, doubling cell counts")
    p.add_argument("--t-eval", dest="t_eval", default=argparse.SUPPRESS, help="evaluation time")

    p = sub.add_parser("compare", help="several schemes on one problem", epilog=_defaults_epilog(),
                       formatter_class=fmt)
    _common(p)
    p.add_argument("--schemes", default=argparse.SUPPRESS, help="comma-separated schemes")

    p = sub.add_parser("reference", help="reference solution on the run grid", epilog=_defaults_epilog(),
                       formatter_class=fmt)
    _common(p)
    return parser


def _config_from_args(args, command: str) -> RunConfig:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    return make_config(file_values, flags).resolve(command)


def _columns(x, fields, exact):
    cols = {"x": x}
    cols.update(fields)
    if exact is not None:
        cols.update({f"{k}_ref": v for k, v in exact.items() if k in fields})
    return cols


def cmd_run(cfg: RunConfig) -> None:
    out = simulate(cfg, snapshot_times=cfg.snapshot_times)
    exact = reference_fields(cfg, out.x, out.t)
    csvio.write_columns(cfg.output, _columns(out.x, out.fields, exact))
    if out.snapshots and cfg.output:
        for t, fields in sorted(out.snapshots.items()):
            snap_ref = reference_fields(cfg, out.x, t)
            csvio.write_columns(csvio.with_suffix_tag(cfg.output, f"t{t:g}"), _columns(out.x, fields, snap_ref))
    elif out.snapshots:
        log.warning("snapshots requested without --output; only the final state was written")
    if exact is not None:
        var = PRIMARY_VARIABLE[cfg.problem]
        r = error_norms(out.fields[var], exact[var], cfg.scheme.value, cfg.problem)
        print(f"# {cfg.problem} {cfg.scheme.value} N={cfg.n_cells} t={out.t:g} steps={out.n_steps} "
              f"{var}: L1={r.l1:.4e} L2={r.l2:.4e} Linf={r.linf:.4e}", file=sys.stderr)


def cmd_converge(cfg: RunConfig) -> None:
    table = convergence_study(cfg)
    csvio.write_rows(cfg.output, ("N", "L1", "p1", "L2", "p2", "Linf", "pinf"), table.rows())
    print(table.format(), file=sys.stderr)


def cmd_compare(cfg: RunConfig) -> None:
    cmp = compare_schemes(cfg)
    stem = Path(cfg.output) if cfg.output else Path(f"compare-{cfg.problem}.csv")
    sol_path = csvio.with_suffix_tag(stem, "solution")
    csvio.write_columns(sol_path, cmp.solution_columns())
    written = [sol_path]
    if cmp.reference is not None:
        err_path = csvio.with_suffix_tag(stem, "abs_error")
        csvio.write_columns(err_path, cmp.error_columns())
        written.append(err_path)
    rows = [(s.value, r.n_cells, r.l1, r.l2, r.linf) for s, r in cmp.reports.items()]
    csvio.write_rows(sys.stdout, ("scheme", "N", "L1", "L2", "Linf"), rows)
    for p in written:
        print(f"# wrote {p}", file=sys.stderr)


def cmd_reference(cfg: RunConfig) -> None:
    if cfg.reference == "none":
        raise ConfigError(f"problem {cfg.problem!r} has no reference solution")
    grid = build_problem(cfg).grid
    exact = reference_fields(cfg, grid.centers, cfg.t_final)
    cols = {"x": grid.centers}
    cols.update(exact)
    csvio.write_columns(cfg.output, cols)


COMMANDS = {"run": cmd_run, "converge": cmd_converge, "compare": cmd_compare, "reference": cmd_reference}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config_from_args(args, args.command)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                COMMANDS[args.command](cfg)
            finally:
                for w in caught:
                    print(f"nvdlab: warning: {w.message}", file=sys.stderr)
    except (ConfigError, DomainError) as exc:
        print(f"nvdlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"nvdlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OracleFailure as exc:
        print(f"nvdlab: reference failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

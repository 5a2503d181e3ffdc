"""Command line front end.

Commands::

    conley analyze <config> [--out-dir DIR] [--workers N]
    conley identities <config> [--corrupt-limit]
    conley oracle-check --sizes 2,3,8 --trials 10000 --seed 42
    conley render <report.json> --format pgm|dot [--relation NAME] [-o PATH]

Exit status is 0 on success, 1 when a required identity or oracle
comparison fails, 2 on usage or configuration errors.  ``CONLEY_OUT_DIR``
overrides the config's ``out_dir``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .discretization import SubResolutionError, bind_ladder, build_grid, outer_approx
from .limits import limit_relation
from .oracles import HARNESS_CHECKS, MAX_BRUTEFORCE_SIZE, exhaustive_harness
from .pipeline import ConleyReport, analyze
from .relation import Relation, empty, full, identity
from .serialize import (
    REPORT_FORMAT,
    atomic_write,
    dense_from_rle,
    dumps_report,
    morse_dot,
    pgm_bytes,
    relation_to_rle,
)

log = logging.getLogger("conley")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_relation(cfg: RunConfig):
    carrier = build_grid(cfg.grid)
    if isinstance(cfg.system, str):
        f = {"empty": empty, "identity": identity, "full": full}[cfg.system](carrier)
    else:
        f = outer_approx(cfg.system, carrier)
    return carrier, f


def corrupted_limit(f: Relation) -> Relation:
    """Fault injection: the true limit relation with entry (0, 0) flipped."""
    lim = limit_relation(f)
    flip = Relation.from_pairs(f.carrier, [(0, 0)])
    return (lim | flip) - (lim & flip)


def run_pipeline(cfg: RunConfig, *, corrupt_limit: bool = False, workers: int = 1):
    carrier, f = build_relation(cfg)
    rungs = bind_ladder(cfg.ladder, carrier)
    report = analyze(
        f,
        rungs,
        closure_dilation=cfg.closure_dilation,
        limit=corrupted_limit if corrupt_limit else limit_relation,
        workers=workers,
    )
    return carrier, f, report


def report_dict(cfg: RunConfig, carrier, f: Relation, report: ConleyReport) -> dict:
    cr = report.chain_recurrent.indices()
    return {
        "format": REPORT_FORMAT,
        "system": cfg.system_dict(),
        "grid": {"domain": cfg.grid.domain, "cells_per_axis": cfg.grid.cells_per_axis},
        "ladder": {
            "values": list(cfg.ladder.values),
            "include_identity_floor": cfg.ladder.include_identity_floor,
        },
        "closure_dilation": cfg.closure_dilation,
        "seed": cfg.seed,
        "carrier": {
            "size": carrier.size,
            "cell_radius": carrier.cell_radius,
            "metric": carrier.metric.value,
        },
        "rungs": [
            {
                "eps": r.eps,
                "phi_cardinality": r.phi.cardinality(),
                "lhs_cardinality": r.lhs.cardinality(),
                "rhs_cardinality": r.rhs.cardinality(),
            }
            for r in report.rungs
        ],
        "relation": relation_to_rle(f),
        "omega": relation_to_rle(report.omega),
        "conley_def": relation_to_rle(report.conley_def),
        "conley_alt": relation_to_rle(report.conley_alt),
        "routes_equal": report.routes_equal,
        "chain_recurrent": {
            "indices": cr,
            "centers": carrier.centers[cr].tolist(),
        },
        "chain_recurrent_def": {"indices": report.chain_recurrent_def.indices()},
        "components": [c.indices() for c in report.components],
        "morse": {
            "nodes": [{"id": f"c{k}", "members": len(c)} for k, c in enumerate(report.morse.nodes)],
            "edges": [list(e) for e in report.morse.edges],
        },
        "identities": [
            {
                "name": r.name,
                "holds": r.holds,
                "required": r.required,
                "counterexample": list(r.counterexample) if r.counterexample else None,
            }
            for r in report.identity_results
        ],
        "identities_ok": report.required_identities_hold,
    }


def cells_csv(carrier, report: ConleyReport) -> str:
    mask = report.chain_recurrent.to_mask()
    dims = carrier.dim
    head = "index," + ",".join(["center"] if dims == 1 else [f"center_{k}" for k in range(dims)])
    lines = [head + ",chain_recurrent"]
    for i, c in enumerate(carrier.centers.tolist()):
        coords = ",".join(repr(v) for v in c)
        lines.append(f"{i},{coords},{int(mask[i])}")
    return "\n".join(lines) + "\n"


def _out_dir(cfg: RunConfig, override: str | None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get("CONLEY_OUT_DIR")
    return Path(env) if env else cfg.out_dir


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    carrier, f, report = run_pipeline(cfg, workers=args.workers)
    out = _out_dir(cfg, args.out_dir)
    data = report_dict(cfg, carrier, f, report)
    written = []
    if "json" in cfg.outputs:
        written.append(atomic_write(out / "report.json", dumps_report(data)))
    if "dot" in cfg.outputs:
        sizes = [len(c) for c in report.components]
        written.append(atomic_write(out / "morse.dot", morse_dot(sizes, list(report.morse.edges))))
    if "pgm" in cfg.outputs:
        written.append(atomic_write(out / "relation.pgm", pgm_bytes(f.to_dense())))
        written.append(atomic_write(out / "conley.pgm", pgm_bytes(report.conley_alt.to_dense())))
    if "csv" in cfg.outputs:
        written.append(atomic_write(out / "cells.csv", cells_csv(carrier, report)))
    print(
        f"{cfg.system_name}: {len(report.chain_recurrent)} chain recurrent cells, "
        f"{len(report.components)} components, {len(report.morse.edges)} Morse edges, "
        f"routes_equal={report.routes_equal}"
    )
    for p in written:
        print(f"wrote {p}")
    if not report.required_identities_hold:
        _print_failures(report)
        return EXIT_FAIL
    return EXIT_OK


def _print_failures(report: ConleyReport) -> None:
    for r in report.identity_results:
        if r.required and not r.holds:
            print(f"FAIL {r.name} counterexample={r.counterexample}", file=sys.stderr)


def cmd_identities(args) -> int:
    cfg = load_config(args.config)
    _, _, report = run_pipeline(cfg, corrupt_limit=args.corrupt_limit)
    required = [r for r in report.identity_results if r.required]
    diagnostics = [r for r in report.identity_results if not r.required]
    print("required:")
    for r in required:
        print(f"  {'ok  ' if r.holds else 'FAIL'} {r.name}" + ("" if r.holds else f"  counterexample={r.counterexample}"))
    print("diagnostics:")
    for r in diagnostics:
        print(f"  {'ok  ' if r.holds else 'no  '} {r.name}" + ("" if r.holds else f"  counterexample={r.counterexample}"))
    if not report.required_identities_hold:
        _print_failures(report)
        return EXIT_FAIL
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_oracle_check(args) -> int:
    too_big = [n for n in args.sizes if n > MAX_BRUTEFORCE_SIZE or n < 1]
    if too_big:
        print(f"error: sizes must lie in 1..{MAX_BRUTEFORCE_SIZE}, got {too_big}", file=sys.stderr)
        return EXIT_USAGE
    unknown = sorted(set(args.checks) - set(HARNESS_CHECKS))
    if unknown:
        print(f"error: unknown check(s) {unknown}; expected some of {list(HARNESS_CHECKS)}", file=sys.stderr)
        return EXIT_USAGE
    report = exhaustive_harness(args.sizes, args.trials, args.seed, checks=args.checks)
    for n, count in report.checked.items():
        mode = "exhaustive" if report.exhaustive[n] else "random"
        print(f"size {n}: {count} relations agree ({mode})")
    if report.counterexample is not None:
        print(json.dumps(report.counterexample.to_dict(), sort_keys=True))
        return EXIT_FAIL
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        data = json.loads(Path(args.report).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read report {args.report}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "dot":
        sizes = [n["members"] for n in data["morse"]["nodes"]]
        edges = [tuple(e) for e in data["morse"]["edges"]]
        payload: bytes | str = morse_dot(sizes, edges)
        default = "morse.dot"
    else:
        if args.relation not in data:
            print(f"error: report has no relation {args.relation!r}", file=sys.stderr)
            return EXIT_USAGE
        payload = pgm_bytes(dense_from_rle(data[args.relation]))
        default = f"{args.relation}.pgm"
    target = Path(args.output) if args.output else Path(args.report).with_name(default)
    atomic_write(target, payload)
    print(f"wrote {target}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conley", description="Conley relations of discretized maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run both routes and write the report")
    a.add_argument("config")
    a.add_argument("--out-dir", default=None)
    a.add_argument("--workers", type=int, default=1, help="threads for per-rung evaluation")
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("identities", help="run only the identity checks")
    i.add_argument("config")
    i.add_argument("--corrupt-limit", action="store_true", help=argparse.SUPPRESS)
    i.set_defaults(func=cmd_identities)

    o = sub.add_parser("oracle-check", help="compare fast routines with brute force")
    o.add_argument("--sizes", type=_int_list, default=[2, 3, 8])
    o.add_argument("--trials", type=int, default=10_000)
    o.add_argument("--seed", type=int, default=None)
    o.add_argument(
        "--checks",
        type=lambda s: [t.strip() for t in s.split(",") if t.strip()],
        default=list(HARNESS_CHECKS),
    )
    o.set_defaults(func=cmd_oracle_check)

    r = sub.add_parser("render", help="re-render a saved report")
    r.add_argument("report")
    r.add_argument("--format", choices=("pgm", "dot"), required=True)
    r.add_argument("--relation", default="conley_alt", help="relation to draw for pgm")
    r.add_argument("-o", "--output", default=None)
    r.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SubResolutionError as exc:
        print(f"error: ladder rung {exc.eps:g}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: the `perihack` tool.

    perihack validate <catalog.json>
    perihack simulate --games N --seed S --red <policy> --blue <policy>
    perihack probs [--max-bonus B]
    perihack reach [--catalog F]
    perihack serve --port P [--catalog F]

The PERIHACK_CATALOG environment variable supplies a default catalog path;
an explicit --catalog flag overrides it, and without either the built-in
scenario is used.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import agents, kernels, server, sim
from .catalog import (
    CatalogError,
    ScenarioCatalog,
    default_catalog,
    load_catalog,
    parse_document,
    validate_catalog,
)
from .engine import GameConfig


def _resolve_catalog(path: str | None) -> ScenarioCatalog:
    path = path or os.environ.get("PERIHACK_CATALOG")
    if not path:
        return default_catalog()
    return load_catalog(Path(path).read_text("utf-8"))


def _cmd_validate(args) -> int:
    try:
        text = Path(args.catalog).read_text("utf-8")
        catalog = parse_document(text)
    except OSError as exc:
        print(f"cannot read {args.catalog}: {exc}", file=sys.stderr)
        return 2
    except CatalogError as exc:
        print(f"parse error at {exc.path or '<document>'}: {exc.message}", file=sys.stderr)
        return 1
    report = validate_catalog(catalog)
    if report.ok:
        print(f"{args.catalog}: catalog valid ({len(catalog.attack_cards)} attack types, "
              f"{len(catalog.defense_cards)} defense types, "
              f"{len(catalog.win_conditions)} win conditions)")
        return 0
    print(report.summary(), file=sys.stderr)
    return 1


def _cmd_simulate(args) -> int:
    catalog = _resolve_catalog(args.catalog)
    config = GameConfig(rounds=args.rounds) if args.rounds is not None else GameConfig()
    report = sim.run_batch(
        args.games,
        catalog,
        config,
        agents.descriptor(args.red),
        agents.descriptor(args.blue),
        args.seed,
        jobs=args.jobs,
    )
    if args.out:
        Path(args.out).write_text(report.to_json(), "utf-8")
        print(f"report written to {args.out}")
    if args.csv:
        Path(args.csv).write_text(report.histograms_csv(), "utf-8")
        print(f"histograms written to {args.csv}")
    if not args.out:
        print(report.to_text(), end="")
    return 0


def _cmd_probs(args) -> int:
    lo, hi = args.min_bonus, args.max_bonus
    if lo > hi:
        print("--min-bonus must not exceed --max-bonus", file=sys.stderr)
        return 2
    grid = kernels.probability_grid(lo, hi, int(args.repeat))
    span = range(lo, hi + 1)
    print(f"success probability, attack bonus (rows) vs defense bonus (cols)"
          f"{' with repeat penalty' if args.repeat else ''} [{kernels.BACKEND} kernel]")
    header = "a\\d " + "".join(f"{d:>6}" for d in span)
    print(header)
    for a, row in zip(span, grid):
        print(f"{a:>3} " + "".join(f"{p:>6.2f}" for p in row))
    return 0


def _cmd_reach(args) -> int:
    catalog = _resolve_catalog(args.catalog)
    result = sim.reachability_check(catalog)
    width = max((len(c) for c in result), default=10)
    status = 0
    for cond_id, entry in result.items():
        if entry["reachable"]:
            steps = " -> ".join(f"{p['attack']}@{p['location']}" for p in entry["chain"])
            print(f"{cond_id:<{width}}  {entry['length']} step(s): {steps}")
        else:
            print(f"{cond_id:<{width}}  UNREACHABLE")
            status = 1
    return status


def _cmd_serve(args) -> int:
    catalog = _resolve_catalog(args.catalog)
    server.serve(
        catalog,
        host=args.host,
        port=args.port,
        snapshot_dir=args.snapshot_dir,
        static_dir=args.static_dir,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perihack",
        description="Red-vs-blue cybersecurity board game: validator, simulator, server.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a catalog file against the schema and rules")
    p.add_argument("catalog")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("simulate", help="run a seeded batch of AI matches")
    p.add_argument("--games", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--red", choices=agents.RED_POLICY_IDS, default="greedy-red")
    p.add_argument("--blue", choices=agents.BLUE_POLICY_IDS, default="budget-blue")
    p.add_argument("--catalog")
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the JSON report here instead of printing a table")
    p.add_argument("--csv", help="write usage histograms as CSV")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("probs", help="print the d20 success-probability table")
    p.add_argument("--min-bonus", type=int, default=-5)
    p.add_argument("--max-bonus", type=int, default=10)
    p.add_argument("--repeat", action="store_true", help="apply the repeat-attack penalty")
    p.set_defaults(func=_cmd_probs)

    p = sub.add_parser("reach", help="shortest attack chain per win condition")
    p.add_argument("--catalog")
    p.set_defaults(func=_cmd_reach)

    p = sub.add_parser("serve", help="start the game session server")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--catalog")
    p.add_argument("--snapshot-dir", help="write finished-game transcripts here")
    p.add_argument("--static-dir", help="also serve the browser client from this directory")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

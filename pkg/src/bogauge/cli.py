"""Command-line front end: run one experiment config and write its report.

Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 on
configuration errors (unknown subcommand, bad config file, invalid
field), 3 on numerical failure (blowup or non-finite state).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import BlowupError, ConfigError
from .experiments import KINDS, load_config, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bogauge",
        description="Benjamin-Ono solver and gauge/envelope verification harnesses",
    )
    sub = parser.add_subparsers(dest="kind", metavar="|".join(KINDS))
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind!r} experiment")
        p.add_argument("--config", required=True, help="path to the JSON config")
        p.add_argument("--out", default=None, help="report path (overrides config output.path)")
        p.add_argument("--seed", type=int, default=None, help="override data.seed")
        p.add_argument("--quiet", action="store_true", help="print only the summary line")
    return parser


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    if args.kind is None:
        parser.print_usage(sys.stderr)
        return 2

    try:
        cfg = load_config(args.config, kind_override=args.kind, seed_override=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        report = run_experiment(cfg)
    except BlowupError as exc:
        print(f"numerical failure: {exc} (t={exc.time_reached:g})", file=sys.stderr)
        return 3
    except FloatingPointError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    out_path = Path(args.out or cfg.out_path or f"{cfg.kind}_report.json")
    report.save(out_path)
    if cfg.csv_fields:
        report.write_csv(cfg.csv_fields, out_path)

    if not args.quiet:
        for name, v in report.verdicts.items():
            status = "PASS" if v["pass"] else "FAIL"
            print(f"[{status}] {name}: value={v['value']:.6g} "
                  f"{v['op']} {v['threshold']} ({v['threshold_name']})")
    n_fail = sum(1 for v in report.verdicts.values() if not v["pass"])
    overall = "PASS" if n_fail == 0 else f"FAIL ({n_fail} verdicts)"
    print(f"{cfg.kind}: {overall}; report -> {out_path}")
    return 0 if n_fail == 0 else 1


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

"""Command line entry point.

    banditlab run --config FILE [--set key=value ...] --out DIR [--workers N]
    banditlab sweep --configs FILE [FILE ...] --out DIR [--workers N]
    banditlab validate --config FILE [--set key=value ...]

Exit codes: 0 success, 2 invalid configuration or arguments, 3 runtime
failure (a sweep with any failed config also exits 3).
"""

import argparse
import sys

from .harness import format_float, load_config, run_experiment, run_sweep


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="banditlab",
        description="Bandit experiments with adversarial reward corruption.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment config")
    run_p.add_argument("--config", required=True, help="path to key=value config")
    run_p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       dest="overrides", help="override a config key")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--workers", type=int, default=1,
                       help="parallel trial workers (default 1)")

    sweep_p = sub.add_parser("sweep", help="run several configs side by side")
    sweep_p.add_argument("--configs", required=True, nargs="+",
                         help="config files, one subdirectory each")
    sweep_p.add_argument("--out", required=True, help="output directory")
    sweep_p.add_argument("--workers", type=int, default=1,
                         help="parallel trial workers per config (default 1)")

    val_p = sub.add_parser("validate", help="check a config without running")
    val_p.add_argument("--config", required=True, help="path to key=value config")
    val_p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       dest="overrides", help="override a config key")
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "validate":
        cfg, errors = load_config(args.config, args.overrides)
        if errors:
            for err in errors:
                print("error: %s" % err, file=sys.stderr)
            return 2
        print("ok: variant=%s K=%d T=%d trials=%d agents=%d"
              % (cfg["variant"], cfg["K"], cfg["T"], cfg["trials"],
                 cfg["agents"]))
        return 0

    if args.command == "run":
        if args.workers < 1:
            print("error: --workers must be >= 1", file=sys.stderr)
            return 2
        cfg, errors = load_config(args.config, args.overrides)
        if errors:
            for err in errors:
                print("error: %s" % err, file=sys.stderr)
            return 2
        try:
            out = run_experiment(cfg, args.out, workers=args.workers)
        except Exception as exc:
            print("error: run failed: %s" % exc, file=sys.stderr)
            return 3
        t, mean, std, trials = out["final"]
        print("wrote %s" % out["paths"]["trace.csv"])
        print("wrote %s" % out["paths"]["aggregate.csv"])
        print("wrote %s" % out["paths"]["manifest.json"])
        print("final t=%d mean=%s std=%s trials=%d"
              % (t, format_float(mean), format_float(std), trials))
        return 0

    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 2
    table, any_failed = run_sweep(args.configs, args.out, workers=args.workers)
    for row in table:
        print("%-24s %-8s %s" % (row[0], row[1], row[6]))
    return 3 if any_failed else 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line: render figure specs into an output directory.

Exit codes mirror the experiment harness: 0 success, 2 spec error,
3 render failure (missing or ill-formed CSV, mismatched grids).
"""

import argparse
import os
import sys

from .figspec import parse_figure_spec
from .render import CsvContractError, render_regret_figure


def _load_spec(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    spec, errors = parse_figure_spec(text)
    if spec is not None:
        # relative CSV paths count from the spec file's directory
        base = os.path.dirname(os.path.abspath(path))
        spec.series = [(p if os.path.isabs(p) else os.path.join(base, p), lab)
                       for p, lab in spec.series]
    return spec, errors


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="banditplots", description="regret-curve figures from "
        "aggregate CSVs")
    sub = parser.add_subparsers(dest="command", required=True)
    p_plot = sub.add_parser("plot", help="render one figure per spec file")
    p_plot.add_argument("--spec", action="append", required=True,
                        metavar="FILE", help="figure spec (repeatable)")
    p_plot.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    specs = []
    failed = False
    for path in args.spec:
        try:
            spec, errors = _load_spec(path)
        except OSError as exc:
            print("error: %s: %s" % (path, exc), file=sys.stderr)
            return 2
        for err in errors:
            print("error: %s: %s" % (path, err), file=sys.stderr)
            failed = True
        if spec is not None:
            specs.append(spec)
    if failed:
        return 2

    os.makedirs(args.out, exist_ok=True)
    for spec in specs:
        try:
            out_path = render_regret_figure(spec, args.out)
        except CsvContractError as exc:
            print("error: %s" % exc, file=sys.stderr)
            return 3
        print("wrote %s" % out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Measure how far ds and sog sit above the uniform baselines.

The sanity check in the acceptance suite wants each structured variant to
beat its uniform counterpart by a factor of five at the desk scale
(K=12, T=50000, budget 2000).  That margin depends on how fast the gap
estimates sharpen, which the lambda_scale knob controls, so this script
sweeps the knob and records the measured regret ratios.  The committed
output under calibration/ is the reference for where the ratio actually
lands.

Usage:
    python3 scripts/calibrate_sanity_margin.py --out calibration --trials 8
"""

import argparse
import json
import os
import sys

from banditlab.harness import aggregate_results, resolve_config, run_trial


def final_mean(raw, trials):
    cfg, errors = resolve_config(raw)
    if errors:
        raise SystemExit("bad config %r: %s" % (raw, "; ".join(errors)))
    results = [run_trial(cfg, trial) for trial in range(trials)]
    t, mean, std, _ = aggregate_results(results)[-1]
    return {"t": t, "mean": mean, "std": std}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="calibration")
    ap.add_argument("--trials", type=int, default=8)
    ap.add_argument("--scales", type=float, nargs="+",
                    default=[1.0, 1.0 / 16, 1.0 / 256, 1.0 / 1024])
    args = ap.parse_args(argv)

    base = {"K": "12", "T": "50000", "trials": str(args.trials),
            "attack": "two-worst-target", "budget": "2000"}
    print("uniform baselines (%d trials each)" % args.trials)
    uni_single = final_mean(dict(base, variant="uniform"), args.trials)
    uni_subset = final_mean(dict(base, variant="uniform", d="3"), args.trials)
    print("  uniform d=1 regret %.1f" % uni_single["mean"])
    print("  uniform d=3 regret %.1f" % uni_subset["mean"])

    record = {
        "config": dict(base, trials=args.trials),
        "uniform": {"d1": uni_single, "d3": uni_subset},
        "sweeps": [],
    }
    for scale in args.scales:
        row = {"lambda_scale": scale}
        ds = final_mean(dict(base, variant="ds", d="3",
                             lambda_scale=repr(scale)), args.trials)
        sog = final_mean(dict(base, variant="sog",
                              lambda_scale=repr(scale)), args.trials)
        row["ds"] = dict(ds, ratio=uni_subset["mean"] / ds["mean"])
        row["sog"] = dict(sog, ratio=uni_single["mean"] / sog["mean"])
        record["sweeps"].append(row)
        print("scale %-12g ds %8.1f (x%.2f)   sog %8.1f (x%.2f)"
              % (scale, ds["mean"], row["ds"]["ratio"],
                 sog["mean"], row["sog"]["ratio"]))

    os.makedirs(args.out, exist_ok=True)
    json_path = os.path.join(args.out, "sanity_margin.json")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")

    lines = [
        "Regret ratio vs the matching uniform baseline, K=12 T=50000",
        "budget=2000 two-worst-target, %d trials per cell." % args.trials,
        "",
        "uniform d=1: %.1f    uniform d=3: %.1f"
        % (uni_single["mean"], uni_subset["mean"]),
        "",
        "%-14s %10s %8s %10s %8s"
        % ("lambda_scale", "ds", "ratio", "sog", "ratio"),
    ]
    for row in record["sweeps"]:
        lines.append("%-14g %10.1f %8.2f %10.1f %8.2f"
                     % (row["lambda_scale"], row["ds"]["mean"],
                        row["ds"]["ratio"], row["sog"]["mean"],
                        row["sog"]["ratio"]))
    lines += [
        "",
        "The ratio is capped by when the confidence radius first resolves",
        "the smallest gaps.  The radius after t pulls scales like",
        "sqrt(K log / t) regardless of lambda_scale, so shrinking the",
        "epochs does not buy a proportionally earlier switch to the best",
        "arm, and the measured ratios plateau instead of growing.",
        "",
    ]
    txt_path = os.path.join(args.out, "sanity_margin.txt")
    with open(txt_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
    print("wrote %s" % json_path)
    print("wrote %s" % txt_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

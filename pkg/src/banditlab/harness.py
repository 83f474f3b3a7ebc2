"""Experiment harness: flat-file configs, reproducible trials, CSV outputs.

A config is a flat key=value file (# comments allowed). One run executes
`trials` independent trials of one (variant, environment, attack) triple and
writes three files into the output directory:

    trace.csv     trial,t,agent,cum_regret,corruption_spent
    aggregate.csv t,mean,std,trials   (per-trial mean over agents, then
                                       mean/std with ddof=1 across trials)
    manifest.json resolved config, versions, RNG scheme, per-trial wall times

Trial results are always assembled in trial order before anything is
written, so outputs are byte-identical for any worker count (timing lives
only in the manifest, which is why the manifest is not part of that
guarantee).
"""

import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, RNG_SCHEME
from .barbat import BarbatPolicy, BatchedBarbatPolicy, SubsetBarbatPolicy
from .baselines import BarbarPolicy, TsallisInfPolicy, UniformPolicy
from .environments import (Adversary, Environment, generate_means,
                           KINDS, STRATEGIES)
from .graphs import (GraphBarbatPolicy, erdos_renyi_strongly_observable,
                     parse_adjacency)
from .multiagent import IndependentGroup, MaBarbatGroup, run_group_episode
from .rng import (ROLE_ADVERSARY, ROLE_ENV, ROLE_GRAPH, ROLE_MEANS,
                  ROLE_POLICY, make_stream)

VARIANTS = ("barbat", "ma", "bb", "sog", "ds", "barbar", "tsallis", "uniform")

# every key, its default, and its type coercion
DEFAULTS = {
    "variant": None,              # required
    "K": 12,
    "T": 100000,
    "trials": 10,
    "agents": 1,
    "seed": 0,
    "env": "truncated-normal",
    "attack": "none",
    "budget": 0.0,
    "attack_epoch": 1,
    "d": 1,
    "L": 4,
    "bb_exp_denom": 0,            # 0 means the variant default 2(L+1)
    "graph_file": "",
    "graph_p_edge": 0.5,
    "graph_p_loop": 0.5,
    "barbar_delta": 0.1,
    "lambda_scale": 1.0,
    "checkpoint_stride": 0,       # 0 means auto: max(1, T // 500)
}

_INT_KEYS = ("K", "T", "trials", "agents", "seed", "attack_epoch", "d", "L",
             "bb_exp_denom", "checkpoint_stride")
_FLOAT_KEYS = ("budget", "graph_p_edge", "graph_p_loop", "barbar_delta",
               "lambda_scale")

_EPOCH_VARIANTS = ("barbat", "ma", "bb", "sog", "ds", "barbar")


def parse_config_text(text):
    """Flat key=value lines to a raw string dict; returns (raw, errors)."""
    raw = {}
    errors = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, eq, value = stripped.partition("=")
        if not eq:
            errors.append("line %d: expected key=value, got %r" % (lineno, line))
            continue
        key = key.strip()
        value = value.strip()
        if key in raw:
            errors.append("line %d: duplicate key %r" % (lineno, key))
            continue
        raw[key] = value
    return raw, errors


def parse_config_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def resolve_config(raw):
    """Coerce and validate a raw string dict; returns (config, errors).

    Every problem is reported, not just the first. On any error the config
    is unusable (None).
    """
    errors = []
    cfg = dict(DEFAULTS)
    for key, value in raw.items():
        if key not in DEFAULTS:
            errors.append("unknown key %r" % key)
            continue
        if key in _INT_KEYS:
            try:
                cfg[key] = int(value)
            except ValueError:
                errors.append("key %r: %r is not an integer" % (key, value))
        elif key in _FLOAT_KEYS:
            try:
                cfg[key] = float(value)
            except ValueError:
                errors.append("key %r: %r is not a number" % (key, value))
        else:
            cfg[key] = value

    if cfg["variant"] is None:
        errors.append("missing required key 'variant'")
    elif cfg["variant"] not in VARIANTS:
        errors.append("variant %r not one of %s"
                      % (cfg["variant"], ", ".join(VARIANTS)))
    if cfg["env"] not in KINDS:
        errors.append("env %r not one of %s" % (cfg["env"], ", ".join(KINDS)))
    if cfg["attack"] not in STRATEGIES:
        errors.append("attack %r not one of %s"
                      % (cfg["attack"], ", ".join(STRATEGIES)))

    def check(cond, msg):
        if not cond:
            errors.append(msg)

    if isinstance(cfg["K"], int):
        check(cfg["K"] >= 2, "K must be >= 2, got %r" % cfg["K"])
    if isinstance(cfg["T"], int):
        check(cfg["T"] >= 1, "T must be >= 1, got %r" % cfg["T"])
    if isinstance(cfg["trials"], int):
        check(cfg["trials"] >= 1, "trials must be >= 1, got %r" % cfg["trials"])
    if isinstance(cfg["agents"], int):
        check(cfg["agents"] >= 1, "agents must be >= 1, got %r" % cfg["agents"])
    if isinstance(cfg["seed"], int):
        check(cfg["seed"] >= 0, "seed must be >= 0, got %r" % cfg["seed"])
    if isinstance(cfg["budget"], float):
        check(cfg["budget"] >= 0.0, "budget must be >= 0, got %r" % cfg["budget"])
    if isinstance(cfg["lambda_scale"], float):
        check(0.0 < cfg["lambda_scale"] <= 1.0,
              "lambda_scale must be in (0, 1], got %r" % cfg["lambda_scale"])
    if isinstance(cfg["barbar_delta"], float):
        check(0.0 < cfg["barbar_delta"] < 1.0,
              "barbar_delta must be in (0, 1), got %r" % cfg["barbar_delta"])
    for key in ("graph_p_edge", "graph_p_loop"):
        if isinstance(cfg[key], float):
            check(0.0 <= cfg[key] <= 1.0,
                  "%s must be in [0, 1], got %r" % (key, cfg[key]))
    if isinstance(cfg["checkpoint_stride"], int):
        check(cfg["checkpoint_stride"] >= 0,
              "checkpoint_stride must be >= 0, got %r" % cfg["checkpoint_stride"])
    if isinstance(cfg["attack_epoch"], int):
        check(cfg["attack_epoch"] >= 1,
              "attack_epoch must be >= 1, got %r" % cfg["attack_epoch"])

    variant = cfg["variant"]
    if variant == "ds" and isinstance(cfg["d"], int) and isinstance(cfg["K"], int):
        check(1 <= cfg["d"] <= cfg["K"] - 1,
              "d must be in [1, K-1] for variant ds, got d=%r K=%r"
              % (cfg["d"], cfg["K"]))
    elif variant == "uniform" and isinstance(cfg["d"], int) and isinstance(cfg["K"], int):
        check(1 <= cfg["d"] <= cfg["K"],
              "d must be in [1, K] for variant uniform, got d=%r K=%r"
              % (cfg["d"], cfg["K"]))
    elif "d" in raw:
        errors.append("key 'd' requires variant ds or uniform")

    if variant == "bb":
        if isinstance(cfg["L"], int) and isinstance(cfg["T"], int) and cfg["T"] >= 2:
            check(1 <= cfg["L"] <= math.log2(cfg["T"]),
                  "L must be in [1, log2(T)], got L=%r T=%r"
                  % (cfg["L"], cfg["T"]))
        if isinstance(cfg["bb_exp_denom"], int):
            check(cfg["bb_exp_denom"] >= 0,
                  "bb_exp_denom must be >= 0, got %r" % cfg["bb_exp_denom"])
    else:
        for key in ("L", "bb_exp_denom"):
            if key in raw:
                errors.append("key %r requires variant bb" % key)

    if variant != "sog":
        for key in ("graph_file", "graph_p_edge", "graph_p_loop"):
            if key in raw:
                errors.append("key %r requires variant sog" % key)
    if variant != "barbar" and "barbar_delta" in raw:
        errors.append("key 'barbar_delta' requires variant barbar")
    if variant in ("tsallis", "uniform"):
        if cfg["attack"] == "epoch-front-load":
            errors.append("attack epoch-front-load requires an epoch-based "
                          "variant, not %r" % variant)
        if "lambda_scale" in raw:
            errors.append("key 'lambda_scale' has no effect on variant %r"
                          % variant)
    if variant in ("bb", "barbar") and isinstance(cfg["T"], int):
        check(cfg["T"] >= 2, "variant %r needs T >= 2" % variant)

    if variant == "sog" and cfg["graph_file"]:
        try:
            with open(cfg["graph_file"], "r", encoding="utf-8") as fh:
                text = fh.read()
            graph = parse_adjacency(text)
            if isinstance(cfg["K"], int) and graph.K != cfg["K"]:
                errors.append("graph_file has %d vertices but K=%r"
                              % (graph.K, cfg["K"]))
            cfg["_graph_text"] = text
        except OSError as exc:
            errors.append("graph_file %r unreadable: %s" % (cfg["graph_file"], exc))
        except ValueError as exc:
            errors.append("graph_file %r invalid: %s" % (cfg["graph_file"], exc))

    if errors:
        return None, errors
    return cfg, []


def load_config(path, overrides=()):
    """Parse a config file plus --set overrides; returns (config, errors)."""
    try:
        raw, errors = parse_config_file(path)
    except OSError as exc:
        return None, ["config %r unreadable: %s" % (path, exc)]
    for item in overrides:
        key, eq, value = item.partition("=")
        if not eq:
            errors.append("override %r is not key=value" % item)
            continue
        raw[key.strip()] = value.strip()
    if errors:
        return None, errors
    return resolve_config(raw)


def _checkpoints(cfg):
    stride = cfg["checkpoint_stride"]
    if stride == 0:
        stride = max(1, cfg["T"] // 500)
    cps = list(range(stride, cfg["T"] + 1, stride))
    if not cps or cps[-1] != cfg["T"]:
        cps.append(cfg["T"])
    return cps, stride


def _build_group(cfg, trial):
    K, V = cfg["K"], cfg["agents"]
    scale = cfg["lambda_scale"]
    variant = cfg["variant"]
    if variant == "ma":
        return MaBarbatGroup(K, V, lambda_scale=scale)
    if variant == "sog":
        if "_graph_text" in cfg:
            graph = parse_adjacency(cfg["_graph_text"])
        else:
            graph = erdos_renyi_strongly_observable(
                K, cfg["graph_p_edge"], cfg["graph_p_loop"],
                make_stream(cfg["seed"], trial, ROLE_GRAPH))
        make = lambda: GraphBarbatPolicy(K, graph, lambda_scale=scale)
    elif variant == "barbat":
        make = lambda: BarbatPolicy(K, lambda_scale=scale)
    elif variant == "bb":
        denom = cfg["bb_exp_denom"] or None
        make = lambda: BatchedBarbatPolicy(K, cfg["T"], cfg["L"],
                                           exp_denom=denom,
                                           lambda_scale=scale)
    elif variant == "ds":
        make = lambda: SubsetBarbatPolicy(K, cfg["d"], lambda_scale=scale)
    elif variant == "barbar":
        make = lambda: BarbarPolicy(K, cfg["T"], delta=cfg["barbar_delta"],
                                    lambda_scale=scale)
    elif variant == "tsallis":
        make = lambda: TsallisInfPolicy(K)
    else:
        make = lambda: UniformPolicy(K, d=cfg["d"])
    return IndependentGroup([make() for _ in range(V)])


def run_trial(cfg, trial):
    """One seeded trial; returns a plain dict (picklable for workers)."""
    seed = cfg["seed"]
    mu = generate_means(cfg["K"], make_stream(seed, trial, ROLE_MEANS))
    env = Environment(mu, cfg["env"])
    adversary = Adversary(cfg["attack"], cfg["budget"], mu,
                          attack_epoch=cfg["attack_epoch"],
                          rng=make_stream(seed, trial, ROLE_ADVERSARY))
    group = _build_group(cfg, trial)
    env_rng = make_stream(seed, trial, ROLE_ENV)
    policy_rngs = [make_stream(seed, trial, ROLE_POLICY, v)
                   for v in range(cfg["agents"])]
    cps, _ = _checkpoints(cfg)
    t0 = time.perf_counter()
    trace = run_group_episode(group, env, adversary, cfg["T"], env_rng,
                              policy_rngs, checkpoints=cps)
    wall = time.perf_counter() - t0
    comm = group.comm.total if getattr(group, "comm", None) is not None else None
    return {
        "trial": trial,
        "ts": trace.ts,
        "cum_regret": trace.cum_regret,
        "corruption_spent": trace.corruption_spent,
        "wall": wall,
        "comm_total": comm,
    }


def _run_trial_star(args):
    return run_trial(*args)


def format_float(x):
    """Shortest decimal string that round-trips the float exactly."""
    return repr(float(x))


def render_trace_csv(cfg, results):
    lines = ["trial,t,agent,cum_regret,corruption_spent"]
    V = cfg["agents"]
    for res in results:
        ts = res["ts"]
        cum = res["cum_regret"]
        cor = res["corruption_spent"]
        trial = res["trial"]
        for i in range(len(ts)):
            cor_s = format_float(cor[i])
            t = int(ts[i])
            for v in range(V):
                lines.append("%d,%d,%d,%s,%s"
                             % (trial, t, v, format_float(cum[i, v]), cor_s))
    return "\n".join(lines) + "\n"


def aggregate_results(results):
    """Per-checkpoint cross-trial stats of the per-trial agent means.

    Returns rows (t, mean, std, trials); std uses ddof=1 and is 0.0 for a
    single trial.
    """
    ts = results[0]["ts"]
    per_trial = np.stack([res["cum_regret"].mean(axis=1) for res in results])
    mean = per_trial.mean(axis=0)
    if len(results) > 1:
        std = per_trial.std(axis=0, ddof=1)
    else:
        std = np.zeros(len(ts))
    return [(int(ts[i]), float(mean[i]), float(std[i]), len(results))
            for i in range(len(ts))]


def render_aggregate_csv(results):
    lines = ["t,mean,std,trials"]
    for t, mean, std, trials in aggregate_results(results):
        lines.append("%d,%s,%s,%d" % (t, format_float(mean),
                                      format_float(std), trials))
    return "\n".join(lines) + "\n"


def run_experiment(cfg, out_dir, workers=1):
    """Run all trials and write trace.csv, aggregate.csv, manifest.json.

    Results are gathered fully in memory and written last, in trial order,
    so a failed run leaves no partial CSVs behind.
    """
    trials = cfg["trials"]
    jobs = [(cfg, trial) for trial in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial_star, jobs))
    else:
        results = [run_trial(cfg, trial) for trial in range(trials)]
    results.sort(key=lambda res: res["trial"])

    cps, stride = _checkpoints(cfg)
    manifest = {
        "config": {k: v for k, v in cfg.items() if not k.startswith("_")},
        "rng_scheme": RNG_SCHEME,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "python_version": sys.version.split()[0],
        "workers": workers,
        "checkpoint_stride": stride,
        "checkpoint_count": len(cps),
        "per_trial_wall_seconds": [res["wall"] for res in results],
        "comm_broadcast_total": results[0]["comm_total"],
    }

    os.makedirs(out_dir, exist_ok=True)
    paths = {name: os.path.join(out_dir, name)
             for name in ("trace.csv", "aggregate.csv", "manifest.json")}
    written = []
    try:
        for name, text in (
                ("trace.csv", render_trace_csv(cfg, results)),
                ("aggregate.csv", render_aggregate_csv(results)),
                ("manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")):
            with open(paths[name], "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(paths[name])
    except BaseException:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        raise
    agg = aggregate_results(results)
    return {"paths": paths, "final": agg[-1], "results": results}


def run_sweep(config_paths, out_dir, workers=1):
    """Run several configs side by side; one failure does not stop the rest.

    Each config lands in out_dir/<config-stem>/; a comparison.csv at the top
    collects final aggregate rows. Returns (table, any_failed).
    """
    os.makedirs(out_dir, exist_ok=True)
    table = []
    any_failed = False
    for path in config_paths:
        stem = os.path.splitext(os.path.basename(path))[0]
        sub = os.path.join(out_dir, stem)
        cfg, errors = load_config(path)
        if errors:
            any_failed = True
            for err in errors:
                print("%s: %s" % (path, err), file=sys.stderr)
            table.append((stem, "?", 0, 0, "", "", "invalid-config"))
            continue
        try:
            out = run_experiment(cfg, sub, workers=workers)
        except Exception as exc:
            any_failed = True
            print("%s: failed: %s" % (path, exc), file=sys.stderr)
            table.append((stem, cfg["variant"], cfg["trials"], 0, "", "", "error"))
            continue
        t, mean, std, trials = out["final"]
        table.append((stem, cfg["variant"], trials, t,
                      format_float(mean), format_float(std), "ok"))
    lines = ["config,variant,trials,final_t,final_mean,final_std,status"]
    for row in table:
        lines.append(",".join(str(x) for x in row))
    with open(os.path.join(out_dir, "comparison.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return table, any_failed

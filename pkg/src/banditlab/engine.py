"""Shared epoch-schedule mathematics, gap estimation, and the round loop.

Every elimination-style policy in this package runs the same skeleton: play a
fixed-length epoch from a frozen sampling distribution, then refresh reward
estimates and gap estimates at the boundary. This module owns the per-epoch
scalar formulas, the pull-budget schedule, the boundary update, and a
single-agent reference episode loop.

Policy protocol (duck-typed, see barbat.py / baselines.py / graphs.py):
    K          -- arm count
    feedback   -- "bandit" | "subset" | "graph"
    epoch      -- current epoch index (None for non-epoch policies)
    select(rng)        -> arm index (or array of d indices for "subset")
    observe(...)       -- feedback per mode: scalar reward ("bandit"),
                          (arms, rewards) ("subset"), full corrupted reward
                          vector ("graph")
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class EpochParams:
    """Per-epoch scalars driving schedules and confidence radii."""

    m: int          # epoch index, 1-based
    zeta: float     # epoch confidence budget
    delta: float    # epoch failure probability
    lam: float      # per-unit-gap pull budget
    beta: float     # per-arm failure probability inside the epoch
    epoch_len: int  # rounds in the epoch
    base: float     # geometric growth base (2, or a for the batched variant)


def compute_epoch_params(m, K, base=2.0, agents=1, subset=1, log_scale=None,
                         lambda_scale=1.0):
    """Epoch-m scalars.

    base:     geometric base (2 everywhere except the batched variant's a).
    agents:   cooperating agent count V (divides lambda, scales delta/beta).
    subset:   d for the d-set variant (divides the epoch length only).
    log_scale: multiplier inside the leading log; defaults to `agents`
              (the batched variant passes its base a here).
    lambda_scale: desk-scaling knob in (0, 1]; 1.0 is the exact formula.
    """
    if K < 2:
        raise ValueError("need at least 2 arms, got K=%d" % K)
    if m < 1:
        raise ValueError("epoch index must be >= 1, got %d" % m)
    if base <= 0:
        raise ValueError("base must be positive, got %r" % base)
    if agents < 1:
        raise ValueError("agents must be >= 1, got %d" % agents)
    if not 0.0 < lambda_scale <= 1.0:
        raise ValueError("lambda_scale must be in (0, 1], got %r" % lambda_scale)
    if log_scale is None:
        log_scale = agents
    zeta = (m + 4) * base ** (2 * (m + 4)) * math.log(log_scale * K)
    delta = 1.0 / (agents * K * zeta)
    lam = lambda_scale * base ** 8 * math.log(4.0 * K / delta) / agents
    beta = delta / (agents * K)
    epoch_len = math.ceil(K * lam * base ** (2 * (m - 1)) / subset)
    return EpochParams(m=m, zeta=zeta, delta=delta, lam=lam, beta=beta,
                       epoch_len=epoch_len, base=base)


@dataclass
class ArmSchedule:
    """Pull budgets for one epoch.

    n        -- per-arm target budgets (reals, never rounded)
    n_tilde  -- realised budgets; equals n off the trusted best arm(s), the
                best arm absorbs the slack epoch_len - sum(others)
    best     -- trusted arm (int) or arm set (sorted int array) of size d
    probs    -- n_tilde / epoch_len; a distribution (sums to 1) for
                single-pull variants, marginals summing to d for d-sets
    """

    n: np.ndarray
    n_tilde: np.ndarray
    best: object
    probs: np.ndarray


def build_schedule(n, best, epoch_len, subset=1):
    """Realise per-arm budgets: the trusted arm(s) absorb the slack."""
    n = np.asarray(n, dtype=float)
    n_tilde = n.copy()
    if subset == 1:
        rest = float(n.sum() - n[best])
        n_tilde[best] = epoch_len - rest
    else:
        best = np.asarray(best)
        rest = float(n.sum() - n[best].sum())
        n_tilde[best] = epoch_len - rest / subset
    probs = n_tilde / epoch_len
    if probs.min() < 0.0:
        raise RuntimeError(
            "schedule infeasible: negative weight %r (epoch_len=%d too small "
            "for the requested budgets)" % (probs.min(), epoch_len))
    if probs.max() > 1.0 + 1e-9:
        raise RuntimeError("schedule weight above 1: %r" % probs.max())
    total = probs.sum()
    if abs(total - subset) > 1e-6:
        raise RuntimeError("schedule mass %r != %d" % (total, subset))
    return ArmSchedule(n=n, n_tilde=n_tilde, best=best, probs=probs)


@dataclass
class GapEstimates:
    """Epoch-boundary state: empirical rewards, benchmark, and gaps."""

    r: np.ndarray       # clamped empirical rewards, in [0, 1]
    r_star: float       # benchmark (pessimistic best reward)
    gaps: np.ndarray    # estimated gaps, floored at base^-m
    s: np.ndarray       # accumulated observed rewards this epoch
    counts: np.ndarray  # divisor used for r (n_tilde, V*n_tilde, or n_hat)


def update_gap_estimates(s_totals, counts, params, subset=1):
    """Boundary refresh: rewards, pessimistic benchmark, floored gaps.

    The benchmark subtracts the confidence radius sqrt(4 ln(4/beta)/count)
    from each empirical reward and takes the max (or the subset-size-th
    largest for d-set play). Gaps are floored at base^-m, so the best arm's
    gap is exactly the floor.
    """
    s_totals = np.asarray(s_totals, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if counts.min() <= 0.0:
        raise ValueError("counts must be strictly positive")
    r = np.minimum(s_totals / counts, 1.0)
    radius = np.sqrt(4.0 * math.log(4.0 / params.beta) / counts)
    vals = r - radius
    if subset == 1:
        r_star = float(vals.max())
    else:
        # subset-size-th largest value
        r_star = float(np.partition(vals, len(vals) - subset)[len(vals) - subset])
    floor = params.base ** (-params.m)
    gaps = np.maximum(floor, r_star - r)
    return GapEstimates(r=r, r_star=r_star, gaps=gaps, s=s_totals, counts=counts)


def select_best(r, d=1):
    """Arm(s) with the highest estimated reward; ties go to smaller indices."""
    r = np.asarray(r)
    order = np.argsort(-r, kind="stable")
    if d == 1:
        return int(order[0])
    return np.sort(order[:d])


@dataclass
class RegretTrace:
    """Cumulative pseudo-regret and corruption spend at checkpoint rounds."""

    ts: np.ndarray                # checkpoint rounds (ends with T)
    cum_regret: np.ndarray        # cumulative pseudo-regret at each checkpoint
    corruption_spent: np.ndarray  # adversary ledger at each checkpoint
    rounds: int


def _checkpoint_list(T, checkpoints):
    if checkpoints is None:
        return [T]
    cps = sorted(set(int(c) for c in checkpoints if 1 <= c <= T))
    if not cps or cps[-1] != T:
        cps.append(T)
    return cps


def run_episode(policy, env, adversary, T, env_rng, policy_rng,
                checkpoints=None):
    """Single-agent reference loop: T rounds of draw, corrupt, pull, account.

    Pseudo-regret accumulates the true mean gap of the pulled arm (for d-set
    play, the shortfall of the chosen set against the best d arms). Epochs
    that would overrun T are simply truncated: no boundary update happens at T.
    """
    if T < 1:
        raise ValueError("horizon must be >= 1, got %r" % T)
    if policy.K != env.K:
        raise ValueError("policy has %d arms, environment %d" % (policy.K, env.K))
    mu = env.mu
    cps = _checkpoint_list(T, checkpoints)
    out_reg = np.empty(len(cps))
    out_cor = np.empty(len(cps))
    cp_i = 0
    next_cp = cps[0]

    cum = 0.0
    mode = policy.feedback
    if mode == "subset":
        opt = float(np.sort(mu)[-policy.d:].sum())
    else:
        delta_true = float(mu.max()) - mu

    for t in range(1, T + 1):
        r = env.sample(env_rng)
        rt = adversary.corrupt(t, r, epoch=policy.epoch)
        if mode == "bandit":
            arm = policy.select(policy_rng)
            policy.observe(rt[arm])
            cum += delta_true[arm]
        elif mode == "graph":
            arm = policy.select(policy_rng)
            policy.observe(rt)
            cum += delta_true[arm]
        else:
            arms = policy.select(policy_rng)
            policy.observe(arms, rt[arms])
            cum += opt - float(mu[arms].sum())
        if t == next_cp:
            out_reg[cp_i] = cum
            out_cor[cp_i] = adversary.spent
            cp_i += 1
            next_cp = cps[cp_i] if cp_i < len(cps) else 0
    return RegretTrace(ts=np.array(cps), cum_regret=out_reg,
                       corruption_spent=out_cor, rounds=T)

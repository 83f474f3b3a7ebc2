"""Agent groups and the lockstep episode loop used by the harness.

All runs go through run_group_episode, single-agent ones as a group of one.
The cooperative group shares one epoch schedule across V agents and pools
epoch totals at every boundary (one broadcast per agent per epoch); the
independent group wraps V unrelated policy copies that happen to face the
same environment draw stream.
"""

import numpy as np

from .engine import (build_schedule, compute_epoch_params, select_best,
                     update_gap_estimates)


class CommLedger:
    """Broadcast counts per agent; cooperative agents sync once per epoch."""

    def __init__(self, V):
        self.broadcasts = np.zeros(V, dtype=int)

    def record_sync(self):
        self.broadcasts += 1

    @property
    def total(self):
        return int(self.broadcasts.sum())


class MaBarbatGroup:
    """V cooperating agents running one shared elimination schedule.

    Epoch scalars shrink the per-agent budget by V (lambda divides, delta and
    beta tighten), every agent samples the same per-epoch distribution
    independently, and the boundary pools all agents' reward sums: estimates
    divide by V * n_tilde. With V=1 this reduces exactly to the single-agent
    policy, same numbers, same stream consumption.
    """

    feedback = "bandit"

    def __init__(self, K, V, lambda_scale=1.0):
        if V < 1:
            raise ValueError("agent count must be >= 1, got %d" % V)
        self.K = K
        self.V = V
        self.lambda_scale = lambda_scale
        self.comm = CommLedger(V)
        self.r = np.zeros(K)
        self.gaps = np.ones(K)
        self.epoch = 0
        self.epochs_completed = 0
        self.probs_log = []
        self._begin_epoch()

    def _begin_epoch(self):
        self.epoch += 1
        self.params = compute_epoch_params(self.epoch, self.K, agents=self.V,
                                           lambda_scale=self.lambda_scale)
        if 1.0 / self.params.delta < self.V * self.params.epoch_len * (1 - 1e-12):
            raise RuntimeError(
                "communication safety violated in epoch %d: 1/delta < V*N"
                % self.epoch)
        best = select_best(self.r)
        n = self.params.lam * self.gaps ** -2.0
        self.schedule = build_schedule(n, best, self.params.epoch_len)
        self.probs_log.append((self.epoch, self.schedule.probs.copy()))
        self._cum = np.cumsum(self.schedule.probs)
        self._cum[-1] = 1.0
        self.S = np.zeros((self.V, self.K))
        self._left = self.params.epoch_len

    def select_all(self, rngs):
        us = np.array([rng.random() for rng in rngs])
        return np.searchsorted(self._cum, us, side="right")

    def observe_all(self, arms, rewards_matrix):
        rows = np.arange(self.V)
        self.S[rows, arms] += rewards_matrix[rows, arms]
        self._left -= 1
        if self._left == 0:
            self._end_epoch()

    def _end_epoch(self):
        totals = self.S.sum(axis=0)
        counts = self.V * self.schedule.n_tilde
        est = update_gap_estimates(totals, counts, self.params)
        self.r = est.r
        self.gaps = est.gaps
        self.comm.record_sync()
        self.epochs_completed += 1
        self._begin_epoch()


class IndependentGroup:
    """V copies of a single-agent policy with no coordination at all."""

    def __init__(self, policies):
        if not policies:
            raise ValueError("need at least one policy")
        kinds = {p.feedback for p in policies}
        if len(kinds) != 1:
            raise ValueError("mixed feedback modes in one group: %r" % kinds)
        self.policies = list(policies)
        self.V = len(policies)
        self.K = policies[0].K
        self.feedback = policies[0].feedback
        self.comm = None

    @property
    def epoch(self):
        # group-level epoch context (attacks target it); agents of
        # data-dependent-epoch policies can drift apart, agent 0 speaks
        return self.policies[0].epoch

    def select_all(self, rngs):
        picks = [p.select(rng) for p, rng in zip(self.policies, rngs)]
        return np.array(picks)

    def observe_all(self, arms, rewards_matrix):
        mode = self.feedback
        if mode == "bandit":
            for v, p in enumerate(self.policies):
                p.observe(rewards_matrix[v, arms[v]])
        elif mode == "subset":
            for v, p in enumerate(self.policies):
                p.observe(arms[v], rewards_matrix[v, arms[v]])
        else:
            for v, p in enumerate(self.policies):
                p.observe(rewards_matrix[v])


class GroupTrace:
    """Per-agent cumulative regret and shared corruption spend at
    checkpoint rounds."""

    def __init__(self, ts, cum_regret, corruption_spent, rounds):
        self.ts = ts
        self.cum_regret = cum_regret            # shape (len(ts), V)
        self.corruption_spent = corruption_spent
        self.rounds = rounds


def run_group_episode(group, env, adversary, T, env_rng, policy_rngs,
                      checkpoints=None):
    """T lockstep rounds for a whole agent group.

    Each round draws one (V, K) reward matrix from a single stream, lets the
    adversary rewrite it (spend priced at the max rewrite across the matrix),
    then every agent picks and observes. Pseudo-regret accrues per agent
    against the true means.
    """
    if T < 1:
        raise ValueError("horizon must be >= 1, got %r" % T)
    if group.K != env.K:
        raise ValueError("group has %d arms, environment %d" % (group.K, env.K))
    V = group.V
    mu = env.mu
    mode = group.feedback
    if mode == "subset":
        d = group.policies[0].d
        opt = float(np.sort(mu)[-d:].sum())
    else:
        delta_true = float(mu.max()) - mu

    if checkpoints is None:
        cps = [T]
    else:
        cps = sorted(set(int(c) for c in checkpoints if 1 <= c <= T))
        if not cps or cps[-1] != T:
            cps.append(T)
    out_reg = np.empty((len(cps), V))
    out_cor = np.empty(len(cps))
    cp_i = 0
    next_cp = cps[0]

    cum = np.zeros(V)
    for t in range(1, T + 1):
        R = env.sample_matrix(env_rng, V)
        Rt = adversary.corrupt(t, R, epoch=group.epoch)
        arms = group.select_all(policy_rngs)
        group.observe_all(arms, Rt)
        if mode == "subset":
            cum += opt - mu[arms].sum(axis=1)
        else:
            cum += delta_true[arms]
        if t == next_cp:
            out_reg[cp_i] = cum
            out_cor[cp_i] = adversary.spent
            cp_i += 1
            next_cp = cps[cp_i] if cp_i < len(cps) else 0
    return GroupTrace(ts=np.array(cps), cum_regret=out_reg,
                      corruption_spent=out_cor, rounds=T)

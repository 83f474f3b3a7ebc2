"""Stochastic reward environments and budgeted reward-corruption attacks.

Rewards live in [0, 1]. The stochastic layer draws a full K-vector (or a
(V, K) matrix for agent groups) every round so that two runs with the same
seed see identical streams regardless of which arms get pulled. The adversary
then rewrites the vector in place of the environment, paying from a fixed
budget; its per-round price is the largest absolute rewrite across all agents
and arms.
"""

import math

import numpy as np

SIGMA = math.sqrt(0.1)  # truncated-normal scale

_MAX_REJECTION_SWEEPS = 10 ** 6

KINDS = ("truncated-normal", "bernoulli")


def generate_means(K, rng):
    """True means drawn uniformly from [0.02, 0.96]."""
    return rng.uniform(0.02, 0.96, size=K)


class Environment:
    """Per-round i.i.d. reward vectors with fixed true means.

    kind "truncated-normal": Normal(mu_k, sqrt(0.1)) rejection-sampled into
    [0, 1] (out-of-range components are redrawn, not clipped, so the
    conditional law is the true truncation). kind "bernoulli": {0, 1} draws.
    """

    def __init__(self, mu, kind="truncated-normal"):
        mu = np.asarray(mu, dtype=float)
        if mu.ndim != 1 or len(mu) < 1:
            raise ValueError("mu must be a non-empty 1-d array")
        if mu.min() < 0.0 or mu.max() > 1.0:
            raise ValueError("means must lie in [0, 1], got %r" % mu)
        if kind not in KINDS:
            raise ValueError("unknown reward kind %r (want one of %s)"
                             % (kind, ", ".join(KINDS)))
        self.mu = mu
        self.K = len(mu)
        self.kind = kind

    def sample(self, rng):
        """One (K,) reward vector."""
        if self.kind == "bernoulli":
            return (rng.random(self.K) < self.mu).astype(float)
        x = rng.normal(self.mu, SIGMA)
        bad = (x < 0.0) | (x > 1.0)
        sweeps = 0
        while bad.any():
            sweeps += 1
            if sweeps > _MAX_REJECTION_SWEEPS:
                raise RuntimeError("truncated-normal rejection sampling did "
                                   "not terminate")
            idx = np.nonzero(bad)[0]
            x[idx] = rng.normal(self.mu[idx], SIGMA)
            bad[idx] = (x[idx] < 0.0) | (x[idx] > 1.0)
        return x

    def sample_matrix(self, rng, V):
        """One (V, K) reward matrix, one row per agent, single stream."""
        if self.kind == "bernoulli":
            return (rng.random((V, self.K)) < self.mu).astype(float)
        x = rng.normal(self.mu, SIGMA, size=(V, self.K))
        flat = x.ravel()
        mu_flat = np.tile(self.mu, V)
        bad = (flat < 0.0) | (flat > 1.0)
        sweeps = 0
        while bad.any():
            sweeps += 1
            if sweeps > _MAX_REJECTION_SWEEPS:
                raise RuntimeError("truncated-normal rejection sampling did "
                                   "not terminate")
            idx = np.nonzero(bad)[0]
            flat[idx] = rng.normal(mu_flat[idx], SIGMA)
            bad[idx] = (flat[idx] < 0.0) | (flat[idx] > 1.0)
        return x


STRATEGIES = ("none", "two-worst-target", "epoch-front-load")


class Adversary:
    """Budgeted omniscient reward rewriter with an exact spend ledger.

    Both active strategies push rewards toward the same target pattern: 1 on
    the two arms with the smallest true means, 0 everywhere else.

    "two-worst-target" attacks from round 1 until the budget runs out.
    "epoch-front-load" applies the same rewrite but only while the victim
    policy reports epoch == attack_epoch (and stops early if the budget runs
    out). A round that would overshoot the budget is scaled linearly so the
    cumulative spend lands on the budget exactly.

    The per-round spend is max over agents and arms of |rewritten - original|,
    shared across the whole agent group. per_epoch maps epoch index (or None
    for epoch-less policies) to the spend incurred while that epoch was
    reported.
    """

    def __init__(self, strategy, budget, mu, attack_epoch=1, rng=None):
        if strategy not in STRATEGIES:
            raise ValueError("unknown attack strategy %r (want one of %s)"
                             % (strategy, ", ".join(STRATEGIES)))
        if budget < 0:
            raise ValueError("budget must be >= 0, got %r" % budget)
        self.strategy = strategy
        self.budget = float(budget)
        self.attack_epoch = int(attack_epoch)
        self.rng = rng  # reserved; current strategies are deterministic
        self.spent = 0.0
        self.per_epoch = {}
        self._done = strategy == "none" or budget == 0.0
        if strategy != "none":
            mu = np.asarray(mu, dtype=float)
            if len(mu) < 2:
                raise ValueError("targeted attacks need at least 2 arms")
            order = np.argsort(mu, kind="stable")
            self.targets = np.sort(order[:2])

    def corrupt(self, t, rewards, epoch=None):
        """Rewrite one round's rewards; returns the input object untouched
        when the attack is inactive this round."""
        if self._done:
            return rewards
        if self.strategy == "epoch-front-load" and epoch != self.attack_epoch:
            return rewards
        pattern = np.zeros_like(rewards)
        pattern[..., self.targets] = 1.0
        dev = float(np.abs(pattern - rewards).max())
        if dev == 0.0:
            return rewards
        remaining = self.budget - self.spent
        if dev < remaining:
            spend = dev
            out = pattern
            self.spent += spend
        else:
            # final attacked round: scale the rewrite so the total spend
            # lands exactly on the budget
            scale = remaining / dev
            out = rewards + scale * (pattern - rewards) if scale < 1.0 else pattern
            spend = remaining
            self.spent = self.budget
            self._done = True
        self.per_epoch[epoch] = self.per_epoch.get(epoch, 0.0) + spend
        return out

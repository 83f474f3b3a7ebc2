"""BARBAT-style elimination policies: plain, batched, and d-set play.

All three share one skeleton. Epoch m plays a frozen distribution for
epoch_len rounds; every arm k gets a budget n_k = lam / gap_k^2 and the
trusted best arm absorbs the slack, which keeps it played almost always once
the gaps have resolved. At the boundary the empirical rewards (clamped to 1)
feed a pessimistic benchmark, gaps are refloored geometrically, and the next
epoch begins. Corruption hurts each epoch at most proportionally to the spend
inside it, which is what makes the schedule robust without knowing the budget.
"""

import math
from bisect import bisect_right

import numpy as np

from .engine import (build_schedule, compute_epoch_params, select_best,
                     update_gap_estimates)


class BarbatPolicy:
    """Single-agent elimination policy with geometric epoch growth.

    First epoch: all gaps start at 1, estimated rewards at 0, and the trusted
    arm is arm 0 (tie on all-zero estimates). Mid-epoch horizon cutoffs just
    stop play; no boundary update happens on a truncated epoch.
    """

    feedback = "bandit"

    def __init__(self, K, base=2.0, log_scale=None, lambda_scale=1.0,
                 buffer_feedback=False):
        self.K = K
        self.base = base
        self.log_scale = log_scale
        self.lambda_scale = lambda_scale
        self.buffer_feedback = buffer_feedback
        self.r = np.zeros(K)
        self.gaps = np.ones(K)
        self.epoch = 0
        self.epochs_completed = 0
        self.probs_log = []
        self._pending = -1
        self._begin_epoch()

    def _epoch_params(self, m):
        return compute_epoch_params(m, self.K, base=self.base,
                                    log_scale=self.log_scale,
                                    lambda_scale=self.lambda_scale)

    def _begin_epoch(self):
        self.epoch += 1
        self.params = self._epoch_params(self.epoch)
        best = select_best(self.r)
        n = self.params.lam * self.gaps ** -2.0
        self.schedule = build_schedule(n, best, self.params.epoch_len)
        self.probs_log.append((self.epoch, self.schedule.probs.copy()))
        self._cum = np.cumsum(self.schedule.probs)
        self._cum[-1] = 1.0
        self._cum_list = self._cum.tolist()
        self.S = np.zeros(self.K)
        self._left = self.params.epoch_len
        self._buffer = [] if self.buffer_feedback else None

    def select(self, rng):
        arm = bisect_right(self._cum_list, rng.random())
        self._pending = arm
        return arm

    def observe(self, reward):
        if self._buffer is None:
            self.S[self._pending] += reward
        else:
            self._buffer.append((self._pending, reward))
        self._left -= 1
        if self._left == 0:
            self._end_epoch()

    def _end_epoch(self):
        if self._buffer is not None:
            for arm, reward in self._buffer:
                self.S[arm] += reward
        est = update_gap_estimates(self.S, self.schedule.n_tilde, self.params)
        self.r = est.r
        self.gaps = est.gaps
        self.epochs_completed += 1
        self._begin_epoch()


class BatchedBarbatPolicy(BarbatPolicy):
    """Batched variant: L reward batches on a static grid.

    The geometric base a = max(T^(1/exp_denom), 2) with exp_denom defaulting
    to 2(L+1) stretches the epochs so at most L of them cover the horizon;
    epoch boundaries are the batch grid. Rewards are buffered and only read
    at the boundary, which is exactly when a batch arrives.
    """

    def __init__(self, K, T, L, exp_denom=None, lambda_scale=1.0):
        if L < 1:
            raise ValueError("batch count must be >= 1, got %d" % L)
        if L > math.log2(T):
            raise ValueError("batch count %d exceeds log2(T) = %.3f"
                             % (L, math.log2(T)))
        denom = 2 * (L + 1) if exp_denom is None else exp_denom
        if denom <= 0:
            raise ValueError("exponent denominator must be positive")
        a = max(T ** (1.0 / denom), 2.0)
        self.T = T
        self.L = L
        self.a = a
        super().__init__(K, base=a, log_scale=a, lambda_scale=lambda_scale,
                         buffer_feedback=True)


def madow_sample(marginals, rng):
    """Systematic sampling: d distinct indices with the given inclusion
    probabilities. Marginals must lie in [0, 1] and sum to the integer d."""
    c = np.cumsum(marginals)
    d = int(round(c[-1]))
    c[-1] = d
    pts = rng.random() + np.arange(d)
    arms = np.searchsorted(c, pts, side="right")
    if (arms[1:] == arms[:-1]).any():
        raise RuntimeError("systematic sample collision: marginals %r"
                           % (marginals,))
    return arms


class SubsetBarbatPolicy:
    """d-set variant: play d distinct arms per round.

    The schedule divides the epoch length by d and spreads the slack over the
    trusted top-d set; per-arm weights become inclusion marginals summing to
    d, realised by systematic sampling. The boundary benchmark uses the d-th
    largest pessimistic reward so gaps measure distance from the top-d bar.
    """

    feedback = "subset"

    def __init__(self, K, d, lambda_scale=1.0):
        if not 1 <= d <= K - 1:
            raise ValueError("subset size must be in [1, K-1], got d=%d" % d)
        self.K = K
        self.d = d
        self.lambda_scale = lambda_scale
        self.r = np.zeros(K)
        self.gaps = np.ones(K)
        self.epoch = 0
        self.epochs_completed = 0
        self.probs_log = []
        self._begin_epoch()

    def _begin_epoch(self):
        self.epoch += 1
        self.params = compute_epoch_params(self.epoch, self.K, subset=self.d,
                                           lambda_scale=self.lambda_scale)
        best = select_best(self.r, d=self.d)
        n = self.params.lam * self.gaps ** -2.0
        self.schedule = build_schedule(n, best, self.params.epoch_len,
                                       subset=self.d)
        self.probs_log.append((self.epoch, self.schedule.probs.copy()))
        self._cum = np.cumsum(self.schedule.probs)
        self._cum[-1] = float(self.d)
        self._offsets = np.arange(self.d, dtype=float)
        self.S = np.zeros(self.K)
        self._left = self.params.epoch_len

    def select(self, rng):
        pts = rng.random() + self._offsets
        arms = np.searchsorted(self._cum, pts, side="right")
        if (arms[1:] == arms[:-1]).any():
            raise RuntimeError("systematic sample collision in epoch %d"
                               % self.epoch)
        self._pending = arms
        return arms

    def observe(self, arms, rewards):
        self.S[arms] += rewards
        self._left -= 1
        if self._left == 0:
            self._end_epoch()

    def _end_epoch(self):
        est = update_gap_estimates(self.S, self.schedule.n_tilde, self.params,
                                   subset=self.d)
        self.r = est.r
        self.gaps = est.gaps
        self.epochs_completed += 1
        self._begin_epoch()

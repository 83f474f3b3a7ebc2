"""Baseline policies: BARBAR, 1/2-Tsallis-INF, and uniform play.

BARBAR is the horizon-aware elimination predecessor: one lambda for the whole
run, epoch lengths that grow with the inverse squared gaps, and a benchmark
that subtracts a sixteenth of the previous gap instead of a count-based
radius. 1/2-Tsallis-INF is the online-mirror-descent best-of-both-worlds
baseline with importance-weighted losses.
"""

import math
from bisect import bisect_right

import numpy as np


class BarbarPolicy:
    """Epoch-based elimination with a single horizon-dependent lambda.

    lam = 1024 ln(8 K log2(T) / delta). Epoch m plays arm k with probability
    n_k / N where n_k = lam / gap_k^2 and N = sum_k n_k (epoch length ceil(N)).
    Boundary: unclamped empirical means r_hat = S / n, benchmark
    max_k(r_hat_k - gap_k / 16) over the gaps the epoch was scheduled with,
    new gaps floored at 2^-m.
    """

    feedback = "bandit"

    def __init__(self, K, T, delta=0.1, lambda_scale=1.0):
        if K < 2:
            raise ValueError("need at least 2 arms, got K=%d" % K)
        if T < 2:
            raise ValueError("horizon must be >= 2, got %r" % T)
        if not 0.0 < delta < 1.0:
            raise ValueError("delta must be in (0, 1), got %r" % delta)
        self.K = K
        self.T = T
        self.delta = delta
        self.lam = lambda_scale * 1024.0 * math.log(8.0 * K * math.log2(T) / delta)
        self.gaps = np.ones(K)
        self.epoch = 0
        self.epochs_completed = 0
        self.probs_log = []
        self._pending = -1
        self._begin_epoch()

    def _begin_epoch(self):
        self.epoch += 1
        self._epoch_gaps = self.gaps
        self.n = self.lam * self.gaps ** -2.0
        N = float(self.n.sum())
        self.epoch_len = math.ceil(N)
        self.probs = self.n / N
        self.probs_log.append((self.epoch, self.probs.copy()))
        self._cum_list = np.cumsum(self.probs).tolist()
        self._cum_list[-1] = 1.0
        self.S = np.zeros(self.K)
        self._left = self.epoch_len

    def select(self, rng):
        arm = bisect_right(self._cum_list, rng.random())
        self._pending = arm
        return arm

    def observe(self, reward):
        self.S[self._pending] += reward
        self._left -= 1
        if self._left == 0:
            self._end_epoch()

    def _end_epoch(self):
        r_hat = self.S / self.n
        r_star = float((r_hat - self._epoch_gaps / 16.0).max())
        floor = 2.0 ** (-self.epoch)
        self.gaps = np.maximum(floor, r_star - r_hat)
        self.r = r_hat
        self.epochs_completed += 1
        self._begin_epoch()


class TsallisInfPolicy:
    """1/2-Tsallis-INF: mirror descent on cumulative importance-weighted
    losses with the Tsallis-entropy regularizer at power 1/2.

    Each round solves sum_k 4 / (eta_t (Lhat_k - x))^2 = 1 for the
    normalizing shift x (eta_t = 1/sqrt(t)), plays from the resulting weight
    vector, and feeds back loss (1 - reward) / w_arm on the pulled arm.
    """

    feedback = "bandit"
    epoch = None

    def __init__(self, K):
        if K < 2:
            raise ValueError("need at least 2 arms, got K=%d" % K)
        self.K = K
        self.Lhat = np.zeros(K)
        self.t = 1
        self._sqrt_K = math.sqrt(K)
        self._y = None  # warm start for the normalization solve
        self._pending = -1
        self._w = None

    def _weights(self):
        """Solve the normalization for the current losses and step count."""
        eta = 1.0 / math.sqrt(self.t)
        z = self.Lhat - self.Lhat.min()
        lo = 2.0 / eta                  # g(lo) >= 0 via the leader's term
        hi = 2.0 * self._sqrt_K / eta   # g(hi) <= 0 since every term <= 1/K
        y = self._y
        if y is None or not lo <= y <= hi:
            y = lo
        for _ in range(100):
            w = 4.0 / (eta * (z + y)) ** 2
            g = float(w.sum()) - 1.0
            if abs(g) <= 1e-12:
                self._y = y
                return w
            gp = float(-2.0 * (w / (z + y)).sum())
            y -= g / gp
            if y < lo:
                y = lo
        # Newton stalled (float-degenerate case); fall back to bisection
        a, b = lo, hi
        for _ in range(200):
            y = 0.5 * (a + b)
            w = 4.0 / (eta * (z + y)) ** 2
            g = float(w.sum()) - 1.0
            if abs(g) <= 1e-12:
                self._y = y
                return w
            if g > 0.0:
                a = y
            else:
                b = y
        raise RuntimeError("weight normalization did not converge at t=%d"
                           % self.t)

    def select(self, rng):
        w = self._weights()
        self._w = w
        c = np.cumsum(w)
        arm = int(np.searchsorted(c, rng.random() * c[-1], side="right"))
        if arm >= self.K:
            arm = self.K - 1
        self._pending = arm
        return arm

    def observe(self, reward):
        loss = 1.0 - reward
        self.Lhat[self._pending] += loss / self._w[self._pending]
        self.t += 1


class UniformPolicy:
    """Plays uniformly at random forever; the no-learning control."""

    epoch = None

    def __init__(self, K, d=1):
        if K < 2:
            raise ValueError("need at least 2 arms, got K=%d" % K)
        if not 1 <= d <= K:
            raise ValueError("subset size must be in [1, K], got d=%d" % d)
        self.K = K
        self.d = d
        self.feedback = "bandit" if d == 1 else "subset"

    def select(self, rng):
        if self.d == 1:
            return int(rng.integers(self.K))
        return rng.choice(self.K, size=self.d, replace=False)

    def observe(self, *args):
        pass

"""Directed feedback graphs with side observations and the graph variant.

Pulling arm v reveals the (possibly corrupted) rewards of every out-neighbor
of v, v itself included only when it carries a self-loop. Graphs must be
strongly observable: every vertex has a self-loop or in-edges from all other
vertices. The planner covers each arm's observation budget by pulling a small
dominating set per sweep instead of pulling every arm directly.
"""

import math

import numpy as np

from .engine import (build_schedule, compute_epoch_params, select_best,
                     update_gap_estimates)
from bisect import bisect_right


class FeedbackGraph:
    """Dense boolean adjacency over K arms; A[i, j] means pulling i shows j."""

    def __init__(self, adjacency):
        A = np.asarray(adjacency, dtype=bool).copy()
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square, got %r" % (A.shape,))
        K = A.shape[0]
        if K < 2:
            raise ValueError("need at least 2 vertices, got %d" % K)
        loops = np.diagonal(A)
        in_deg_off = A.sum(axis=0) - loops
        bad = np.nonzero(~loops & (in_deg_off < K - 1))[0]
        if len(bad):
            raise ValueError(
                "not strongly observable: vertices %s lack both a self-loop "
                "and in-edges from all other vertices" % bad.tolist())
        self.A = A
        self.A_float = A.astype(float)
        self.K = K
        self.loops = loops
        self.out_idx = [np.nonzero(A[v])[0] for v in range(K)]
        self.in_idx = [np.nonzero(A[:, v])[0] for v in range(K)]

    def __eq__(self, other):
        return isinstance(other, FeedbackGraph) and np.array_equal(self.A, other.A)


def _is_acyclic(sub):
    """Kahn's algorithm on a small boolean matrix (diagonal already cleared)."""
    n = sub.shape[0]
    indeg = sub.sum(axis=0).astype(int)
    stack = list(np.nonzero(indeg == 0)[0])
    seen = 0
    alive = np.ones(n, dtype=bool)
    while stack:
        v = stack.pop()
        alive[v] = False
        seen += 1
        for u in np.nonzero(sub[v])[0]:
            indeg[u] -= 1
            if indeg[u] == 0 and alive[u]:
                stack.append(u)
    return seen == n


def oods(graph, active=None):
    """Observability-optimal dominating set of the induced subgraph.

    Every active vertex ends up an out-neighbor of some returned vertex.
    Alternates two moves on the shrinking residual: if the residual is
    acyclic ignoring self-loops, take all its root vertices at once;
    otherwise take the single vertex with the largest residual out-degree
    (self-loops count, ties to the smallest index). Chosen vertices and
    everything they observe leave the residual.

    The one uncovered case (a loop-less vertex that became a singleton
    residual) is patched with its smallest-index in-neighbor, which exists
    by strong observability. Returned indices are sorted and may include a
    patch vertex outside `active`.
    """
    K = graph.K
    if active is None:
        remaining = np.ones(K, dtype=bool)
    else:
        remaining = np.zeros(K, dtype=bool)
        remaining[active] = True
    want = remaining.copy()
    D = []
    while remaining.any():
        idx = np.nonzero(remaining)[0]
        sub = graph.A[np.ix_(idx, idx)]
        nodiag = sub.copy()
        np.fill_diagonal(nodiag, False)
        if _is_acyclic(nodiag):
            chosen = idx[np.nonzero(nodiag.sum(axis=0) == 0)[0]]
        else:
            outdeg = sub.sum(axis=1)
            chosen = [idx[int(np.argmax(outdeg))]]
        for v in chosen:
            D.append(int(v))
            remaining[graph.out_idx[v]] = False
            remaining[v] = False
    covered = np.zeros(K, dtype=bool)
    for v in D:
        covered[graph.out_idx[v]] = True
    for u in np.nonzero(want & ~covered)[0]:
        helpers = graph.in_idx[u]
        helpers = helpers[helpers != u]
        D.append(int(helpers[0]))
        covered[graph.out_idx[helpers[0]]] = True
    if not covered[want].all():
        raise RuntimeError("dominating set failed to cover its input")
    return np.array(sorted(set(D)), dtype=int)


def independence_number(graph):
    """Exact independence number of the symmetrized graph, self-loops
    dropped. Branch and bound over vertex bitmasks; K is capped at 32."""
    K = graph.K
    if K > 32:
        raise ValueError("exact independence number supported up to K=32")
    sym = graph.A | graph.A.T
    np.fill_diagonal(sym, False)
    nbr = [0] * K
    for v in range(K):
        mask = 0
        for u in np.nonzero(sym[v])[0]:
            mask |= 1 << int(u)
        nbr[v] = mask
    best = 0

    def grow(cand, size):
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = size
            return
        # pivot on the highest-degree candidate to prune fast
        v, vdeg = -1, -1
        c = cand
        while c:
            b = c & -c
            u = b.bit_length() - 1
            d = (nbr[u] & cand).bit_count()
            if d > vdeg:
                v, vdeg = u, d
            c ^= b
        grow(cand & ~(nbr[v] | (1 << v)), size + 1)
        grow(cand & ~(1 << v), size)

    grow((1 << K) - 1, 0)
    return best


class ObservationPlan:
    """Pull budgets whose side observations cover per-arm targets.

    Z       -- planned pull mass per arm (before best-arm slack)
    n_tilde -- realised pull mass; the trusted arm absorbs epoch slack
    probs   -- n_tilde / epoch_len, the sampling distribution
    n_hat   -- expected observations per arm: sum of n_tilde over in-edges
    sweeps  -- dominating-set sweeps used
    """

    def __init__(self, Z, n_tilde, probs, n_hat, sweeps):
        self.Z = Z
        self.n_tilde = n_tilde
        self.probs = probs
        self.n_hat = n_hat
        self.sweeps = sweeps


def plan_epoch_observations(graph, n, epoch_len, best):
    """Cover per-arm observation targets n with dominating-set pulls.

    Sweeps the residual graph of unsatisfied arms: each sweep pulls every
    member of a dominating set equally often (the smallest remaining
    deficit), crediting every out-neighbor once per in-edge. Each sweep
    satisfies at least the smallest-deficit arm, so at most K sweeps run.
    """
    K = graph.K
    n = np.asarray(n, dtype=float)
    tol = 1e-9
    Z = np.zeros(K)
    H = np.zeros(K)
    active = n - H > tol
    sweeps = 0
    while active.any():
        sweeps += 1
        if sweeps > K + 1:
            raise RuntimeError("observation planning did not converge")
        D = oods(graph, np.nonzero(active)[0])
        hbar = float((n - H)[active].min())
        Z[D] += hbar
        for v in D:
            H[graph.out_idx[v]] += hbar
        active = n - H > tol
    n_tilde = Z.copy()
    off_best = float(Z.sum() - Z[best])
    if off_best > epoch_len + 1e-6:
        raise RuntimeError(
            "epoch length %d cannot absorb the observation plan" % epoch_len)
    n_tilde[best] = max(epoch_len - off_best, 0.0)
    probs = n_tilde / epoch_len
    if probs.min() < 0.0 or probs.max() > 1.0 + 1e-9:
        raise RuntimeError("invalid plan weights: %r" % probs)
    n_hat = n_tilde @ graph.A_float
    return ObservationPlan(Z=Z, n_tilde=n_tilde, probs=probs, n_hat=n_hat,
                           sweeps=sweeps)


class GraphBarbatPolicy:
    """Side-observation elimination: plain epoch scalars, dominating-set
    pull plans, and estimates built from every observed neighbor."""

    feedback = "graph"

    def __init__(self, K, graph, lambda_scale=1.0):
        if graph.K != K:
            raise ValueError("graph has %d vertices, want %d" % (graph.K, K))
        self.K = K
        self.graph = graph
        self.lambda_scale = lambda_scale
        self.r = np.zeros(K)
        self.gaps = np.ones(K)
        self.epoch = 0
        self.epochs_completed = 0
        self.probs_log = []
        self._pending = -1
        self._begin_epoch()

    def _begin_epoch(self):
        self.epoch += 1
        self.params = compute_epoch_params(self.epoch, self.K,
                                           lambda_scale=self.lambda_scale)
        best = select_best(self.r)
        n = self.params.lam * self.gaps ** -2.0
        self.plan = plan_epoch_observations(self.graph, n,
                                            self.params.epoch_len, best)
        self.best = best
        self.probs_log.append((self.epoch, self.plan.probs.copy()))
        self._cum_list = np.cumsum(self.plan.probs).tolist()
        self._cum_list[-1] = 1.0
        self.S = np.zeros(self.K)
        self._left = self.params.epoch_len

    def select(self, rng):
        arm = bisect_right(self._cum_list, rng.random())
        self._pending = arm
        return arm

    def observe(self, rewards):
        nb = self.graph.out_idx[self._pending]
        self.S[nb] += rewards[nb]
        self._left -= 1
        if self._left == 0:
            self._end_epoch()

    def _end_epoch(self):
        if self.plan.n_hat.min() <= 0.0:
            raise RuntimeError("observation plan left an arm unobserved")
        est = update_gap_estimates(self.S, self.plan.n_hat, self.params)
        self.r = est.r
        self.gaps = est.gaps
        self.epochs_completed += 1
        self._begin_epoch()


def erdos_renyi_strongly_observable(K, p_edge, p_loop, rng):
    """Directed G(K, p_edge) with Bernoulli(p_loop) self-loops, repaired to
    strong observability by giving loop-less vertices in-edges from everyone."""
    A = rng.random((K, K)) < p_edge
    np.fill_diagonal(A, rng.random(K) < p_loop)
    loops = np.diagonal(A)
    for v in np.nonzero(~loops)[0]:
        A[:, v] = True
        A[v, v] = False
    return FeedbackGraph(A)


def random_undirected_graph(K, p_edge, rng):
    """Symmetric G(K, p_edge) with all self-loops."""
    U = rng.random((K, K)) < p_edge
    A = np.triu(U, 1)
    A = A | A.T
    np.fill_diagonal(A, True)
    return FeedbackGraph(A)


def random_dag_graph(K, p_edge, rng):
    """Random acyclic orientation (plus all self-loops), randomly relabeled."""
    A = np.triu(rng.random((K, K)) < p_edge, 1)
    np.fill_diagonal(A, True)
    perm = rng.permutation(K)
    return FeedbackGraph(A[np.ix_(perm, perm)])


def format_adjacency(graph):
    """Text form, one line per vertex: 'v: n1 n2 ...' (out-neighbors)."""
    lines = []
    for v in range(graph.K):
        nbrs = " ".join(str(int(u)) for u in graph.out_idx[v])
        lines.append("%d: %s" % (v, nbrs))
    return "\n".join(lines) + "\n"


def parse_adjacency(text):
    """Inverse of format_adjacency; vertices 0..K-1 must each head one line."""
    rows = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        if not _:
            raise ValueError("malformed adjacency line %r" % raw)
        v = int(head)
        if v in rows:
            raise ValueError("vertex %d listed twice" % v)
        rows[v] = [int(tok) for tok in rest.split()]
    K = len(rows)
    if sorted(rows) != list(range(K)):
        raise ValueError("vertex lines must cover 0..K-1 exactly, got %s"
                         % sorted(rows))
    A = np.zeros((K, K), dtype=bool)
    for v, nbrs in rows.items():
        for u in nbrs:
            if not 0 <= u < K:
                raise ValueError("neighbor %d out of range for K=%d" % (u, K))
            A[v, u] = True
    return FeedbackGraph(A)

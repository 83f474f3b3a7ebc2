"""Cooperative and independent agent groups under the lockstep loop."""

import math

import numpy as np
import pytest

from banditlab.barbat import BarbatPolicy
from banditlab.baselines import UniformPolicy
from banditlab.engine import compute_epoch_params, update_gap_estimates
from banditlab.environments import Adversary, Environment
from banditlab.multiagent import (IndependentGroup, MaBarbatGroup,
                                  run_group_episode)
from banditlab.rng import ROLE_ENV, ROLE_POLICY, make_stream

from oracles import epoch_constants as oc


def run_group(group, mu, T, seed, budget=0.0, checkpoints=None,
              kind="bernoulli"):
    env = Environment(mu, kind=kind)
    strategy = "two-worst-target" if budget else "none"
    adv = Adversary(strategy, budget, env.mu)
    rngs = [make_stream(seed, 0, ROLE_POLICY, v) for v in range(group.V)]
    return run_group_episode(group, env, adv, T,
                             make_stream(seed, 0, ROLE_ENV), rngs,
                             checkpoints=checkpoints)


def test_single_agent_group_equals_plain_policy():
    mu = [0.8, 0.5, 0.1]
    T = 2500
    ma = MaBarbatGroup(3, 1, lambda_scale=1 / 256)
    ta = run_group(ma, mu, T, seed=21)
    plain = IndependentGroup([BarbatPolicy(3, lambda_scale=1 / 256)])
    tb = run_group(plain, mu, T, seed=21)
    assert np.array_equal(ta.cum_regret, tb.cum_regret)
    assert ma.epochs_completed == plain.policies[0].epochs_completed
    for (ea, pa), (eb, pb) in zip(ma.probs_log,
                                  plain.policies[0].probs_log):
        assert ea == eb and np.array_equal(pa, pb)


def test_first_epoch_matches_frozen_ma_constants():
    group = MaBarbatGroup(12, 10)
    lam, N, inv_delta = oc.FROZEN_MA_V10_K12[1]
    assert math.isclose(group.params.lam, lam, rel_tol=1e-12)
    assert group.params.epoch_len == N
    assert math.isclose(1.0 / group.params.delta, inv_delta, rel_tol=1e-12)


def test_agents_share_schedule_but_not_draws():
    group = MaBarbatGroup(4, 8, lambda_scale=1 / 256)
    trace = run_group(group, [0.9, 0.6, 0.3, 0.1], 1500, seed=3)
    assert group.epochs_completed >= 3
    assert len(group.probs_log) == group.epochs_completed + 1
    # all agents saw the same number of epochs but different arms, so their
    # regret paths differ
    finals = trace.cum_regret[-1]
    assert len(set(finals.tolist())) > 1


def test_boundary_pools_all_agents():
    group = MaBarbatGroup(3, 2, lambda_scale=1 / 256)
    N = group.params.epoch_len
    sched = group.schedule
    params = group.params
    rng = np.random.default_rng(5)
    rngs = [np.random.default_rng(6), np.random.default_rng(7)]
    total = np.zeros(3)
    for t in range(N):
        arms = group.select_all(rngs)
        R = rng.random((2, 3))
        if t == N - 1:
            expected_S = group.S.copy()
            rows = np.arange(2)
            expected_S[rows, arms] += R[rows, arms]
            total = expected_S.sum(axis=0)
        group.observe_all(arms, R)
    assert group.epoch == 2
    est = update_gap_estimates(total, 2 * sched.n_tilde, params)
    assert np.array_equal(group.r, est.r)
    assert np.array_equal(group.gaps, est.gaps)


def test_one_broadcast_per_agent_per_epoch():
    group = MaBarbatGroup(4, 6, lambda_scale=1 / 256)
    T = 2000
    run_group(group, [0.85, 0.55, 0.35, 0.1], T, seed=9)
    M = group.epochs_completed
    assert np.all(group.comm.broadcasts == M)
    assert group.comm.total == 6 * M
    assert group.comm.total <= 6 * math.ceil(math.log2(6 * T))


def test_communication_safety_margin_over_epoch_grid():
    for V in (1, 10, 100):
        for m in range(1, 13):
            p = compute_epoch_params(m, 12, agents=V)
            assert 1.0 / p.delta >= V * p.epoch_len * (1 - 1e-12)


def test_all_zero_rewards_keep_arm_zero_trusted():
    group = MaBarbatGroup(3, 2, lambda_scale=1 / 256)
    run_group(group, [0.0, 0.0, 0.0], 600, seed=13)
    assert group.epochs_completed >= 1
    assert np.all(group.r == 0.0)
    assert group.schedule.best == 0


def test_mixed_feedback_group_rejected():
    with pytest.raises(ValueError, match="mixed feedback"):
        IndependentGroup([BarbatPolicy(4), UniformPolicy(4, d=2)])
    with pytest.raises(ValueError):
        IndependentGroup([])


def test_group_trace_shapes_and_monotonicity():
    group = IndependentGroup([UniformPolicy(3) for _ in range(4)])
    trace = run_group(group, [0.9, 0.5, 0.1], 400, seed=17, budget=5.0,
                      checkpoints=[100, 200, 400])
    assert trace.cum_regret.shape == (3, 4)
    assert np.all(np.diff(trace.cum_regret, axis=0) >= 0.0)
    assert np.all(np.diff(trace.corruption_spent) >= 0.0)
    assert trace.corruption_spent[-1] <= 5.0 + 1e-12


def test_group_env_mismatch_rejected():
    group = MaBarbatGroup(3, 2)
    env = Environment([0.5, 0.5])
    adv = Adversary("none", 0.0, env.mu)
    with pytest.raises(ValueError):
        run_group_episode(group, env, adv, 10, np.random.default_rng(0),
                          [np.random.default_rng(1), np.random.default_rng(2)])

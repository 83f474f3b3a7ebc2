"""Epoch scalar formulas against the frozen high-precision oracle."""

import math

import numpy as np
import pytest

from banditlab.engine import compute_epoch_params

from oracles import epoch_constants as oc


def assert_rel(a, b, tol=1e-12):
    assert math.isclose(a, b, rel_tol=tol), (a, b)


def test_frozen_table_self_consistent():
    oc.verify_frozen()


def test_plain_matches_frozen_table():
    for (K, m), (zeta, lam, N, beta) in oc.FROZEN_PLAIN.items():
        p = compute_epoch_params(m, K)
        assert_rel(p.zeta, zeta)
        assert_rel(p.lam, lam)
        assert p.epoch_len == N
        assert_rel(p.beta, beta)


def test_plain_matches_oracle_grid():
    for K in (2, 5, 12, 16, 64):
        for m in range(1, 21):
            want = oc.oracle_epoch_params(m, K)
            got = compute_epoch_params(m, K)
            assert_rel(got.zeta, want["zeta"])
            assert_rel(got.delta, want["delta"])
            assert_rel(got.lam, want["lam"])
            assert_rel(got.beta, want["beta"])
            # beyond 2^52 the float64 product underlying ceil() can land
            # one integer off the exact value; irrelevant at any runnable m
            assert math.isclose(got.epoch_len, want["epoch_len"],
                                rel_tol=1e-12, abs_tol=1)


def test_multiagent_matches_frozen():
    for m, (lam, N, inv_delta) in oc.FROZEN_MA_V10_K12.items():
        p = compute_epoch_params(m, 12, agents=10)
        assert_rel(p.lam, lam)
        assert p.epoch_len == N
        assert_rel(1.0 / p.delta, inv_delta)


def test_batched_base_matches_frozen():
    for m, (lam, N) in oc.FROZEN_BB_A4_K12.items():
        p = compute_epoch_params(m, 12, base=4, log_scale=4)
        assert_rel(p.lam, lam)
        assert p.epoch_len == N


def test_subset_matches_frozen():
    for m, N in oc.FROZEN_DS_K12_D3.items():
        assert compute_epoch_params(m, 12, subset=3).epoch_len == N


def test_cumulative_epoch_ends():
    total = 0
    for m, want in enumerate(oc.FROZEN_EPOCH_ENDS_K2, start=1):
        total += compute_epoch_params(m, 2).epoch_len
        assert total == want


def test_lambda_scale_shrinks_budget_only():
    full = compute_epoch_params(3, 12)
    scaled = compute_epoch_params(3, 12, lambda_scale=1 / 16)
    assert_rel(scaled.lam, full.lam / 16)
    assert_rel(scaled.zeta, full.zeta)
    assert_rel(scaled.delta, full.delta)
    assert_rel(scaled.beta, full.beta)
    assert scaled.epoch_len == math.ceil(12 * scaled.lam * 2 ** 4)


def test_epoch_len_covers_floored_budgets():
    # any gap vector respecting the entering floor fits inside the epoch
    rng = np.random.default_rng(7)
    for m in (1, 3, 7):
        for K in (2, 12):
            p = compute_epoch_params(m, K)
            floor_in = 2.0 ** (-(m - 1))
            gaps = np.maximum(floor_in, rng.random(K))
            assert (p.lam * gaps ** -2.0).sum() <= p.epoch_len + 1e-9


def test_agent_scaling_divides_lambda():
    # V agents split the per-arm budget V ways after the delta tightening
    team = compute_epoch_params(1, 12, agents=10)
    assert_rel(team.lam * 10,
               256.0 * math.log(4.0 * 12 / team.delta))
    assert_rel(1.0 / team.delta, 10 * 12 * team.zeta)


def test_parameter_validation():
    with pytest.raises(ValueError):
        compute_epoch_params(1, 1)
    with pytest.raises(ValueError):
        compute_epoch_params(0, 4)
    with pytest.raises(ValueError):
        compute_epoch_params(1, 4, base=0.0)
    with pytest.raises(ValueError):
        compute_epoch_params(1, 4, agents=0)
    with pytest.raises(ValueError):
        compute_epoch_params(1, 4, lambda_scale=0.0)
    with pytest.raises(ValueError):
        compute_epoch_params(1, 4, lambda_scale=1.5)

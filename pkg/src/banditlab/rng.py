"""Deterministic RNG stream derivation.

Every random draw in a run comes from a PCG64 generator seeded through
numpy's SeedSequence with spawn key (trial, role, agent). Identical
(master_seed, trial, role, agent) always yields bit-identical streams, which
is what makes traces reproducible regardless of worker count and lets
different algorithm variants share the exact same environment randomness
(paired comparisons).
"""

import numpy as np

# stream roles
ROLE_MEANS = 0     # the per-trial mean vector
ROLE_ENV = 1       # reward draws, one stream per trial (full (V, K) matrices)
ROLE_POLICY = 2    # per-agent algorithm randomness
ROLE_ADVERSARY = 3 # attack randomness (current strategies draw nothing)
ROLE_GRAPH = 4     # per-trial feedback-graph generation


def make_stream(master_seed, trial, role, agent=0):
    """Return a fresh Generator for the given (trial, role, agent) stream."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial, role, agent))
    return np.random.Generator(np.random.PCG64(ss))

"""Simulation library for stochastic multi-armed bandits under adversarial
reward corruption.

Implements the BARBAT family of elimination algorithms (single-agent,
multi-agent, batched, graph-feedback, d-set semi-bandit), the BARBAR and
1/2-Tsallis-INF baselines, budgeted attack strategies, and a reproducible
CLI experiment harness.
"""

__version__ = "0.1.0"

RNG_SCHEME = "numpy-pcg64-seedseq-v1"

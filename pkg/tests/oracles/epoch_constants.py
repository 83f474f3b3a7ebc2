"""Independent recomputation of the epoch-schedule constants.

Everything here is derived from the closed-form definitions alone, with
mpmath at 50 significant digits, and written down as frozen float literals.
The tests compare the package implementation against these numbers; the
FROZEN_* tables were generated once by ``python -m oracles.epoch_constants``
and pasted in, so a silent change in either side trips the comparison.
"""

import math

from mpmath import mp, mpf, log, ceil, sqrt

mp.dps = 50


def oracle_epoch_params(m, K, base=2, agents=1, subset=1, log_scale=None):
    """Recompute one epoch's scalars exactly; returns plain floats."""
    base = mpf(base)
    ls = mpf(agents) if log_scale is None else mpf(log_scale)
    zeta = (m + 4) * base ** (2 * (m + 4)) * log(ls * K)
    delta = 1 / (agents * K * zeta)
    lam = base ** 8 * log(4 * K / delta) / agents
    beta = delta / (agents * K)
    epoch_len = int(ceil(K * lam * base ** (2 * (m - 1)) / subset))
    return {
        "zeta": float(zeta),
        "delta": float(delta),
        "lam": float(lam),
        "beta": float(beta),
        "epoch_len": epoch_len,
    }


def oracle_barbar_lambda(K, T, delta=0.1):
    return float(1024 * log(8 * K * log(T, 2) / mpf(repr(delta))))


def oracle_radius(beta, count):
    return float(sqrt(4 * log(4 / mpf(repr(beta))) / mpf(repr(count))))


def truncated_normal_mean(mu, sigma=math.sqrt(0.1)):
    """Mean of a Normal(mu, sigma) conditioned on [0, 1]."""
    a = (0.0 - mu) / sigma
    b = (1.0 - mu) / sigma
    phi = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    Phi = lambda x: 0.5 * (1.0 + math.erf(x / math.sqrt(2)))
    return mu + sigma * (phi(a) - phi(b)) / (Phi(b) - Phi(a))


def deterministic_two_arm_chain(epochs=4):
    """Gap/weight progression for K=2, mu=[1,0], rewards taken at their
    means. Arm 0 stays best throughout; returns per-epoch (p0, gap1)."""
    out = {}
    gap1 = mpf(1)
    for m in range(1, epochs + 1):
        p = oracle_epoch_params(m, 2)
        lam, beta, N = mpf(repr(p["lam"])), p["beta"], p["epoch_len"]
        n1 = lam / gap1 ** 2
        nt0, nt1 = N - n1, n1
        rad0 = sqrt(4 * log(4 / mpf(repr(beta))) / nt0)
        rad1 = sqrt(4 * log(4 / mpf(repr(beta))) / nt1)
        rstar = max(1 - rad0, 0 - rad1)
        gap1 = max(mpf(2) ** (-m), rstar)
        out[m] = (float(nt0 / N), float(gap1))
    return out


# (K, m) -> (zeta, lam, epoch_len, beta), plain single-agent schedule.
FROZEN_PLAIN = {
    (2, 1): (3548.913564466919984216, 2802.428293041067617134, 5605,
             0.000070444093793406416375),
    (2, 2): (17034.78510944121592424, 3203.993968027011999866, 25632,
             0.00001467585287362633674479),
    (2, 3): (79495.66384405900764644, 3598.347898509482124186, 115148,
             0.000003144825615777072159598),
    (2, 4): (363408.7490014126063837, 3987.423291468051914133, 510391,
             6.879306034512345349121e-7),
    (2, 5): (1635339.370506356728727, 4372.467105042778076917, 2238704,
             1.528734674336076744249e-7),
    (12, 1): (12722.72204691456158838, 4046.656632856261288683, 48560,
              5.45830084068257197527e-7),
    (12, 2): (61069.06582518989562421, 4448.222307842205671415, 213515,
              1.137146008475535828181e-7),
}

# cumulative epoch end rounds for K=2, epochs 1..5
FROZEN_EPOCH_ENDS_K2 = [5605, 31237, 146385, 656776, 2895480]

# m -> (lam, epoch_len, 1/delta) for V=10 agents, K=12
FROZEN_MA_V10_K12 = {
    1: (480.399592997977672978, 5765, 2941434.926765289058866),
    2: (520.5561604965721112511, 24987, 14118887.64847338748256),
}

# m -> (lam, epoch_len) for the batched variant, K=12, T=2**20, L=4 (a=4)
FROZEN_BB_A4_K12 = {
    1: (1519259.08976182050658, 18231110),
    2: (1712912.089808575420155, 328879122),
}

# m -> epoch_len for the subset variant, K=12, d=3
FROZEN_DS_K12_D3 = {1: 16187, 2: 71172}

# (K, T) -> lambda at delta=0.1
FROZEN_BARBAR_LAMBDA = {
    (12, 100000): 9909.16256023101688209,
    (2, 60000): 8027.927434291943737671,
    (12, 50000): 9845.577714664926375109,
}

# m -> (best-arm weight, arm-1 gap after the epoch) for K=2, mu=[1,0],
# rewards at their means; matches deterministic_two_arm_chain().
FROZEN_TWO_ARM_CHAIN = {
    1: (0.5000127933914241539458, 0.8750031983069393693862),
    2: (0.8367361947755556092691, 0.951686296152455651302),
    3: (0.965496820360700672347, 0.9775116307063155600466),
    4: (0.9918239137010773169921, 0.9889060196520501836219),
}


def verify_frozen(rel=1e-15):
    """Recompute every frozen literal and fail on drift."""

    def close(a, b):
        assert math.isclose(a, b, rel_tol=rel), (a, b)

    for (K, m), (z, l, N, b) in FROZEN_PLAIN.items():
        p = oracle_epoch_params(m, K)
        close(p["zeta"], z)
        close(p["lam"], l)
        assert p["epoch_len"] == N
        close(p["beta"], b)
    total = 0
    for m, want in enumerate(FROZEN_EPOCH_ENDS_K2, start=1):
        total += oracle_epoch_params(m, 2)["epoch_len"]
        assert total == want
    for m, (l, N, inv_d) in FROZEN_MA_V10_K12.items():
        p = oracle_epoch_params(m, 12, agents=10)
        close(p["lam"], l)
        assert p["epoch_len"] == N
        close(1.0 / p["delta"], inv_d)
    for m, (l, N) in FROZEN_BB_A4_K12.items():
        p = oracle_epoch_params(m, 12, base=4, log_scale=4)
        close(p["lam"], l)
        assert p["epoch_len"] == N
    for m, N in FROZEN_DS_K12_D3.items():
        assert oracle_epoch_params(m, 12, subset=3)["epoch_len"] == N
    for (K, T), l in FROZEN_BARBAR_LAMBDA.items():
        close(oracle_barbar_lambda(K, T), l)
    chain = deterministic_two_arm_chain()
    for m, (p0, g1) in FROZEN_TWO_ARM_CHAIN.items():
        close(chain[m][0], p0)
        close(chain[m][1], g1)


if __name__ == "__main__":
    verify_frozen()
    print("frozen constants verified")

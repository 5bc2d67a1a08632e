"""Independent reference computations used to freeze expected values.

Nothing here calls the code paths under test; each routine reaches the same
quantity by a different route (brute force, Gram matrices, grids).
"""

import math

import numpy as np
from scipy import linalg
from scipy.optimize import minimize_scalar
from scipy.special import gammaln
from scipy.stats import poisson


def slot_mutual_information(q, lam0, lam1, tail=1e-12):
    """I(X;N) in nats for one OOK slot: N ~ Poisson(lam1) if on (prob q), else Poisson(lam0).

    Counts are truncated at the first n whose upper tail under lam1 is below ``tail``.
    """
    n_max = int(poisson.isf(tail, lam1)) + 2
    n = np.arange(n_max + 1)
    lp1 = n * math.log(lam1) - lam1 - gammaln(n + 1)
    if lam0 > 0:
        lp0 = n * math.log(lam0) - lam0 - gammaln(n + 1)
    else:
        lp0 = np.where(n == 0, 0.0, -np.inf)
    lmix = np.logaddexp(math.log1p(-q) + lp0, math.log(q) + lp1)
    with np.errstate(invalid="ignore"):
        t0 = np.where(np.isfinite(lp0), np.exp(lp0) * (lp0 - lmix), 0.0)
    t1 = np.exp(lp1) * (lp1 - lmix)
    return (1 - q) * t0.sum() + q * t1.sum()


def slot_capacity_rate(gamma0, gamma1, slot):
    """max_q I / slot for a fixed slot duration, with the maximising q."""
    res = minimize_scalar(
        lambda q: -slot_mutual_information(q, gamma0 * slot, gamma1 * slot),
        bounds=(1e-9, 1 - 1e-9), method="bounded", options={"xatol": 1e-13},
    )
    return -res.fun / slot, res.x


def poisson_capacity_bruteforce(gamma0, gamma1, levels=5):
    """Continuous-time OOK capacity (nats/s) as the slot width goes to zero.

    The per-slot rate is analytic in the slot width, so Richardson
    extrapolation over halved widths converges quickly. Also returns the
    maximising on-probability at the finest slot.
    """
    h0 = 0.02 / gamma1
    table = []
    q_fine = None
    for k in range(levels):
        rate, q_fine = slot_capacity_rate(gamma0, gamma1, h0 / 2 ** k)
        row = [rate]
        for j in range(1, k + 1):
            row.append((2 ** j * row[j - 1] - table[k - 1][j - 1]) / (2 ** j - 1))
        table.append(row)
    return table[-1][-1], q_fine


def srm_channel_from_gram(kets):
    """Square-root measurement channel for equiprobable pure states via the Gram matrix.

    For the pretty-good measurement P(j|i) = |(G^1/2)_ji|^2 with G_ij = <s_i|s_j>.
    """
    s = np.column_stack([np.asarray(k, dtype=complex) for k in kets])
    g = s.conj().T @ s
    root = linalg.sqrtm(g)
    return np.abs(root.T) ** 2


def grid_capacity(p, n=200001, base=2):
    """Binary-input capacity by exhaustive search over Q(1) on a uniform grid."""
    p = np.asarray(p, dtype=float)
    best = 0.0
    best_q = None
    qs = np.linspace(0, 1, n)
    for q in qs:
        w = np.array([1 - q, q])
        out = w @ p
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, p * np.log(p / out), 0.0)
            # unused inputs may see inf terms; their weight is zero
            val = float(np.nansum(w[:, None] * terms))
        if val > best:
            best, best_q = val, q
    return best / math.log(base), best_q

"""Photon-counting (Poisson) channels: PPM, on-off keying, cost per bit.

Everything here is computed in nats; ``base`` arguments convert at the end.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass
from typing import Iterable, Sequence

import numpy as np

from .dmc import Dmc, blahut_arimoto, z_channel
from .errors import ValidationError
from .qstate import log_factor

EQUAL_INTENSITY_RTOL = 1e-12
LN2 = math.log(2.0)


@dataclass(frozen=True)
class IntensityPair:
    """Background (``gamma0``) and peak (``gamma1``) photon rates in photons/s."""

    gamma0: float
    gamma1: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma0) and math.isfinite(self.gamma1)):
            raise ValueError("intensities must be finite")
        if self.gamma0 < 0:
            raise ValueError(f"gamma0 must be non-negative, got {self.gamma0}")
        if not self.gamma1 > self.gamma0:
            raise ValueError(f"gamma1 must exceed gamma0 (got {self.gamma0}, {self.gamma1})")


@dataclass(frozen=True)
class PpmConfig:
    slots: int
    mean_photons: float

    def __post_init__(self):
        if int(self.slots) != self.slots or self.slots < 2:
            raise ValueError(f"PPM needs at least 2 slots, got {self.slots}")
        if not self.mean_photons > 0:
            raise ValueError("mean photon number must be positive")


def ppm_capacity(cfg: PpmConfig, base=2) -> float:
    """(1 - e^-m) log M per transmission: an M-ary erasure channel with eps = e^-m."""
    return -math.expm1(-cfg.mean_photons) * math.log(cfg.slots) / log_factor(base)


# --------------------------------------------------------------------------
# intensity-limited OOK
# --------------------------------------------------------------------------

def _ook_terms(ip: IntensityPair) -> tuple[float, float] | None:
    """(delta, w) with delta = gamma1/gamma0 - 1 and w = delta-dependent exponent.

    The optimum mean rate is gamma0 * e^w, capacity gamma0 (e^w - 1 - w) and
    the optimal on-probability (e^w - 1) / delta. Returns None on the
    gamma0 = 0 and gamma1 = gamma0 branches.
    """
    g0, g1 = ip.gamma0, ip.gamma1
    if g0 == 0.0 or (g1 - g0) <= EQUAL_INTENSITY_RTOL * g1:
        return None
    delta = g1 / g0 - 1.0
    if delta < 1e-4:
        w = delta / 2 - delta ** 2 / 6 + delta ** 3 / 12 - delta ** 4 / 20
    else:
        w = (1.0 + delta) * math.log1p(delta) / delta - 1.0
    return delta, w


def _expm1_minus(w: float) -> float:
    """e^w - 1 - w without cancellation for small w."""
    if abs(w) < 1e-3:
        return w * w * (0.5 + w * (1 / 6 + w * (1 / 24 + w * (1 / 120 + w / 720))))
    return math.expm1(w) - w


def ook_capacity(ip: IntensityPair) -> float:
    """Capacity in nats/s of the peak-limited Poisson channel under OOK.

    For gamma0 > 0 this is
    (gamma0/e)(gamma1/gamma0)^(gamma1/(gamma1-gamma0))
    - gamma0 gamma1 ln(gamma1/gamma0) / (gamma1 - gamma0),
    reducing to gamma1/e when there is no background light.
    """
    if ip.gamma0 == 0.0:
        return ip.gamma1 / math.e
    t = _ook_terms(ip)
    if t is None:
        return 0.0
    _, w = t
    return ip.gamma0 * _expm1_minus(w)


def ook_optimal_q(ip: IntensityPair) -> float:
    """Probability of the 'on' symbol at capacity."""
    if ip.gamma0 == 0.0:
        return 1.0 / math.e
    t = _ook_terms(ip)
    if t is None:
        return 0.5
    delta, w = t
    return math.expm1(w) / delta


def capacity_per_photon(ip: IntensityPair) -> float:
    """C / gamma_ave in nats per signal photon, gamma_ave = q (gamma1 - gamma0)."""
    if ip.gamma0 == 0.0:
        return 1.0
    t = _ook_terms(ip)
    if t is None:
        return 0.0
    return ook_capacity(ip) / (ook_optimal_q(ip) * (ip.gamma1 - ip.gamma0))


def cost_per_bit(ip: IntensityPair) -> float:
    """Signal photons spent per bit: ln 2 / C_ph."""
    cph = capacity_per_photon(ip)
    return math.inf if cph == 0.0 else LN2 / cph


# --------------------------------------------------------------------------
# divergence and capacity per unit cost
# --------------------------------------------------------------------------

def divergence(p, q, base=math.e) -> float:
    """Kullback-Leibler divergence D(p || q)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions have different lengths")
    for name, x in (("p", p), ("q", q)):
        if np.any(x < 0) or abs(x.sum() - 1.0) > 1e-12:
            raise ValidationError(f"{name} is not a probability vector")
    pos = p > 0
    if np.any(pos & (q == 0)):
        raise ValidationError("p is not absolutely continuous with respect to q (q = 0 where p > 0)")
    d = float(np.sum(p[pos] * np.log(p[pos] / q[pos])))
    return max(0.0, d) / log_factor(base)


def capacity_per_unit_cost(channel: Dmc, costs: Sequence[float], base=math.e) -> float:
    """sup_x D(P(.|x0) || P(.|x)) / b[x] for a channel with one free input x0.

    Returns ``math.inf`` when some costly input's output distribution does
    not cover the free input's (the divergence is unbounded).
    """
    b = np.asarray(costs, dtype=float)
    if b.shape != (channel.shape[0],):
        raise ValueError("need one cost per input symbol")
    if np.any(b < 0) or not np.all(np.isfinite(b)):
        raise ValueError("costs must be finite and non-negative")
    free = np.flatnonzero(b == 0)
    if free.size != 1:
        raise ValueError(f"exactly one input must have zero cost, found {free.size}")
    x0 = int(free[0])
    rows = channel.transition
    best = 0.0
    for x in range(len(b)):
        if x == x0:
            continue
        try:
            d = divergence(rows[x0], rows[x], math.e)
        except ValidationError:
            return math.inf
        best = max(best, d / b[x])
    return best / log_factor(base)


def ook_z_channel(m: float) -> Dmc:
    """Symbol-by-symbol OOK detection: an 'on' pulse of mean m yields no count w.p. e^-m."""
    if not m > 0:
        raise ValueError("mean photon number must be positive")
    ch = z_channel(math.exp(-m))
    return Dmc(ch.transition, ("off", "on"), ("no-count", "count"))


# --------------------------------------------------------------------------
# band-limited OOK
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BandLimitedPoint:
    m: float
    p: float
    q: float
    capacity_nats: float
    nats_per_photon: float


def z_channel_mi(q: float, p: float) -> float:
    """I(X;Y) in nats of the Z-channel with 'on' probability q and miss probability p."""
    r = q * (1.0 - p)
    val = 0.0
    if r > 0:
        val -= r * math.log(q)
        val -= (1.0 - r) * math.log1p(-r)
    if p > 0:
        val += q * p * math.log(p)
    return max(0.0, val)


def band_limited_q(p: float) -> float:
    """Capacity-achieving on-probability for the Z-channel with miss probability p."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    one_minus = -math.expm1(math.log(p))
    lp = math.log(p)
    a = math.exp(p / one_minus * lp)
    c = math.exp(lp / one_minus)
    return a / (1.0 + a - c)


def band_limited_ook(m: float, check: bool = False) -> BandLimitedPoint:
    """Finite-pulse OOK with mean m photons per 'on' pulse and no background.

    With ``check=True`` the closed-form on-probability is compared against
    Blahut-Arimoto on the same Z-channel and a mismatch above 1e-6 raises.
    """
    if not m > 0:
        raise ValueError("m must be positive")
    p = math.exp(-m)
    q = band_limited_q(p)
    cap = z_channel_mi(q, p)
    if check:
        ba = blahut_arimoto(z_channel(p), math.e, tol=1e-13)
        if abs(ba.optimal_input[1] - q) > 1e-6:
            raise ValidationError(f"closed-form q = {q!r} disagrees with Blahut-Arimoto {ba.optimal_input[1]!r}")
    return BandLimitedPoint(m=m, p=p, q=q, capacity_nats=cap, nats_per_photon=cap / (q * m))


# --------------------------------------------------------------------------
# curves
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CostCurvePoint:
    gamma1: float
    capacity_nats_per_s: float
    q_on: float
    photons_per_bit: float


CSV_HEADERS = {
    "fig7": ("x", "capacity_nats", "q_on", "cost_per_bit"),
    "fig8": ("m", "p", "q", "capacity_nats", "nats_per_photon"),
}


def emit_curve(kind: str, grid: Iterable[float], gamma0: float = 1.0) -> list:
    """Tabulate cost per bit against gamma1 (``fig7``) or C_ph against m (``fig8``)."""
    xs = [float(x) for x in grid]
    if not xs:
        raise ValueError("grid is empty")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("grid must be strictly increasing")
    if kind == "fig7":
        if xs[0] <= gamma0:
            raise ValueError(f"fig7 grid must lie above gamma0 = {gamma0}")
        out = []
        for g1 in xs:
            ip = IntensityPair(gamma0, g1)
            out.append(CostCurvePoint(g1, ook_capacity(ip), ook_optimal_q(ip), cost_per_bit(ip)))
        return out
    if kind == "fig8":
        if xs[0] <= 0:
            raise ValueError("fig8 grid must be positive")
        return [band_limited_ook(m) for m in xs]
    raise ValueError(f"unknown curve kind {kind!r}")


def curve_csv(kind: str, points: Sequence) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADERS[kind])
    for pt in points:
        writer.writerow([f"{v:.12g}" for v in astuple(pt)])
    return buf.getvalue()

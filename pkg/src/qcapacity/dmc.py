"""Discrete memoryless channels: construction, mutual information, capacity.

All iteration runs in nats; results are converted to the requested base on
the way out.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, ValidationError
from .qstate import log_factor

STOCHASTIC_TOL = 1e-12
ZERO_INPUT_TOL = 1e-12


@dataclass(frozen=True)
class Dmc:
    """Row-stochastic transition matrix ``transition[k, j] = P(j | k)``."""

    transition: np.ndarray
    input_labels: tuple[str, ...] = ()
    output_labels: tuple[str, ...] = ()

    def __post_init__(self):
        p = np.array(self.transition, dtype=float)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise DimensionError(f"transition matrix must be 2-D, got shape {p.shape}")
        object.__setattr__(self, "transition", p)
        inputs = tuple(self.input_labels) or tuple(str(k) for k in range(p.shape[0]))
        outputs = tuple(self.output_labels) or tuple(str(j) for j in range(p.shape[1]))
        if len(inputs) != p.shape[0] or len(outputs) != p.shape[1]:
            raise DimensionError("label counts do not match the transition matrix")
        object.__setattr__(self, "input_labels", inputs)
        object.__setattr__(self, "output_labels", outputs)
        self.validate()

    def validate(self, tol: float = STOCHASTIC_TOL) -> None:
        p = self.transition
        if not np.all(np.isfinite(p)):
            raise ValidationError("transition matrix has non-finite entries")
        bad = np.argwhere((p < -tol) | (p > 1 + tol))
        if bad.size:
            k, j = bad[0]
            raise ValidationError(f"entry P[{k}][{j}] = {p[k, j]!r} outside [0, 1]")
        sums = p.sum(axis=1)
        for k, s in enumerate(sums):
            if abs(s - 1.0) > tol:
                raise ValidationError(f"row {k} sums to {s!r}, not 1")

    @property
    def shape(self) -> tuple[int, int]:
        return self.transition.shape

    def to_json(self) -> dict:
        return {
            "inputs": list(self.input_labels),
            "outputs": list(self.output_labels),
            "P": self.transition.tolist(),
        }

    @classmethod
    def from_json(cls, obj) -> "Dmc":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            p = obj["P"]
        except (KeyError, TypeError) as exc:
            raise ValueError("channel JSON needs a 'P' matrix") from exc
        rows = [list(map(float, row)) for row in p]
        if len({len(r) for r in rows}) > 1:
            raise ValidationError("rows of P have different lengths")
        return cls(np.array(rows), tuple(obj.get("inputs", ())), tuple(obj.get("outputs", ())))


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    optimal_input: np.ndarray
    iterations: int = 0
    gap: float = 0.0
    base: float = 2.0
    upper_bound: float = field(default=math.nan, repr=False)


def _as_distribution(q, k: int) -> np.ndarray:
    q = np.asarray(q, dtype=float).reshape(-1)
    if q.size != k:
        raise DimensionError(f"input distribution has {q.size} entries, channel has {k} inputs")
    if np.any(q < -1e-15) or abs(q.sum() - 1.0) > STOCHASTIC_TOL:
        raise ValidationError(f"not a probability vector: {q.tolist()}")
    return np.clip(q, 0.0, None)


def _row_divergences(p: np.ndarray, out: np.ndarray) -> np.ndarray:
    """D(P(.|k) || out) in nats for each row k, with 0 log 0 = 0."""
    # subnormal entries contribute < 1e-305 nats but can underflow ``out``
    pos = p >= np.finfo(float).tiny
    safe_out = np.where(out > 0, out, 1.0)
    ratio = np.where(pos, p, 1.0) / safe_out
    terms = np.where(pos, p * np.log(ratio), 0.0)
    d = terms.sum(axis=1)
    # a row putting mass where ``out`` has none would be infinite; only
    # possible for inputs outside the support, handled by the caller
    d[np.any(pos & (out <= 0), axis=1)] = np.inf
    return d


def mutual_information(q, ch: Dmc, base=2) -> float:
    """I(X;Y) for input distribution ``q`` over channel ``ch``."""
    q = _as_distribution(q, ch.shape[0])
    out = q @ ch.transition
    d = _row_divergences(ch.transition, out)
    used = q > 0
    return max(0.0, float(np.dot(q[used], d[used]))) / log_factor(base)


def binary_entropy(p: float, base=2) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    h = 0.0
    for x in (p, 1.0 - p):
        if x > 0.0:
            h -= x * math.log(x)
    return h / log_factor(base)


def blahut_arimoto(ch: Dmc, base=2, tol: float = 1e-9, max_iter: int = 100_000,
                   support: Sequence[bool] | None = None) -> CapacityResult:
    """Channel capacity by the Blahut-Arimoto alternating maximisation.

    Starts from the uniform distribution (over ``support`` when given) and
    stops once the certified upper bound max_k D(P(.|k) || PY) and the lower
    bound log sum_k Q(k) exp(D_k) are within ``tol`` (in the output base).
    Inputs masked out by ``support`` are held at probability zero.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = ch.transition
    k = p.shape[0]
    mask = np.ones(k, dtype=bool) if support is None else np.asarray(support, dtype=bool)
    if mask.shape != (k,):
        raise DimensionError(f"support mask must have {k} entries")
    if not mask.any():
        raise ValueError("support mask excludes every input")
    lf = log_factor(base)
    tol_nats = tol * lf

    q = np.where(mask, 1.0, 0.0)
    q /= q.sum()
    lower = upper = 0.0
    for it in range(1, max_iter + 1):
        out = q @ p
        d = _row_divergences(p[mask], out)
        w = q[mask] * np.exp(d - d.max())
        lower = float(d.max() + math.log(w.sum()))
        upper = float(d.max())
        if upper - lower < tol_nats:
            break
        q_new = np.zeros(k)
        q_new[mask] = w / w.sum()
        q = q_new
    else:
        result = _finish(q, lower, upper, it, lf, base)
        raise ConvergenceError(
            f"Blahut-Arimoto did not reach gap {tol} in {max_iter} iterations "
            f"(bounds {result.capacity:.12g} .. {result.upper_bound:.12g})", result)
    return _finish(q, lower, upper, it, lf, base)


def _finish(q, lower, upper, iterations, lf, base) -> CapacityResult:
    q = np.where(q < ZERO_INPUT_TOL, 0.0, q)
    q = q / q.sum()
    lower = max(lower, 0.0)
    return CapacityResult(
        capacity=lower / lf,
        optimal_input=q,
        iterations=iterations,
        gap=max(upper - lower, 0.0) / lf,
        base=float(base),
        upper_bound=max(upper, 0.0) / lf,
    )


# --------------------------------------------------------------------------
# standard channels
# --------------------------------------------------------------------------

def _check_prob(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


def z_channel(p: float) -> Dmc:
    """Input 0 is noiseless; input 1 falls to output 0 with probability ``p``."""
    p = _check_prob(p)
    return Dmc(np.array([[1.0, 0.0], [p, 1.0 - p]]), ("0", "1"), ("0", "1"))


def bsc(p: float) -> Dmc:
    p = _check_prob(p)
    return Dmc(np.array([[1.0 - p, p], [p, 1.0 - p]]), ("0", "1"), ("0", "1"))


def erasure_channel(m_ary: int, eps: float) -> Dmc:
    """M-ary erasure channel; the last output is the erasure symbol."""
    if int(m_ary) != m_ary or m_ary < 2:
        raise ValueError(f"m_ary must be an integer >= 2, got {m_ary}")
    m_ary = int(m_ary)
    eps = _check_prob(eps, "eps")
    p = np.zeros((m_ary, m_ary + 1))
    p[:, :m_ary] = (1.0 - eps) * np.eye(m_ary)
    p[:, m_ary] = eps
    labels = tuple(str(k) for k in range(m_ary))
    return Dmc(p, labels, labels + ("?",))


def identity_channel(n: int) -> Dmc:
    return Dmc(np.eye(n))


def z_channel_capacity_closed_form(p: float, base=2) -> CapacityResult:
    """Z-channel capacity log(1 + (1-p) p^(p/(1-p))) and its optimal input.

    The optimal probability of the noisy input is
    1 / ((1-p) (1 + 1 / ((1-p) p^(p/(1-p))))).
    """
    p = _check_prob(p)
    if p >= 1.0:
        raise ValueError("closed form requires p < 1")
    lf = log_factor(base)
    if p == 0.0:
        return CapacityResult(math.log(2.0) / lf, np.array([0.5, 0.5]), base=float(base))
    z = (1.0 - p) * p ** (p / (1.0 - p))
    cap = math.log1p(z)
    q1 = z / ((1.0 - p) * (1.0 + z))
    return CapacityResult(cap / lf, np.array([1.0 - q1, q1]), base=float(base))


def compose_erasure(ch: Dmc, eps: float) -> Dmc:
    """Append an erasure output reached with probability ``eps`` from every input."""
    eps = _check_prob(eps, "eps")
    k, j = ch.shape
    p = np.zeros((k, j + 1))
    p[:, :j] = (1.0 - eps) * ch.transition
    p[:, j] = eps
    label = "?"
    while label in ch.output_labels:
        label += "?"
    return Dmc(p, ch.input_labels, ch.output_labels + (label,))


def attenuation_db(eps: float) -> float:
    """Loss of a fraction ``eps`` of photons expressed in dB: -10 log10(1 - eps)."""
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    return -10.0 * math.log10(1.0 - eps)


def erasure_from_db(a_db: float) -> float:
    if a_db < 0:
        raise ValueError("attenuation must be non-negative")
    return 1.0 - 10.0 ** (-a_db / 10.0)

"""Receivers: turn a signal set plus a measurement into a classical channel.

Every construction here ends in :func:`measure_channel`, which evaluates
P(j | k) = <s_k| E_j |s_k> for the POVM elements E_j.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dmc import Dmc
from .errors import DimensionError, ValidationError
from .qstate import (
    density_from_ket,
    eig_hermitian,
    inner_product,
    ket,
    ket_from_angle,
    tensor,
)

POVM_TOL = 1e-10
SRM_RCOND = 1e-6
SRM_NULL = 1e-12


def _encode_complex(a: np.ndarray):
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [_encode_complex(x) for x in a]


def _decode_complex(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.shape[-1:] != (2,):
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass(frozen=True)
class Povm:
    """Measurement with PSD elements that sum to the identity."""

    elements: tuple[np.ndarray, ...]
    outcome_labels: tuple[str, ...] = ()

    def __post_init__(self):
        elems = tuple(np.array(e, dtype=complex) for e in self.elements)
        if not elems:
            raise ValidationError("a POVM needs at least one element")
        dim = elems[0].shape
        if len(dim) != 2 or dim[0] != dim[1] or any(e.shape != dim for e in elems):
            raise DimensionError("POVM elements must be square and of a common size")
        labels = tuple(self.outcome_labels) or tuple(str(j) for j in range(len(elems)))
        if len(labels) != len(elems):
            raise DimensionError("one outcome label per POVM element")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "outcome_labels", labels)
        self.validate()

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def validate(self, tol: float = POVM_TOL) -> None:
        for j, e in enumerate(self.elements):
            if np.max(np.abs(e - e.conj().T)) > tol:
                raise ValidationError(f"POVM element {j} is not Hermitian")
            lo = eig_hermitian(e).eigenvalues[-1]
            if lo < -tol:
                raise ValidationError(f"POVM element {j} has negative eigenvalue {lo:.3g}")
        dev = np.max(np.abs(sum(self.elements) - np.eye(self.dim)))
        if dev > tol:
            raise ValidationError(f"POVM elements do not sum to identity (max deviation {dev:.3g})")

    def to_json(self) -> dict:
        return {"outcomes": list(self.outcome_labels),
                "elements": [_encode_complex(e) for e in self.elements]}

    @classmethod
    def from_json(cls, obj) -> "Povm":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(_decode_complex(e) for e in obj["elements"]), tuple(obj.get("outcomes", ())))


@dataclass(frozen=True)
class SignalSet:
    """Pure signal states of a common dimension, one per input symbol."""

    states: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        states = tuple(ket(s) for s in self.states)
        if not states:
            raise ValidationError("signal set is empty")
        if len({s.shape for s in states}) != 1:
            raise DimensionError("signals have different dimensions")
        labels = tuple(self.labels) or tuple(f"s{k}" for k in range(len(states)))
        if len(labels) != len(states):
            raise DimensionError("one label per signal")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def __len__(self):
        return len(self.states)

    def densities(self) -> list[np.ndarray]:
        return [density_from_ket(s) for s in self.states]

    def subset(self, indices: Sequence[int]) -> "SignalSet":
        return SignalSet(tuple(self.states[i] for i in indices), tuple(self.labels[i] for i in indices))

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "states": [_encode_complex(s) for s in self.states]}

    @classmethod
    def from_json(cls, obj) -> "SignalSet":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(_decode_complex(s) for s in obj["states"]), tuple(obj.get("labels", ())))


def measure_channel(signals: SignalSet, povm: Povm) -> Dmc:
    """Classical channel induced by measuring each signal with ``povm``."""
    if signals.dim != povm.dim:
        raise DimensionError(f"signals live in dimension {signals.dim}, POVM in {povm.dim}")
    povm.validate()
    p = np.array([[float(np.real(np.vdot(s, e @ s))) for e in povm.elements] for s in signals.states])
    # rounding can leave entries like -1e-17; rows are renormalised to be exact
    p = np.clip(p, 0.0, None)
    p /= p.sum(axis=1, keepdims=True)
    return Dmc(p, signals.labels, povm.outcome_labels)


def _projector(v: np.ndarray) -> np.ndarray:
    return np.outer(v, np.conj(v))


def polarization_filter(angle: float) -> Povm:
    """Projective test for linear polarisation at ``angle`` versus its orthogonal."""
    chi0 = ket_from_angle(angle)
    chi1 = ket_from_angle(angle + math.pi / 2)
    return Povm((_projector(chi0), _projector(chi1)), ("0", "1"))


def _real_angle(s: np.ndarray) -> float:
    s = np.asarray(s, dtype=complex)
    if s.shape != (2,):
        raise DimensionError("linear-polarisation receivers need 2-dimensional signals")
    # allow a global phase, reject genuinely complex (elliptical) states
    k = int(np.argmax(np.abs(s)))
    r = s * np.exp(-1j * np.angle(s[k]))
    if np.max(np.abs(r.imag)) > 1e-12:
        raise ValidationError("signal is not a linear polarisation (complex relative phase)")
    return math.atan2(r[1].real, r[0].real)


def helstrom_binary(s0: np.ndarray, s1: np.ndarray) -> tuple[Povm, Dmc]:
    """Minimum-error projective receiver for two equiprobable linear polarisations.

    The filter axes sit symmetrically at +-45 degrees about the bisector of the
    two signals, giving a BSC with p = (1 - sqrt(1 - |<s0|s1>|^2)) / 2.
    """
    t0, t1 = _real_angle(s0), _real_angle(s1)
    delta = t1 - t0
    # cos^2(delta/2 - sign*pi/4) = (1 + sign*sin(delta)) / 2 must be the larger branch
    sign = 1.0 if math.sin(delta) >= 0 else -1.0
    mid = 0.5 * (t0 + t1)
    filt = polarization_filter(mid - sign * math.pi / 4)
    signals = SignalSet((ket(s0), ket(s1)), ("s0", "s1"))
    return filt, measure_channel(signals, filt)


def helstrom_error(overlap_sq: float) -> float:
    """Helstrom error probability for equiprobable pure states with |<s0|s1>|^2 given."""
    return 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - overlap_sq)))


def povm_binary_erasure(s0: np.ndarray, s1: np.ndarray) -> tuple[Povm, Dmc]:
    """Unambiguous-discrimination receiver for two pure qubit states.

    The conclusive elements project onto the states orthogonal to the *other*
    signal, scaled by 1 / (1 + cos beta); the third element completes the
    identity and reports "no decision".
    """
    s0, s1 = ket(s0), ket(s1)
    if s0.shape != (2,) or s1.shape != (2,):
        raise DimensionError("erasure receiver is defined for qubit signals")
    cos_beta = abs(inner_product(s0, s1))
    if cos_beta > 1.0 - 1e-12:
        raise ValidationError("signals are identical (beta = 0); no unambiguous receiver exists")
    bar0 = np.array([-np.conj(s0[1]), np.conj(s0[0])])
    bar1 = np.array([-np.conj(s1[1]), np.conj(s1[0])])
    scale = 1.0 / (1.0 + cos_beta)
    e0 = scale * _projector(bar1)
    e1 = scale * _projector(bar0)
    e_null = np.eye(2) - e0 - e1
    povm = Povm((e0, e1, e_null), ("s0", "s1", "?"))
    return povm, measure_channel(SignalSet((s0, s1), ("s0", "s1")), povm)


def trine_states() -> SignalSet:
    """Three linear polarisations 120 degrees apart."""
    r3 = math.sqrt(3.0) / 2.0
    return SignalSet(
        (np.array([1.0, 0.0]), np.array([-0.5, r3]), np.array([-0.5, -r3])),
        ("s1", "s2", "s3"),
    )


def trine_povm_parallel() -> Povm:
    """Elements (2/3)|s_i><s_i| along the trine signals."""
    return Povm(tuple((2.0 / 3.0) * _projector(s) for s in trine_states().states), ("1", "2", "3"))


def trine_povm_orthogonal() -> Povm:
    """Elements (2/3)|s_i'><s_i'| with s_i' orthogonal to s_i."""
    bars = [np.array([-s[1], s[0]]) for s in trine_states().states]
    return Povm(tuple((2.0 / 3.0) * _projector(b) for b in bars), ("1", "2", "3"))


def pair_signals(base: SignalSet) -> SignalSet:
    """Two identically polarised photons per symbol: |s_i s_i>."""
    if base.dim != 2:
        raise DimensionError("pair signals are built from qubit states")
    return SignalSet(tuple(tensor(s, s) for s in base.states),
                     tuple(f"{l}{l}" for l in base.labels))


def square_root_measurement(signals: SignalSet, priors=None) -> Povm:
    """Square-root (pretty-good) measurement E_j = R^-1/2 q_j rho_j R^-1/2.

    ``R`` is the prior-weighted average state; its inverse square root is
    taken on the span of the signals. When the signals do not span the whole
    space, the projector onto the complement is shared equally among the
    outcomes so the elements still sum to the identity without changing any
    signal's outcome probabilities.
    """
    n = len(signals)
    q = np.full(n, 1.0 / n) if priors is None else np.asarray(priors, dtype=float)
    if q.shape != (n,) or np.any(q <= 0) or abs(q.sum() - 1.0) > 1e-12:
        raise ValidationError("square-root measurement needs strictly positive priors summing to 1")
    rhos = signals.densities()
    avg = sum(qk * r for qk, r in zip(q, rhos))
    spec = eig_hermitian(avg)
    lam = spec.eigenvalues
    ratio = lam / lam[0]
    support = ratio > SRM_NULL
    shaky = (ratio > SRM_NULL) & (ratio < SRM_RCOND)
    if np.any(shaky):
        raise ValidationError(
            f"average state is ill-conditioned (eigenvalue ratio {ratio[shaky].min():.3g}); "
            "signals are nearly linearly dependent")
    v = spec.eigenvectors[:, support]
    inv_sqrt = (v / np.sqrt(lam[support])) @ v.conj().T
    complement = np.eye(signals.dim) - v @ v.conj().T
    elems = []
    for qk, r in zip(q, rhos):
        e = inv_sqrt @ (qk * r) @ inv_sqrt
        elems.append((e + e.conj().T) / 2.0 + complement / n)
    return Povm(tuple(elems), signals.labels)


# --------------------------------------------------------------------------
# Monte Carlo
# --------------------------------------------------------------------------

RNG_NAME = "numpy.random.PCG64"


def sample_outcomes(channel: Dmc, input_symbol: int, n: int, seed: int) -> np.ndarray:
    """Histogram of ``n`` simulated channel uses with the given input.

    Reproducible for a fixed ``seed`` (numpy's PCG64 bit generator).
    """
    k = channel.shape[0]
    if not 0 <= int(input_symbol) < k:
        raise IndexError(f"input symbol {input_symbol} out of range 0..{k - 1}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    row = channel.transition[int(input_symbol)]
    return rng.multinomial(int(n), row / row.sum())

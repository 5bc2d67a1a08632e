"""Small-dimension state algebra: kets, density matrices, spectra, entropy.

Kets and density matrices are plain complex numpy arrays. The constructors
here validate the physical invariants once so the rest of the package can
treat the arrays as trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIG_CLAMP_TOL = 1e-10
JACOBI_OFF_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100

SUPPORTED_DIMS = (2, 3, 4)


def log_factor(base) -> float:
    """Natural log of an information base; ``2`` gives bits, ``math.e`` nats."""
    base = float(base)
    if not base > 1.0:
        raise ValueError(f"log base must exceed 1, got {base}")
    return math.log(base)


# --------------------------------------------------------------------------
# kets
# --------------------------------------------------------------------------

def ket(amplitudes: Iterable[complex], normalize: bool = False) -> np.ndarray:
    """Build a validated ket from its amplitudes in the {|0>, |1>, ...} basis."""
    v = np.asarray(list(amplitudes) if not isinstance(amplitudes, np.ndarray) else amplitudes,
                   dtype=complex).reshape(-1)
    if v.size < 2:
        raise DimensionError(f"ket needs at least 2 amplitudes, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValidationError("ket amplitudes must be finite")
    norm2 = float(np.vdot(v, v).real)
    if normalize:
        if norm2 == 0.0:
            raise ValidationError("cannot normalise the zero vector")
        return v / math.sqrt(norm2)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise ValidationError(f"ket is not normalised: |psi|^2 = {norm2!r}")
    return v


def ket_from_angle(theta: float) -> np.ndarray:
    """Linear polarisation at angle ``theta`` (radians): cos(theta)|0> + sin(theta)|1>."""
    if not math.isfinite(theta):
        raise ValueError("angle must be finite")
    return np.array([math.cos(theta), math.sin(theta)], dtype=complex)


def basis(index: int, dim: int = 2) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def inner_product(phi: np.ndarray, psi: np.ndarray) -> complex:
    """Scalar product <phi|psi> (conjugate-linear in the first argument).

    For phi = (a, b) and psi = (c, d) this is a*.c + b*.d.
    """
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if phi.shape != psi.shape:
        raise DimensionError(f"dimension mismatch: {phi.shape} vs {psi.shape}")
    return complex(np.vdot(phi, psi))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b, ordered (a0 b0, a0 b1, a1 b0, a1 b1)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


# --------------------------------------------------------------------------
# density matrices
# --------------------------------------------------------------------------

def _check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > tol:
        raise ValidationError(f"matrix is not Hermitian (max |M - M^H| = {dev:.3g})")


def density_matrix(entries, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate and return a density matrix (Hermitian, trace 1, PSD)."""
    m = np.array(entries, dtype=complex)
    _check_hermitian(m, tol)
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"trace must be 1, got {tr.real:.15g}")
    lo = float(eig_hermitian(m).eigenvalues[-1])
    if lo < -EIG_CLAMP_TOL:
        raise ValidationError(f"matrix has negative eigenvalue {lo:.3g}")
    return m


def density_from_ket(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi|."""
    psi = ket(psi)
    return np.outer(psi, psi.conj())


def mix(ensemble: Sequence[tuple[float, np.ndarray]]) -> np.ndarray:
    """Average density matrix sum_k q_k rho_k of a (prior, state) ensemble."""
    if len(ensemble) == 0:
        raise ValidationError("ensemble is empty")
    priors = np.array([float(q) for q, _ in ensemble])
    if np.any(priors < 0) or abs(priors.sum() - 1.0) > NORM_TOL:
        raise ValidationError(f"priors must be non-negative and sum to 1, got {priors.tolist()}")
    states = [np.asarray(r, dtype=complex) for _, r in ensemble]
    shape = states[0].shape
    if any(s.shape != shape for s in states):
        raise DimensionError("ensemble states have different dimensions")
    return sum(q * r for q, r in zip(priors, states))


# --------------------------------------------------------------------------
# spectra
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def vectors(self) -> list[np.ndarray]:
        return [self.eigenvectors[:, i] for i in range(self.eigenvectors.shape[1])]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _eig_2x2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = m[0, 0].real, m[1, 1].real
    z = m[0, 1]
    half_gap = math.hypot((a - b) / 2.0, abs(z))
    mid = (a + b) / 2.0
    lam = np.array([mid + half_gap, mid - half_gap])
    if abs(z) <= 1e-300:
        if a >= b:
            vecs = np.eye(2, dtype=complex)
        else:
            vecs = np.array([[0, 1], [1, 0]], dtype=complex)
        return lam, vecs
    cols = []
    for l in lam:
        # pick the better-conditioned of the two null-space candidates
        v1 = np.array([z, l - a], dtype=complex)
        v2 = np.array([l - b, np.conj(z)], dtype=complex)
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        cols.append(v / np.linalg.norm(v))
    vecs = np.column_stack(cols)
    if half_gap == 0.0:
        vecs = np.eye(2, dtype=complex)
    return lam, vecs


def _jacobi(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # plain Python scalars: for n <= 4 numpy call overhead dominates the arithmetic
    n = m.shape[0]
    a = [[complex(x) for x in row] for row in m]
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(2.0 * sum(abs(a[p][q]) ** 2 for p in range(n) for q in range(p + 1, n)))
        if off < JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p][q]
                r = abs(z)
                if r < 1e-300:
                    continue
                # phase-rotate to a real off-diagonal element, then a Givens rotation;
                # the 2x2 rotation is [[c, -s], [s*w, c*w]] with w = conj(z)/|z|
                w = z.conjugate() / r
                theta = 0.5 * math.atan2(2.0 * r, a[p][p].real - a[q][q].real)
                c, s = math.cos(theta), math.sin(theta)
                sw, cw = s * w, c * w
                for row in a:
                    ap, aq = row[p], row[q]
                    row[p] = c * ap + sw * aq
                    row[q] = -s * ap + cw * aq
                rp, rq = a[p], a[q]
                swc, cwc = sw.conjugate(), cw.conjugate()
                for k in range(n):
                    ap, aq = rp[k], rq[k]
                    rp[k] = c * ap + swc * aq
                    rq[k] = -s * ap + cwc * aq
                rp[q] = rq[p] = 0j
                for row in v:
                    vp, vq = row[p], row[q]
                    row[p] = c * vp + sw * vq
                    row[q] = -s * vp + cw * vq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.array([a[i][i].real for i in range(n)]), np.array(v, dtype=complex)


def eig_hermitian(m: np.ndarray) -> Spectrum:
    """Full spectrum of a Hermitian matrix, eigenvalues sorted descending.

    2x2 matrices use the closed-form quadratic; larger ones cyclic complex
    Jacobi rotations until the off-diagonal Frobenius norm drops below 1e-12.
    """
    m = np.asarray(m, dtype=complex)
    _check_hermitian(m, tol=1e-9)
    m = (m + m.conj().T) / 2.0
    if m.shape == (1, 1):
        return Spectrum(np.array([m[0, 0].real]), np.ones((1, 1), dtype=complex))
    if m.shape == (2, 2):
        lam, vecs = _eig_2x2(m)
    else:
        lam, vecs = _jacobi(m)
    order = np.argsort(-lam, kind="stable")
    return Spectrum(lam[order], vecs[:, order])


def _clamped_eigenvalues(m: np.ndarray) -> np.ndarray:
    lam = eig_hermitian(m).eigenvalues
    if lam[-1] < -EIG_CLAMP_TOL or lam[0] > 1.0 + EIG_CLAMP_TOL:
        raise ValidationError(f"eigenvalues outside [0, 1]: {lam.tolist()}")
    return np.clip(lam, 0.0, 1.0)


def von_neumann_entropy(m: np.ndarray, base=2) -> float:
    """S(rho) = -tr(rho log rho), with 0 log 0 = 0."""
    lam = _clamped_eigenvalues(np.asarray(m, dtype=complex))
    nz = lam[lam > 0.0]
    return max(0.0, float(-np.sum(nz * np.log(nz))) / log_factor(base))


def shannon_entropy(probs, base=2) -> float:
    p = np.asarray(probs, dtype=float)
    nz = p[p > 0.0]
    return max(0.0, float(-np.sum(nz * np.log(nz))) / log_factor(base))

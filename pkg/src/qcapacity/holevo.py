"""Holevo (von Neumann) capacity of signal ensembles and two noise models."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .dmc import binary_entropy, blahut_arimoto, bsc
from .errors import ConvergenceError, DimensionError, ValidationError
from .qstate import density_from_ket, log_factor, mix, von_neumann_entropy

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HolevoResult:
    capacity: float
    optimal_priors: np.ndarray
    chi_at_uniform: float
    base: float = 2.0


def as_density(state) -> np.ndarray:
    """Accept a ket or a density matrix and return a density matrix."""
    a = np.asarray(state, dtype=complex)
    if a.ndim == 1:
        return density_from_ket(a)
    return a


def holevo_chi(ensemble: Sequence[tuple[float, np.ndarray]], base=2) -> float:
    """chi = S(sum_k q_k rho_k) - sum_k q_k S(rho_k) at fixed priors."""
    ens = [(float(q), as_density(r)) for q, r in ensemble]
    avg = mix(ens)
    chi = von_neumann_entropy(avg, base)
    chi -= sum(q * von_neumann_entropy(r, base) for q, r in ens if q > 0)
    return max(0.0, chi)


def _chi_nats(priors, states, own_entropy) -> float:
    avg = sum(q * r for q, r in zip(priors, states))
    return von_neumann_entropy(avg, math.e) - float(np.dot(priors, own_entropy))


def _golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    # the interior point can never beat an endpoint that is actually maximal
    best = max((lo, x, hi), key=f)
    return best


def _simplex_grid(n: int, step: float):
    m = int(round(1.0 / step))
    for combo in itertools.product(range(m + 1), repeat=n - 1):
        s = sum(combo)
        if s <= m:
            yield np.array(list(combo) + [m - s], dtype=float) / m


def _coordinate_refine(f, q: np.ndarray, step: float, tol: float, max_rounds: int = 100_000) -> np.ndarray:
    fq = f(q)
    n = len(q)
    rounds = 0
    while step > tol:
        improved = False
        for i, j in itertools.permutations(range(n), 2):
            t = min(step, q[j])
            if t <= 0:
                continue
            cand = q.copy()
            cand[i] += t
            cand[j] -= t
            fc = f(cand)
            if fc > fq:
                q, fq, improved = cand, fc, True
        if not improved:
            step /= 2.0
        rounds += 1
        if rounds > max_rounds:
            raise ConvergenceError("prior refinement did not converge")
    return q


def maximize_holevo(states: Sequence[np.ndarray], base=2, tol: float = 1e-9) -> HolevoResult:
    """Maximise chi over the input priors for a fixed list of states.

    Two states use golden-section search on q0; three or four use a simplex
    grid (step 0.01 for three, 0.05 for four) followed by pairwise
    coordinate refinement, which is enough because chi is concave in the
    priors.
    """
    rhos = [as_density(s) for s in states]
    n = len(rhos)
    if not 1 <= n <= 4:
        raise ValueError(f"maximize_holevo handles 1 to 4 states, got {n}")
    if len({r.shape for r in rhos}) != 1:
        raise DimensionError("states have different dimensions")
    if rhos[0].shape[0] > 8:
        raise DimensionError("state dimension too large")
    own = np.array([von_neumann_entropy(r, math.e) for r in rhos])
    f = lambda q: _chi_nats(q, rhos, own)  # noqa: E731
    uniform = np.full(n, 1.0 / n)

    if n == 1:
        q = np.ones(1)
    elif n == 2:
        q0 = _golden_max(lambda x: f(np.array([x, 1.0 - x])), 0.0, 1.0, tol)
        q = np.array([q0, 1.0 - q0])
    else:
        step = 0.01 if n == 3 else 0.05
        q = max(_simplex_grid(n, step), key=f)
        if f(uniform) >= f(q):
            q = uniform
        q = _coordinate_refine(f, q, step / 2.0, tol)

    lf = log_factor(base)
    return HolevoResult(
        capacity=max(0.0, f(q)) / lf,
        optimal_priors=q,
        chi_at_uniform=max(0.0, f(uniform)) / lf,
        base=float(base),
    )


# --------------------------------------------------------------------------
# attenuation
# --------------------------------------------------------------------------

def attenuated_holevo(ensemble: Sequence[tuple[float, np.ndarray]], eps: float, base=2) -> float:
    """chi of the ensemble after each photon is lost with probability ``eps``.

    A lost photon is modelled as a flagged vacuum state orthogonal to the
    signal space, so each received state is (1-eps) rho_k (+) eps |vac><vac|.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    out = []
    for q, r in ensemble:
        r = as_density(r)
        d = r.shape[0]
        ext = np.zeros((d + 1, d + 1), dtype=complex)
        ext[:d, :d] = (1.0 - eps) * r
        ext[d, d] = eps
        out.append((q, ext))
    return holevo_chi(out, base)


# --------------------------------------------------------------------------
# polarisation noise
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NoiseDistribution:
    """Random polarisation rotation with a density symmetric about zero.

    ``kind`` is ``"uniform"`` (``width`` is the full width A of the interval
    [-A/2, A/2]), ``"gaussian"`` (``width`` is sigma) or ``"custom"``. A
    custom ``density`` is either a callable f(phi) supported on
    [-width, width] or a tuple ``(phi, f)`` of tabulated samples.
    """

    kind: str
    width: float = 0.0
    density: object = None

    def __post_init__(self):
        if self.kind not in ("uniform", "gaussian", "custom"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not self.width >= 0:
            raise ValueError("width must be non-negative")
        if self.kind == "custom":
            if self.density is None:
                raise ValueError("custom noise needs a density")
            norm = _quad(self.density, self.width, lambda phi: np.ones_like(phi))
            if abs(norm - 1.0) > 1e-8:
                raise ValidationError(f"custom density integrates to {norm!r}, not 1")
            odd = _quad(self.density, self.width, lambda phi: np.sign(phi))
            if abs(odd) > 1e-8:
                raise ValidationError("custom density is not symmetric about zero")


def _simpson_adaptive(g: Callable, a: float, b: float, tol: float = 1e-8, max_level: int = 24) -> float:
    n = 16
    prev = None
    for _ in range(max_level):
        x = np.linspace(a, b, n + 1)
        est = float(integrate.simpson(g(x), x=x))
        if prev is not None and abs(est - prev) < tol:
            return est
        prev = est
        n *= 2
    raise ConvergenceError("Simpson quadrature did not settle")


def _quad(density, half_width: float, weight: Callable) -> float:
    if callable(density):
        if half_width <= 0:
            raise ValueError("custom callable density needs a positive support half-width")
        return _simpson_adaptive(lambda x: np.asarray(density(x), dtype=float) * weight(x),
                                 -half_width, half_width)
    phi, f = (np.asarray(a, dtype=float) for a in density)
    if phi.ndim != 1 or phi.shape != f.shape or phi.size < 3 or np.any(np.diff(phi) <= 0):
        raise ValueError("tabulated density needs matching, strictly increasing samples")
    if np.any(f < 0):
        raise ValidationError("density must be non-negative")
    return float(integrate.simpson(f * weight(phi), x=phi))


def polarization_noise_d(noise: NoiseDistribution) -> float:
    """d = E[sin^2 phi], the probability that the rotation flips the test outcome."""
    if noise.kind == "uniform":
        a = noise.width
        if a == 0.0:
            return 0.0
        if a < 1e-4:
            d = a * a / 12.0 - a ** 4 / 360.0
        else:
            d = 0.5 * (1.0 - math.sin(a) / a)
    elif noise.kind == "gaussian":
        d = -0.5 * math.expm1(-2.0 * noise.width ** 2)
    else:
        d = _quad(noise.density, noise.width, lambda phi: np.sin(phi) ** 2)
    if d > 0.5 + 1e-12:
        raise ValidationError(f"d = {d:.6g} exceeds 1/2; the noise would invert the channel")
    return min(max(d, 0.0), 0.5)


def apply_polarization_noise(pure_angle: float, d: float) -> np.ndarray:
    """Averaged state of a horizontal (0) or vertical (pi/2) photon after noise."""
    if not 0.0 <= d <= 0.5:
        raise ValueError(f"d must lie in [0, 1/2], got {d}")
    if abs(pure_angle) < 1e-12:
        return np.diag([1.0 - d, d]).astype(complex)
    if abs(pure_angle - math.pi / 2) < 1e-12:
        return np.diag([d, 1.0 - d]).astype(complex)
    raise ValueError("polarisation noise is modelled for horizontal (0) or vertical (pi/2) signals only")


def noisy_orthogonal_capacity(d: float, base=2) -> tuple[float, float]:
    """(C_N, C_S) for orthogonal polarisations under noise parameter ``d``.

    C_N comes from the Holevo quantity of the two mixed received states, C_S
    from Blahut-Arimoto on the symbol-by-symbol BSC(d). Both equal 1 - H(d);
    the caller decides how to check that.
    """
    rho0 = apply_polarization_noise(0.0, d)
    rho1 = apply_polarization_noise(math.pi / 2, d)
    c_n = maximize_holevo([rho0, rho1], base).capacity
    c_s = blahut_arimoto(bsc(d), base, tol=1e-13).capacity
    return c_n, c_s


def noisy_orthogonal_closed_form(d: float, base=2) -> float:
    return log_factor(2) / log_factor(base) - binary_entropy(d, base)

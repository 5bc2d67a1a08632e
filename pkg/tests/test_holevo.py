import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from qcapacity.dmc import binary_entropy
from qcapacity.errors import ValidationError
from qcapacity.holevo import (
    NoiseDistribution,
    apply_polarization_noise,
    attenuated_holevo,
    holevo_chi,
    maximize_holevo,
    noisy_orthogonal_capacity,
    noisy_orthogonal_closed_form,
    polarization_noise_d,
)
from qcapacity.qstate import basis, ket_from_angle
from qcapacity.receivers import pair_signals, trine_states


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


class TestChi:
    def test_45deg_pair(self):
        chi = holevo_chi([(0.5, basis(0)), (0.5, ket_from_angle(math.pi / 4))])
        assert chi == pytest.approx(0.60, abs=0.005)

    def test_orthogonal_pair(self):
        assert holevo_chi([(0.5, basis(0)), (0.5, basis(1))]) == pytest.approx(1.0)

    def test_single_state(self):
        assert holevo_chi([(1.0, ket_from_angle(0.4))]) == pytest.approx(0.0, abs=1e-12)

    def test_mixed_states_accepted(self):
        chi = holevo_chi([(0.5, np.diag([0.9, 0.1])), (0.5, np.diag([0.1, 0.9]))])
        assert chi == pytest.approx(1 - binary_entropy(0.1), abs=1e-12)

    def test_nats(self):
        chi = holevo_chi([(0.5, basis(0)), (0.5, basis(1))], base=math.e)
        assert chi == pytest.approx(math.log(2))

    @settings(max_examples=40)
    @given(st.floats(0, math.pi), st.floats(0.01, 0.99), st.floats(-math.pi, math.pi))
    def test_rotation_invariant(self, delta, q, phi):
        s0, s1 = ket_from_angle(0.0), ket_from_angle(delta)
        u = rotation(phi)
        a = holevo_chi([(q, s0), (1 - q, s1)])
        b = holevo_chi([(q, u @ s0), (1 - q, u @ s1)])
        assert a == pytest.approx(b, abs=1e-9)

    @settings(max_examples=40)
    @given(st.floats(0, math.pi / 2), st.floats(0.01, 0.99))
    def test_pure_pair_closed_form(self, delta, q):
        # eigenvalues of the average of two pure states with overlap c
        c = math.cos(delta)
        disc = math.sqrt(1 - 4 * q * (1 - q) * (1 - c * c))
        lam = [(1 + disc) / 2, (1 - disc) / 2]
        expected = -sum(x * math.log2(x) for x in lam if x > 0)
        chi = holevo_chi([(q, ket_from_angle(0.0)), (1 - q, ket_from_angle(delta))])
        assert chi == pytest.approx(expected, abs=1e-9)


class TestMaximize:
    def test_45deg_pair(self):
        res = maximize_holevo([basis(0), ket_from_angle(math.pi / 4)])
        assert res.capacity == pytest.approx(0.60, abs=0.005)
        np.testing.assert_allclose(res.optimal_priors, [0.5, 0.5], atol=1e-4)
        assert res.capacity == pytest.approx(res.chi_at_uniform, abs=1e-12)

    def test_orthogonal(self):
        res = maximize_holevo([basis(0), basis(1)])
        assert res.capacity == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(res.optimal_priors, [0.5, 0.5], atol=1e-4)

    def test_trine(self):
        res = maximize_holevo(list(trine_states().states))
        assert res.capacity == pytest.approx(1.0, abs=1e-6)
        np.testing.assert_allclose(res.optimal_priors, np.ones(3) / 3, atol=1e-3)

    def test_trine_pairs(self):
        res = maximize_holevo(list(pair_signals(trine_states()).states))
        assert res.capacity == pytest.approx(1.5, abs=0.005)
        assert res.capacity / 2 == pytest.approx(0.75, abs=0.005)

    def test_single_state(self):
        assert maximize_holevo([basis(0)]).capacity == 0.0

    def test_four_states(self):
        # BB84-style set: four real qubit states at 45 degree spacing span at most 1 bit
        res = maximize_holevo([ket_from_angle(k * math.pi / 4) for k in range(4)])
        assert res.capacity == pytest.approx(1.0, abs=1e-6)

    def test_asymmetric_prior(self):
        # a pure and a mixed state: optimum is off uniform and beats it
        res = maximize_holevo([basis(0), np.eye(2) / 2])
        assert res.capacity > res.chi_at_uniform
        q = res.optimal_priors[0]
        dense = max(holevo_chi([(x, basis(0)), (1 - x, np.eye(2) / 2)]) for x in np.linspace(0, 1, 20001))
        assert res.capacity == pytest.approx(dense, abs=1e-8)
        assert 0.5 < q < 1

    def test_too_many_states(self):
        with pytest.raises(ValueError):
            maximize_holevo([basis(0)] * 5)


class TestNoiseD:
    @pytest.mark.parametrize("width", [1e-6, 1e-3, 0.3, 1.0, math.pi / 2, 2.5])
    def test_uniform_against_quadrature(self, width):
        ref, _ = integrate.quad(lambda x: math.sin(x) ** 2 / width, -width / 2, width / 2, epsabs=1e-14)
        assert polarization_noise_d(NoiseDistribution("uniform", width)) == pytest.approx(ref, rel=1e-9, abs=1e-15)

    def test_uniform_quarter_turn(self):
        d = polarization_noise_d(NoiseDistribution("uniform", math.pi / 2))
        assert d == pytest.approx((1 - 2 / math.pi) / 2, abs=1e-15)
        assert d == pytest.approx(0.1817, abs=5e-5)

    @pytest.mark.parametrize("sigma", [1e-4, 0.1, 0.5, 1.0, 3.0])
    def test_gaussian_against_quadrature(self, sigma):
        ref, _ = integrate.quad(
            lambda x: math.sin(x) ** 2 * math.exp(-x * x / (2 * sigma ** 2)) / (sigma * math.sqrt(2 * math.pi)),
            -12 * sigma, 12 * sigma, points=[0.0], epsabs=1e-16, limit=200)
        assert polarization_noise_d(NoiseDistribution("gaussian", sigma)) == pytest.approx(ref, rel=1e-8, abs=1e-15)

    def test_zero_width(self):
        assert polarization_noise_d(NoiseDistribution("uniform", 0.0)) == 0.0
        assert polarization_noise_d(NoiseDistribution("gaussian", 0.0)) == 0.0

    def test_custom_callable_triangle(self):
        a = 0.8
        tri = lambda x: np.clip(1 - np.abs(x) / a, 0, None) / a  # noqa: E731
        ref, _ = integrate.quad(lambda x: math.sin(x) ** 2 * tri(x), -a, a, points=[0.0])
        assert polarization_noise_d(NoiseDistribution("custom", a, tri)) == pytest.approx(ref, abs=1e-7)

    def test_custom_tabulated_matches_uniform(self):
        a = 1.0
        phi = np.linspace(-a / 2, a / 2, 2001)
        f = np.full_like(phi, 1 / a)
        d = polarization_noise_d(NoiseDistribution("custom", a / 2, (phi, f)))
        assert d == pytest.approx(polarization_noise_d(NoiseDistribution("uniform", a)), abs=1e-10)

    def test_custom_must_normalise(self):
        with pytest.raises(ValidationError):
            NoiseDistribution("custom", 1.0, lambda x: np.ones_like(x))

    def test_custom_must_be_symmetric(self):
        with pytest.raises(ValidationError):
            NoiseDistribution("custom", 1.0, lambda x: (1 + x) / 2)

    def test_inverting_noise_rejected(self):
        # uniform on [-2, 2] puts most mass beyond 45 degrees
        with pytest.raises(ValidationError):
            polarization_noise_d(NoiseDistribution("uniform", 4.0))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            NoiseDistribution("laplace", 1.0)


class TestNoisyStates:
    def test_horizontal(self):
        np.testing.assert_allclose(apply_polarization_noise(0.0, 0.1), np.diag([0.9, 0.1]))

    def test_vertical(self):
        np.testing.assert_allclose(apply_polarization_noise(math.pi / 2, 0.1), np.diag([0.1, 0.9]))

    def test_noiseless(self):
        np.testing.assert_allclose(apply_polarization_noise(0.0, 0.0), np.diag([1.0, 0.0]))

    def test_other_angles_rejected(self):
        with pytest.raises(ValueError, match="horizontal"):
            apply_polarization_noise(math.pi / 4, 0.1)

    def test_d_range(self):
        with pytest.raises(ValueError):
            apply_polarization_noise(0.0, 0.6)


class TestNoisyCapacity:
    def test_tenth(self):
        c_n, c_s = noisy_orthogonal_capacity(0.1)
        assert c_n == pytest.approx(0.53, abs=0.005)
        assert c_s == pytest.approx(0.53, abs=0.005)
        assert abs(c_n - c_s) <= 1e-9

    def test_edges(self):
        assert noisy_orthogonal_capacity(0.0)[0] == pytest.approx(1.0, abs=1e-12)
        c_n, c_s = noisy_orthogonal_capacity(0.5)
        assert c_n == pytest.approx(0.0, abs=1e-12)
        assert c_s == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("d", np.linspace(0.0, 0.5, 11))
    def test_both_equal_closed_form(self, d):
        c_n, c_s = noisy_orthogonal_capacity(d)
        expected = noisy_orthogonal_closed_form(d)
        assert c_n == pytest.approx(expected, abs=1e-9)
        assert c_s == pytest.approx(expected, abs=1e-9)
        assert expected == pytest.approx(1 - binary_entropy(d), abs=1e-15)


class TestAttenuation:
    ORTHO = [(0.5, basis(0)), (0.5, basis(1))]

    def test_one_db(self):
        eps = 1 - 10 ** -0.1
        assert attenuated_holevo(self.ORTHO, eps) == pytest.approx(0.79, abs=0.005)

    def test_no_loss(self):
        ens = [(0.5, basis(0)), (0.5, ket_from_angle(math.pi / 4))]
        assert attenuated_holevo(ens, 0.0) == pytest.approx(holevo_chi(ens), abs=1e-12)

    def test_total_loss(self):
        assert attenuated_holevo(self.ORTHO, 1.0) == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0, 1), st.floats(0, math.pi / 2))
    def test_scales_linearly(self, eps, delta):
        ens = [(0.5, basis(0)), (0.5, ket_from_angle(delta))]
        assert attenuated_holevo(ens, eps) == pytest.approx((1 - eps) * holevo_chi(ens), abs=1e-9)

    def test_range(self):
        with pytest.raises(ValueError):
            attenuated_holevo(self.ORTHO, 1.5)

import math

import mpmath
import numpy as np
from django.test import SimpleTestCase
from scipy.integrate import quad, trapezoid
from scipy.stats import norm

from nslit.constants import BOLTZMANN, HBAR, NEUTRON_MASS, PLANCK
from nslit.exceptions import DomainError
from nslit.qcore import (EvalContext, GratingConfig, beam_from_wavelength, density, dispersed_packet,
                         packet_psi, packet_spectrum, psi_and_gradient, sigma_t, superposed_psi, talbot_length)

WAVELENGTH = 5e-9
SIGMA = 5e-9


def make_context(n_slits=4, d=5e-8, sigma=SIGMA, wavelength=WAVELENGTH):
    beam = beam_from_wavelength(NEUTRON_MASS, wavelength)
    return EvalContext(beam=beam, grating=GratingConfig(n_slits=n_slits, period=d, sigma=sigma))


class TalbotLengthTest(SimpleTestCase):

    def test_figure_gratings(self):
        for d, expected in ((50e-9, 1000e-9), (100e-9, 4000e-9), (200e-9, 16000e-9)):
            self.assertAlmostEqual(talbot_length(d, WAVELENGTH) / expected, 1.0, delta=1e-15)

    def test_equal_period_and_wavelength(self):
        for d in (1e-9, 3.7e-8, 2.0):
            self.assertAlmostEqual(talbot_length(d, d) / (2 * d), 1.0, delta=1e-15)

    def test_power_of_two_scaling_is_exact(self):
        base = talbot_length(5e-8, 5e-9)
        for factor in (2.0, 4.0, 0.5):
            self.assertEqual(talbot_length(5e-8 * factor, 5e-9 * factor), base * factor)

    def test_rejects_non_positive(self):
        with self.assertRaises(DomainError):
            talbot_length(0.0, 5e-9)
        with self.assertRaises(DomainError):
            talbot_length(5e-8, -1.0)


class BeamTest(SimpleTestCase):

    def setUp(self):
        self.beam = beam_from_wavelength(NEUTRON_MASS, WAVELENGTH)

    def test_cold_neutron_energy_and_temperature(self):
        self.assertLess(abs(self.beam.energy / 5.25e-24 - 1), 0.01)
        self.assertLess(abs(self.beam.temperature / 0.38 - 1), 0.03)

    def test_velocity_derivations_agree(self):
        expected = PLANCK / (NEUTRON_MASS * WAVELENGTH)
        self.assertLess(abs(self.beam.v_z / expected - 1), 1e-12)
        self.assertAlmostEqual(self.beam.v_z, 79.2, delta=0.1)

    def test_energy_and_temperature_consistent(self):
        self.assertAlmostEqual(BOLTZMANN * self.beam.temperature / self.beam.energy, 1.0, delta=1e-15)
        self.assertAlmostEqual(HBAR * self.beam.omega / self.beam.energy, 1.0, delta=1e-15)

    def test_energy_quarters_when_wavelength_doubles(self):
        doubled = beam_from_wavelength(NEUTRON_MASS, 2 * WAVELENGTH)
        self.assertAlmostEqual(doubled.energy * 4 / self.beam.energy, 1.0, delta=1e-15)

    def test_rejects_non_positive(self):
        with self.assertRaises(DomainError):
            beam_from_wavelength(0.0, WAVELENGTH)
        with self.assertRaises(DomainError):
            beam_from_wavelength(NEUTRON_MASS, 0.0)

    def test_rejects_non_finite_kinematics(self):
        for wavelength in (1e-200, 1e-320):
            with self.assertRaises(DomainError):
                beam_from_wavelength(NEUTRON_MASS, wavelength)


class GratingTest(SimpleTestCase):

    def test_centers_symmetric_and_evenly_spaced(self):
        for n in (1, 2, 3, 4, 17, 64):
            grating = GratingConfig(n_slits=n, period=5e-8, sigma=SIGMA)
            centers = grating.slit_centers
            self.assertEqual(len(centers), n)
            self.assertTrue(np.all(np.diff(centers) > 0) or n == 1)
            np.testing.assert_allclose(centers, -centers[::-1], rtol=0, atol=1e-15)
            if n > 1:
                np.testing.assert_allclose(np.diff(centers), 5e-8, rtol=0, atol=1e-15)

    def test_central_midpoint(self):
        self.assertEqual(GratingConfig(n_slits=4, period=5e-8, sigma=SIGMA).central_midpoint, 0.0)
        self.assertEqual(GratingConfig(n_slits=3, period=5e-8, sigma=SIGMA).central_midpoint, 2.5e-8)

    def test_invalid_gratings(self):
        for kwargs in ({'n_slits': 0, 'period': 5e-8, 'sigma': SIGMA},
                       {'n_slits': 2.5, 'period': 5e-8, 'sigma': SIGMA},
                       {'n_slits': 4, 'period': -5e-8, 'sigma': SIGMA},
                       {'n_slits': 4, 'period': 5e-8, 'sigma': 0.0}):
            with self.assertRaises(DomainError):
                GratingConfig(**kwargs)

    def test_centers_read_only(self):
        grating = GratingConfig(n_slits=4, period=5e-8, sigma=SIGMA)
        with self.assertRaises(ValueError):
            grating.slit_centers[0] = 0.0


class ComplexArithmeticTest(SimpleTestCase):

    def test_field_axioms(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, b, c = (complex(*rng.uniform(-10, 10, 2)) for _ in range(3))
            scale = abs(a) * abs(b) * abs(c) + abs(a) + abs(b) + abs(c)
            self.assertLess(abs((a + b) + c - (a + (b + c))), 1e-12 * scale)
            self.assertLess(abs((a * b) * c - a * (b * c)), 1e-12 * scale)
            self.assertLess(abs(a * (b + c) - (a * b + a * c)), 1e-12 * scale)
            self.assertLess(abs((a / b) * b - a), 1e-12 * abs(a))
            self.assertLess(abs(np.exp(a + b) / (np.exp(a) * np.exp(b)) - 1), 1e-12)
            self.assertGreaterEqual(a.real ** 2 + a.imag ** 2, 0.0)


class SigmaTTest(SimpleTestCase):

    def setUp(self):
        self.beam = beam_from_wavelength(NEUTRON_MASS, WAVELENGTH)

    def test_no_spreading_at_start(self):
        value = sigma_t(SIGMA, 0.0, self.beam)
        self.assertEqual(value.real, SIGMA)
        self.assertEqual(value.imag, 0.0)

    def test_unit_spreading_parameter(self):
        t = 2 * NEUTRON_MASS * SIGMA ** 2 / HBAR
        value = sigma_t(SIGMA, t, self.beam)
        self.assertAlmostEqual(value.real / SIGMA, 1.0, delta=1e-12)
        self.assertAlmostEqual(value.imag / SIGMA, 1.0, delta=1e-12)

    def test_high_precision_value(self):
        with mpmath.workdps(40):
            hbar = mpmath.mpf(PLANCK) / (2 * mpmath.pi)
            sigma = mpmath.mpf(SIGMA)
            t = mpmath.mpf(1e-6)
            expected = sigma * (1 + 1j * hbar / (2 * mpmath.mpf(NEUTRON_MASS)) * t / sigma ** 2)
            expected = complex(expected)
        value = sigma_t(SIGMA, 1e-6, self.beam)
        self.assertLess(abs(value - expected) / abs(expected), 1e-14)

    def test_rejects_negative_time(self):
        with self.assertRaises(DomainError):
            sigma_t(SIGMA, -1.0, self.beam)

    def test_context_at_grating_plane(self):
        ctx = make_context()
        self.assertEqual(complex(ctx.sigma_t(0.0)), complex(SIGMA, 0.0))
        with self.assertRaises(DomainError):
            ctx.time_at(-1e-9)


class PacketTest(SimpleTestCase):

    def setUp(self):
        self.ctx = make_context(n_slits=1)

    def test_peak_at_grating_plane(self):
        value = packet_psi(0.0, 0.0, 0.0, self.ctx)
        self.assertAlmostEqual(abs(value) / (2 * math.pi * SIGMA ** 2) ** -0.25, 1.0, delta=1e-14)
        self.assertEqual(np.angle(value), 0.0)

    def test_reduces_to_initial_gaussian(self):
        x0 = 1.5e-8
        xs = x0 + np.linspace(-6, 6, 101) * SIGMA
        phi0 = (2 * math.pi * SIGMA ** 2) ** -0.25 * np.exp(-(xs - x0) ** 2 / (4 * SIGMA ** 2))
        np.testing.assert_allclose(np.abs(packet_psi(xs, x0, 0.0, self.ctx)), phi0, rtol=1e-12)

    def test_normalised_at_every_distance(self):
        z_t = self.ctx.talbot_length
        for z in (0.0, z_t / 1000, z_t / 4, z_t, 100 * z_t):
            width = abs(complex(self.ctx.sigma_t(z)))
            total, _ = quad(lambda u: density(u * width, z, self.ctx) * width, -40, 40,
                            points=(-1.0, 0.0, 1.0), limit=200)
            self.assertAlmostEqual(total, 1.0, delta=1e-8)

    def test_modulus_is_gaussian_of_width_sigma_t(self):
        x0 = -2e-8
        for z in (0.0, 3e-7, 4e-5):
            width = abs(complex(self.ctx.sigma_t(z)))
            ratio = abs(packet_psi(x0 + width, x0, z, self.ctx)) ** 2 / abs(packet_psi(x0, x0, z, self.ctx)) ** 2
            self.assertAlmostEqual(ratio, math.exp(-0.5), delta=1e-10)

    def test_spectrum(self):
        self.assertAlmostEqual(packet_spectrum(0.0, 0.0, SIGMA).real / (8 * math.pi * SIGMA ** 2) ** 0.25, 1.0,
                               delta=1e-14)
        self.assertEqual(packet_spectrum(0.0, 0.0, SIGMA).imag, 0.0)
        rng = np.random.default_rng(3)
        ks = rng.uniform(-5, 5, 20) / (2 * math.pi * SIGMA)
        amplitude = (8 * math.pi * SIGMA ** 2) ** 0.25 * np.exp(-4 * math.pi ** 2 * SIGMA ** 2 * ks ** 2)
        np.testing.assert_allclose(np.abs(packet_spectrum(ks, 3e-8, SIGMA)), amplitude, rtol=1e-12)

    def test_inverse_transform_of_dispersed_spectrum(self):
        beam = self.ctx.beam
        rng = np.random.default_rng(11)
        k_max = 10 / (2 * math.pi * SIGMA)
        ks = np.linspace(-k_max, k_max, 40001)
        x0 = 1e-8
        spreading_time = 2 * beam.mass * SIGMA ** 2 / HBAR
        for _ in range(20):
            t = rng.uniform(0, 2) * spreading_time
            width = abs(complex(sigma_t(SIGMA, t, beam)))
            x = x0 + rng.uniform(-3, 3) * width
            integrand = (packet_spectrum(ks, x0, SIGMA)
                         * np.exp(-1j * (2 * math.pi * ks) ** 2 * HBAR / (2 * beam.mass) * t)
                         * np.exp(2j * math.pi * ks * x))
            numeric = trapezoid(integrand, ks)
            closed = dispersed_packet(x, x0, t, SIGMA, beam)
            self.assertLess(abs(numeric - closed) * math.sqrt(SIGMA), 1e-6)


class SuperpositionTest(SimpleTestCase):

    def test_single_slit_is_single_packet(self):
        ctx = make_context(n_slits=1)
        xs = np.linspace(-3e-8, 3e-8, 31)
        for z in (0.0, 1e-7, 1e-6):
            np.testing.assert_allclose(superposed_psi(xs, z, ctx), packet_psi(xs, 0.0, z, ctx), rtol=1e-14)

    def test_two_slit_hand_sum(self):
        ctx = make_context(n_slits=2)
        rng = np.random.default_rng(5)
        left, right = ctx.grating.slit_centers
        for _ in range(50):
            x = rng.uniform(-1e-7, 1e-7)
            z = rng.uniform(0, 2e-6)
            a = packet_psi(x, left, z, ctx)
            b = packet_psi(x, right, z, ctx)
            self.assertLessEqual(abs(superposed_psi(x, z, ctx) - (a + b) / 2), 1e-14 * (abs(a) + abs(b)))

    def test_even_symmetry(self):
        for n in (2, 4, 7):
            ctx = make_context(n_slits=n)
            rng = np.random.default_rng(n)
            xs = rng.uniform(-3e-7, 3e-7, 200)
            for z in rng.uniform(1e-9, 2e-6, 5):
                column_max = np.max(density(np.linspace(-3e-7, 3e-7, 2001), z, ctx))
                np.testing.assert_allclose(density(xs, z, ctx), density(-xs, z, ctx), rtol=0,
                                           atol=1e-12 * column_max)

    def test_density_non_negative(self):
        ctx = make_context(n_slits=8)
        xs = np.linspace(-5e-7, 5e-7, 1001)
        for z in (0.0, 1e-8, 5e-7, 1e-5):
            self.assertTrue(np.all(density(xs, z, ctx) >= 0))

    def test_single_slit_density_is_normal(self):
        ctx = make_context(n_slits=1)
        xs = np.linspace(-4e-8, 4e-8, 81)
        for z in (0.0, 2e-7, 3e-6):
            width = abs(complex(ctx.sigma_t(z)))
            np.testing.assert_allclose(density(xs, z, ctx), norm.pdf(xs, 0.0, width), rtol=1e-10)

    def test_gradient_matches_derivative_of_single_packet(self):
        ctx = make_context(n_slits=1)
        x, z = 7e-9, 4e-7
        psi, gradient = psi_and_gradient(x, z, ctx)
        st = complex(ctx.sigma_t(z))
        self.assertLess(abs(psi - superposed_psi(x, z, ctx)), 1e-14 * abs(psi))
        self.assertLess(abs(gradient - (-x / (2 * SIGMA * st)) * psi), 1e-12 * abs(gradient))

    def test_scalar_in_scalar_out(self):
        ctx = make_context()
        self.assertEqual(np.ndim(density(0.0, 1e-7, ctx)), 0)
        self.assertEqual(np.shape(density(np.zeros(3), 1e-7, ctx)), (3,))

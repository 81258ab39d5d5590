import os

import numpy as np
import yaml
from django.test import SimpleTestCase, tag
from scipy.signal import argrelextrema
from scipy.stats import norm, pearsonr

from nslit.constants import NEUTRON_MASS
from nslit.exceptions import DomainError
from nslit.fieldgrid import (FIXED_X, FIXED_Z, GridSpec, cross_section, default_grid, revival_metrics,
                             sample_density, sample_velocity, talbot_section)
from nslit.qcore import EvalContext, GratingConfig, beam_from_wavelength, density

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')


def make_context(n_slits=4, d=5e-8):
    beam = beam_from_wavelength(NEUTRON_MASS, 5e-9)
    return EvalContext(beam=beam, grating=GratingConfig(n_slits=n_slits, period=d, sigma=5e-9))


class GridSpecTest(SimpleTestCase):

    def test_invalid_specs(self):
        for kwargs in ({'x_min': 1.0, 'x_max': 0.0, 'nx': 4, 'z_min': 1.0, 'z_max': 2.0, 'nz': 4},
                       {'x_min': 0.0, 'x_max': 1.0, 'nx': 4, 'z_min': 0.0, 'z_max': 2.0, 'nz': 4},
                       {'x_min': 0.0, 'x_max': 1.0, 'nx': 1, 'z_min': 1.0, 'z_max': 2.0, 'nz': 4},
                       {'x_min': 0.0, 'x_max': 1.0, 'nx': 4, 'z_min': 3.0, 'z_max': 2.0, 'nz': 4}):
            with self.assertRaises(DomainError):
                GridSpec(**kwargs)

    def test_axes_include_bounds(self):
        spec = GridSpec(-1e-7, 1e-7, 5, 1e-9, 1e-6, 3)
        np.testing.assert_array_equal(spec.x_values(), [-1e-7, -5e-8, 0.0, 5e-8, 1e-7])
        self.assertEqual(spec.z_values()[0], 1e-9)
        self.assertEqual(spec.z_values()[-1], 1e-6)

    def test_default_grid(self):
        ctx = make_context()
        spec = default_grid(ctx)
        self.assertEqual((spec.nx, spec.nz), (1024, 1024))
        self.assertAlmostEqual(spec.x_max, 4 * 5e-8, delta=1e-22)
        self.assertEqual(spec.x_min, -spec.x_max)
        self.assertAlmostEqual(spec.z_min / (ctx.talbot_length / 1000), 1.0, delta=1e-15)
        self.assertEqual(spec.z_max, ctx.talbot_length)


class SampleDensityTest(SimpleTestCase):

    def test_two_by_two_single_slit(self):
        ctx = make_context(n_slits=1)
        spec = GridSpec(-1e-8, 2e-8, 2, 1e-7, 4e-7, 2)
        field = sample_density(ctx, spec)
        self.assertEqual(field.values.shape, (2, 2))
        for i, x in enumerate((-1e-8, 2e-8)):
            for j, z in enumerate((1e-7, 4e-7)):
                width = abs(complex(ctx.sigma_t(z)))
                self.assertAlmostEqual(field.values[i, j] / norm.pdf(x, 0.0, width), 1.0, delta=1e-10)
        self.assertEqual(field.global_max, field.values.max())
        np.testing.assert_array_equal(field.column_max, field.values.max(axis=0))

    def test_mirror_symmetric(self):
        ctx = make_context()
        field = sample_density(ctx, GridSpec(-2e-7, 2e-7, 101, 1e-9, 1e-6, 40))
        np.testing.assert_allclose(field.values, field.values[::-1, :], rtol=0,
                                   atol=1e-12 * field.global_max)
        self.assertTrue(np.all(field.values >= 0))

    def test_deterministic_across_threads(self):
        ctx = make_context()
        spec = GridSpec(-2e-7, 2e-7, 64, 1e-9, 1e-6, 33)
        serial = sample_density(ctx, spec, threads=1)
        np.testing.assert_array_equal(serial.values, sample_density(ctx, spec, threads=1).values)
        np.testing.assert_array_equal(serial.values, sample_density(ctx, spec, threads=4).values)

    def test_refinement_keeps_samples(self):
        ctx = make_context()
        coarse = sample_density(ctx, GridSpec(-2e-7, 2e-7, 33, 1e-9, 1e-6, 17))
        fine = sample_density(ctx, GridSpec(-2e-7, 2e-7, 65, 1e-9, 1e-6, 33))
        np.testing.assert_array_equal(fine.values[::2, ::2], coarse.values)

    def test_maximum_next_to_slits(self):
        ctx = make_context()
        field = sample_density(ctx, GridSpec(0.0, 1.4e-6, 200, 5e-8, 3.8e-6, 100))
        self.assertEqual(np.argmax(field.column_max), 0)

    def test_velocity_field(self):
        ctx = make_context()
        spec = GridSpec(-2e-7, 2e-7, 41, 1e-8, 1e-6, 11)
        field = sample_velocity(ctx, spec, threads=2)
        self.assertEqual(field.values.shape, (41, 11))
        self.assertTrue(np.all(np.abs(field.values[20, :]) < 1e-12))
        far = sample_velocity(ctx, GridSpec(1e-5, 2e-5, 3, 1e-9, 2e-9, 2))
        self.assertTrue(np.all(np.isnan(far.values)))


class CrossSectionTest(SimpleTestCase):

    def setUp(self):
        self.ctx = make_context()
        self.spec = default_grid(self.ctx, nx=64, nz=64)

    def test_exact_re_evaluation(self):
        section = cross_section(self.ctx, self.spec, FIXED_Z, 5e-7, n_samples=301)
        self.assertEqual(section.positions.size, 301)
        self.assertTrue(np.all(np.diff(section.positions) > 0))
        np.testing.assert_array_equal(section.values, density(section.positions, 5e-7, self.ctx))
        self.assertEqual(section.samples[0], (section.positions[0], section.values[0]))

    def test_accepts_field_as_domain(self):
        field = sample_density(self.ctx, self.spec)
        section = cross_section(self.ctx, field, FIXED_X, 0.0)
        self.assertEqual(section.positions.size, self.spec.nz)
        np.testing.assert_array_equal(section.positions, self.spec.z_values())

    def test_single_slit_decays_along_axis(self):
        ctx = make_context(n_slits=1)
        section = cross_section(ctx, default_grid(ctx, 16, 16), FIXED_X, 0.0, n_samples=500)
        self.assertTrue(np.all(np.diff(section.values) < 0))

    def test_far_field_comparison_input(self):
        spec = GridSpec(-1e-3, 1e-3, 16, 1e-9, 0.01, 16)
        section = cross_section(self.ctx, spec, FIXED_Z, 0.004, n_samples=4096)
        self.assertEqual(section.coordinate, 0.004)
        self.assertEqual(section.axis, FIXED_Z)

    def test_out_of_domain(self):
        with self.assertRaises(DomainError):
            cross_section(self.ctx, self.spec, FIXED_X, 1.0)
        with self.assertRaises(DomainError):
            cross_section(self.ctx, self.spec, FIXED_Z, 2 * self.ctx.talbot_length)
        with self.assertRaises(DomainError):
            cross_section(self.ctx, self.spec, 'diagonal', 0.0)

    def test_rejects_too_few_samples(self):
        for n in (-5, 0, 1, 2.5):
            with self.assertRaises(DomainError):
                cross_section(self.ctx, self.spec, FIXED_Z, 5e-7, n_samples=n)
        with self.assertRaises(DomainError):
            revival_metrics(make_context(n_slits=64), 1e-7, n_samples=-5)


class TalbotUnitsTest(SimpleTestCase):

    def test_carpets_agree_in_talbot_units(self):
        narrow = make_context(n_slits=64, d=5e-8)
        wide = make_context(n_slits=64, d=1e-7)
        for fraction in (0.25, 0.5, 0.75, 1.0):
            a = talbot_section(narrow, fraction)
            b = talbot_section(wide, fraction)
            np.testing.assert_allclose(a.positions / 5e-8, b.positions / 1e-7, rtol=1e-12)
            self.assertGreaterEqual(pearsonr(a.values / a.values.max(), b.values / b.values.max())[0], 0.8)

    def test_rejects_non_positive_fraction(self):
        with self.assertRaises(DomainError):
            talbot_section(make_context(), 0.0)


class RevivalTest(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super(RevivalTest, cls).setUpClass()
        with open(os.path.join(DATA_DIR, 'revival.yaml')) as f:
            cls.thresholds = yaml.safe_load(f)
        cls.ctx = make_context(n_slits=64)

    def test_revival_correlations(self):
        metrics = revival_metrics(self.ctx, self.thresholds['window_half_width'])
        self.assertGreaterEqual(metrics.full_revival_corr, self.thresholds['full_revival_corr'])
        self.assertGreaterEqual(metrics.half_revival_shift_corr, self.thresholds['half_revival_shift_corr'])
        self.assertAlmostEqual(metrics.z_ref / (self.ctx.talbot_length / 50), 1.0, delta=1e-15)

    def test_preconditions(self):
        with self.assertRaises(DomainError):
            revival_metrics(make_context(n_slits=1), 1e-7)
        with self.assertRaises(DomainError):
            revival_metrics(make_context(n_slits=8), 1e-7)
        with self.assertRaises(DomainError):
            revival_metrics(self.ctx, 5e-8)
        with self.assertRaises(DomainError):
            revival_metrics(self.ctx, 64 * 5e-8)

    @tag('slow')
    def test_midpoint_cross_section(self):
        z_t = self.ctx.talbot_length
        spec = GridSpec(-1e-7, 1e-7, 2048, z_t / 1000, z_t, 2048)
        section = cross_section(self.ctx, spec, FIXED_X, self.ctx.grating.central_midpoint)
        values = section.values
        peak = values.max()
        self.assertLess(values[0], self.thresholds['end_value_fraction'] * peak)
        self.assertLess(values[-1], self.thresholds['end_value_fraction'] * peak)

        maxima = section.positions[argrelextrema(values, np.greater)[0]]
        tolerance = self.thresholds['quarter_point_tolerance'] * z_t
        for quarter in (0.25, 0.5, 0.75):
            self.assertLessEqual(np.min(np.abs(maxima - quarter * z_t)), tolerance)

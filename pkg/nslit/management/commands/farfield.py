#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np

from nslit.artifacts import write_columns
from nslit.exceptions import DomainError
from nslit.farfield import compare_with_simulation, principal_maxima
from nslit.utils.command import SimulationCommand


class Command(SimulationCommand):
    """Writes the peak-normalised simulated and analytic far-field cross-sections side by side.

    Without an x range the window spans three principal-maximum spacings on
    each side of the axis.
    """

    help = 'Compare the simulated far field with the diffraction formula'
    default_output = 'farfield.csv'

    def add_simulation_arguments(self, parser):
        parser.add_argument('--z', type=float, dest='z', help='Distance behind the grating in m.')
        parser.add_argument('--x-min', type=float, dest='x_min')
        parser.add_argument('--x-max', type=float, dest='x_max')
        parser.add_argument('--n', type=int, dest='n', help='Number of x samples (default 4096).')

    def simulate(self, config, options):
        ctx = config.context
        p = config.farfield
        z = self.float_option('z')
        if z is None:
            raise DomainError('farfield needs --z')
        if not z > 0:
            raise DomainError('z must be > 0 in the far field, got {!r}'.format(z))

        z_t = ctx.talbot_length
        if z < 10 * z_t:
            self.warn('z={:.6e} m is only {:.3g} Talbot lengths behind the grating, '
                      'the diffraction formula assumes the far field'.format(z, z / z_t))

        spacing = float(np.diff(principal_maxima(z, p, count=2))[0])
        x_min = self.float_option('x_min', -3 * spacing)
        x_max = self.float_option('x_max', 3 * spacing)
        n = self.int_option('n', 4096)
        if not x_min < x_max or n < 2:
            raise DomainError('need x_min < x_max and n >= 2')

        xs = x_min + (x_max - x_min) * (np.arange(n) / (n - 1))
        comparison = compare_with_simulation(ctx, p, z, xs)

        out = self.output_path()
        write_columns(out, ['x', 'simulated', 'analytic'],
                      np.column_stack([comparison.x, comparison.simulated, comparison.analytic]))
        self.stdout.write('N={} ({} sources, {} form), principal maxima spacing {:.6e} m'.format(
            p.n_for_formula, config.grating.n_slits, p.form, spacing))
        self.stdout.write('max |simulated - analytic| = {:.6f}'.format(comparison.max_deviation))
        self.success('Wrote far-field comparison to {}'.format(out))

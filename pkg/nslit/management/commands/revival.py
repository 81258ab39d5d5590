#!/usr/bin/env python
# -*- coding: utf-8 -*-

from nslit.fieldgrid import revival_metrics
from nslit.utils.command import SimulationCommand


class Command(SimulationCommand):
    """Reports how well the central window of the carpet revives after one and after half a Talbot length."""

    help = 'Talbot revival correlations'

    def add_simulation_arguments(self, parser):
        parser.add_argument('--window', type=float, dest='window',
                            help='Half-width of the central window in m (default: 4 periods).')
        parser.add_argument('--n', type=int, dest='n', help='Samples across the window (default 1001).')

    def simulate(self, config, options):
        d = config.grating.period
        window = self.float_option('window', 4 * d)
        metrics = revival_metrics(config.context, window, n_samples=self.int_option('n', 1001))

        self.stdout.write('window         +-{:.6e} m ({:.2f} periods)'.format(window, window / d))
        self.stdout.write('z_ref          {:.6e} m'.format(metrics.z_ref))
        self.stdout.write('full revival   {:.6f}'.format(metrics.full_revival_corr))
        self.stdout.write('half revival   {:.6f} (shifted by d/2)'.format(metrics.half_revival_shift_corr))
        self.success('Revival metrics computed for {} slits'.format(config.grating.n_slits))

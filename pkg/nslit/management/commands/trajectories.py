#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os

import numpy as np
from django.conf import settings
from django.core.management.base import CommandError

from nslit.artifacts import export_trajectories, write_columns
from nslit.bohm import STATUS_CHOICES, Seed, integrate_many, seed_trajectories
from nslit.exceptions import DomainError
from nslit.utils.command import EXIT_NUMERIC, SimulationCommand


class Command(SimulationCommand):
    """Integrates Bohmian trajectories behind the grating and writes one CSV per path.

    Seeds sit at equally spaced quantiles of every slit's initial Gaussian, or
    at explicit positions given with ``--seed-x``, on the plane ``--z0`` (default:
    the grid's z_min). A summary table (seed, status, final x) is written next
    to the path files. The command exits with code 3 when any trajectory stopped before ``--z-end``.
    """

    help = 'Integrate Bohmian trajectories'

    def add_simulation_arguments(self, parser):
        parser.add_argument('--out', dest='out', default=None, help='Output directory.')
        parser.add_argument('--trajectories', type=int, dest='trajectories', help='Seeds per slit (default 10).')
        parser.add_argument('--quantiles', dest='quantiles', help='Seed quantile range LO,HI (default 0.05,0.95).')
        parser.add_argument('--seed-x', type=float, nargs='+', dest='seed_x', help='Explicit seed positions in m.')
        parser.add_argument('--z0', type=float, dest='z0',
                            help='Starting plane in m (default: grid z_min, 0 starts at the grating).')
        parser.add_argument('--z-end', type=float, dest='z_end', help='Final z in m (default: grid z_max).')
        parser.add_argument('--samples', type=int, dest='samples',
                            help='Report every path on this many equally spaced z planes.')

    def quantiles(self):
        value = self.option('quantiles', '0.05,0.95')
        if isinstance(value, str):
            value = value.split(',')
        try:
            lo, hi = (float(v) for v in value)
        except (TypeError, ValueError):
            raise DomainError('quantiles must be LO,HI, got {!r}'.format(value))
        return lo, hi

    def seeds(self, ctx, z0):
        seed_x = self.option('seed_x')
        if seed_x is None:
            lo, hi = self.quantiles()
            return seed_trajectories(ctx, self.int_option('trajectories', 10), lo, hi, z0)

        if not isinstance(seed_x, (list, tuple)):
            seed_x = [seed_x]
        centers = ctx.grating.slit_centers
        seeds = []
        for x0 in (float(x) for x in seed_x):
            slit = int(np.argmin(np.abs(centers - x0)))
            seeds.append(Seed(x0=x0, z0=z0, slit=slit, offset=float(x0 - centers[slit])))
        return seeds

    def simulate(self, config, options):
        ctx = config.context
        z0 = self.float_option('z0', config.grid.z_min)
        z_end = self.float_option('z_end', config.grid.z_max)
        if not 0 <= z0 < z_end:
            raise DomainError('need 0 <= z0 < z_end, got z0={!r} z_end={!r}'.format(z0, z_end))
        samples = self.int_option('samples')
        z_eval = None
        if samples is not None:
            if samples < 1:
                raise DomainError('samples must be at least 1')
            z_eval = z0 + (z_end - z0) * (np.arange(1, samples + 1) / samples)

        seeds = self.seeds(ctx, z0)
        trajectories = integrate_many(seeds, z_end, ctx, config.integrator, threads=self.threads, z_eval=z_eval)

        directory = options.get('out') or os.path.join(settings.NSLIT['output_dir'], 'trajectories')
        export_trajectories(trajectories, directory)
        summary = [[seed.slit, seed.offset, seed.x0, trajectory.z[-1], trajectory.x[-1], trajectory.clamp_events,
                    0 if not trajectory.truncated else 1]
                   for seed, trajectory in zip(seeds, trajectories)]
        write_columns(os.path.join(directory, 'summary.csv'),
                      ['slit', 'offset', 'x0', 'z_last', 'x_last', 'clamp_events', 'truncated'], summary)
        self.success('Wrote {} trajectories to {}'.format(len(trajectories), directory))

        truncated = [(index, trajectory) for index, trajectory in enumerate(trajectories) if trajectory.truncated]
        if truncated:
            for index, trajectory in truncated:
                self.stdout.write(self.style.ERROR('trajectory {} from x0={:.6e} m: {} at z={:.6e} m ({})'.format(
                    index, seeds[index].x0, trajectory.status, trajectory.z[-1], dict(STATUS_CHOICES)[trajectory.status])))
            raise CommandError('{} of {} trajectories were truncated'.format(len(truncated), len(trajectories)),
                               returncode=EXIT_NUMERIC)

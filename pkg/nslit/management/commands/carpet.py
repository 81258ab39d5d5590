#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import replace

from nslit.artifacts import (NORMALIZATION_CHOICES, PALETTE_CHOICES, export_csv, image_format_for, render_carpet,
                             write_bytes)
from nslit.bohm import integrate_many, seed_trajectories
from nslit.fieldgrid import sample_density, sample_velocity
from nslit.utils.command import SimulationCommand, parse_grid


class Command(SimulationCommand):
    """Samples the density on the configured grid and renders it as a grayscale carpet.

    With ``--trajectories N`` the Bohmian paths of N seeds per slit are
    integrated over the grid range and drawn on top of the carpet.
    """

    help = 'Render a Talbot carpet'
    default_output = 'carpet.pgm'

    def add_simulation_arguments(self, parser):
        parser.add_argument('--grid', dest='grid', help='Grid resolution NXxNZ.')
        parser.add_argument('--normalization', dest='normalization', choices=NORMALIZATION_CHOICES)
        parser.add_argument('--gamma', type=float, dest='gamma')
        parser.add_argument('--palette', dest='palette', choices=PALETTE_CHOICES)
        parser.add_argument('--trajectories', type=int, dest='trajectories',
                            help='Trajectories per slit drawn over the carpet.')
        parser.add_argument('--png', action='store_true', dest='png', help='Write PNG instead of PGM.')
        parser.add_argument('--csv', dest='csv', help='Also write the density field as CSV to this path.')
        parser.add_argument('--velocity-csv', dest='velocity_csv',
                            help='Also write the guidance velocity field as CSV to this path.')

    def simulate(self, config, options):
        ctx = config.context
        spec = config.grid
        grid = self.option('grid')
        if grid is not None:
            spec = spec.with_resolution(*parse_grid(grid))

        render = replace(config.render,
                         normalization=self.option('normalization', config.render.normalization),
                         gamma=self.float_option('gamma', config.render.gamma),
                         palette=self.option('palette', config.render.palette))

        field = sample_density(ctx, spec, threads=self.threads)

        trajectories = None
        per_slit = self.int_option('trajectories', 0)
        if per_slit > 0:
            seeds = seed_trajectories(ctx, per_slit, 0.05, 0.95, spec.z_min)
            trajectories = integrate_many(seeds, spec.z_max, ctx, config.integrator, threads=self.threads)
            truncated = sum(1 for trajectory in trajectories if trajectory.truncated)
            if truncated:
                self.warn('{} of {} trajectories stopped before z={:.6e} m'.format(
                    truncated, len(trajectories), spec.z_max))

        out = self.output_path()
        fmt = 'PNG' if options.get('png') else image_format_for(out)
        if options.get('png') and not self.options.get('out'):
            out = self.output_path(default='carpet.png')
        write_bytes(out, render_carpet(field, trajectories, render, fmt=fmt))
        self.success('Wrote {}x{} carpet to {}'.format(spec.nx, spec.nz, out))

        if options.get('csv'):
            export_csv(field, options['csv'])
            self.success('Wrote density field to {}'.format(options['csv']))
        if options.get('velocity_csv'):
            export_csv(sample_velocity(ctx, spec, threads=self.threads), options['velocity_csv'])
            self.success('Wrote velocity field to {}'.format(options['velocity_csv']))

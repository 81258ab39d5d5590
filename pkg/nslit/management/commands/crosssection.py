#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import replace

from nslit.artifacts import export_csv
from nslit.fieldgrid import AXIS_CHOICES, FIXED_X, cross_section
from nslit.utils.command import SimulationCommand


class Command(SimulationCommand):
    """Density along a line of constant x (default: the midpoint between the central slits) or constant z."""

    help = 'Write a density cross-section'
    default_output = 'crosssection.csv'

    def add_simulation_arguments(self, parser):
        parser.add_argument('--axis', dest='axis', choices=AXIS_CHOICES)
        parser.add_argument('--coordinate', type=float, dest='coordinate', help='Fixed x or z in m.')
        parser.add_argument('--n', type=int, dest='n', help='Number of samples along the line.')
        parser.add_argument('--from', type=float, dest='start', help='Start of the line, overrides the grid.')
        parser.add_argument('--to', type=float, dest='stop', help='End of the line, overrides the grid.')

    def simulate(self, config, options):
        axis = self.option('axis', FIXED_X)
        default_coordinate = config.grating.central_midpoint if axis == FIXED_X else config.grid.z_max
        coordinate = self.float_option('coordinate', default_coordinate)

        spec = config.grid
        start = self.float_option('start')
        stop = self.float_option('stop')
        if axis == FIXED_X:
            spec = replace(spec, z_min=spec.z_min if start is None else start,
                           z_max=spec.z_max if stop is None else stop)
        else:
            spec = replace(spec, x_min=spec.x_min if start is None else start,
                           x_max=spec.x_max if stop is None else stop)

        section = cross_section(config.context, spec, axis, coordinate, self.int_option('n'))
        out = self.output_path()
        export_csv(section, out)
        self.success('Wrote {} cross-section at {:.6e} m ({} samples) to {}'.format(
            axis, coordinate, section.positions.size, out))

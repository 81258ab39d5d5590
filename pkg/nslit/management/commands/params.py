#!/usr/bin/env python
# -*- coding: utf-8 -*-

from nslit.utils.command import SimulationCommand


class Command(SimulationCommand):
    """Prints the beam kinematics, the Talbot length and the slit positions of a configuration."""

    help = 'Show beam and grating parameters'

    def simulate(self, config, options):
        beam = config.beam
        grating = config.grating
        ctx = config.context

        self.stdout.write('configuration: {}'.format(config.source))
        self.stdout.write('beam')
        self.stdout.write('  mass        m   = {:.6e} kg'.format(beam.mass))
        self.stdout.write('  wavelength  l   = {:.6e} m'.format(beam.wavelength))
        self.stdout.write('  energy      E   = {:.6e} J'.format(beam.energy))
        self.stdout.write('  temperature T   = {:.6e} K'.format(beam.temperature))
        self.stdout.write('  velocity    v_z = {:.6e} m/s'.format(beam.v_z))
        self.stdout.write('  wave number k_z = {:.6e} rad/m'.format(beam.k_z))
        self.stdout.write('  frequency   w   = {:.6e} rad/s'.format(beam.omega))
        self.stdout.write('grating')
        self.stdout.write('  slits       {}'.format(grating.n_slits))
        self.stdout.write('  period      d   = {:.6e} m'.format(grating.period))
        self.stdout.write('  packet      s   = {:.6e} m'.format(grating.sigma))
        self.stdout.write('  Talbot      z_T = {:.6e} m'.format(ctx.talbot_length))
        self.stdout.write('slit  center [m]')
        for index, center in enumerate(grating.slit_centers.tolist()):
            self.stdout.write('{:4d}  {: .6e}'.format(index, center))

#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Run configuration files.

A run is described by a YAML document with the sections ``beam``,
``grating`` and the optional ``grid``, ``integrator``, ``render``,
``farfield`` and ``defaults``. All values are SI. Validation is strict and
reports every problem of a document at once in a single ValidationError.
"""

import logging
import os
from dataclasses import dataclass, field

import yaml
from django.conf import settings
from django.core.exceptions import ValidationError

from nslit.artifacts import NORMALIZATION_CHOICES, PALETTE_CHOICES, RenderOptions
from nslit.bohm import IntegratorConfig
from nslit.constants import MASS_ALIASES
from nslit.exceptions import DomainError
from nslit.farfield import FORM_CHOICES, SOURCES_CHOICES, FarFieldParams
from nslit.fieldgrid import GridSpec, default_grid
from nslit.qcore import EvalContext, GratingConfig, beam_from_wavelength

logger = logging.getLogger('config')

SECTIONS = ('beam', 'grating', 'grid', 'integrator', 'render', 'farfield', 'defaults')

# flag defaults a recipe may set, keyed by the option destination of the commands
DEFAULT_KEYS = ('z', 'x_min', 'x_max', 'n', 'axis', 'coordinate', 'start', 'stop', 'trajectories',
                'quantiles', 'seed_x', 'z0', 'z_end', 'samples', 'window', 'grid', 'normalization',
                'gamma', 'palette')


@dataclass(frozen=True)
class RunConfig:
    beam: object
    grating: GratingConfig
    grid: GridSpec
    integrator: IntegratorConfig
    render: RenderOptions
    farfield: FarFieldParams
    defaults: dict = field(default_factory=dict)
    source: str = ''

    @property
    def context(self):
        return EvalContext(beam=self.beam, grating=self.grating)


class ConfigHandler(object):
    """Validates one parsed document and builds the RunConfig from it."""

    error_messages = {
        'document': "The configuration must be a mapping of sections, got %(type)s.",
        'section': "Unknown section '%(section)s'.",
        'section_type': "Section '%(section)s' must be a mapping.",
        'required': "%(section)s.%(key)s is required.",
        'unknown_key': "Unknown key %(section)s.%(key)s.",
        'number': "%(section)s.%(key)s must be a number, got %(value)r.",
        'integer': "%(section)s.%(key)s must be an integer, got %(value)r.",
        'boolean': "%(section)s.%(key)s must be true or false, got %(value)r.",
        'positive': "%(section)s.%(key)s must be positive, got %(value)r.",
        'choice': "%(section)s.%(key)s must be one of %(choices)s, got %(value)r.",
        'mass': "beam.mass must be a positive number or one of %(choices)s, got %(value)r.",
        'invalid': "%(section)s: %(message)s",
    }

    required_keys = {
        'beam': ('mass', 'wavelength'),
        'grating': ('n_slits', 'd', 'sigma'),
    }
    known_keys = {
        'beam': ('mass', 'wavelength'),
        'grating': ('n_slits', 'd', 'sigma'),
        'grid': ('x_min', 'x_max', 'nx', 'z_min', 'z_max', 'nz'),
        'integrator': ('rel_tol', 'dz_initial_fraction', 'dz_min_fraction', 'v_cap_factor', 'max_steps'),
        'render': ('palette', 'normalization', 'gamma', 'width', 'height', 'trajectory_overlay'),
        'farfield': ('sources', 'form'),
        'defaults': DEFAULT_KEYS,
    }

    def __init__(self, document, source='<string>'):
        self.document = document
        self.source = source
        self.errors = []

    def error(self, code, **params):
        self.errors.append(ValidationError(self.error_messages[code], code, params))

    def section(self, name):
        value = self.document.get(name)
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.error('section_type', section=name)
            return {}
        for key in value:
            if key not in self.known_keys[name]:
                self.error('unknown_key', section=name, key=key)
        for key in self.required_keys.get(name, ()):
            if key not in value:
                self.error('required', section=name, key=key)
        return value

    def number(self, section, values, key, integer=False, positive=True):
        if key not in values:
            return None
        value = values[key]
        if isinstance(value, bool):
            self.error('number', section=section, key=key, value=value)
            return None
        # yaml reads exponent literals without a dot (5e-9) as strings
        if isinstance(value, str):
            try:
                value = float(value)
            except ValueError:
                self.error('number', section=section, key=key, value=values[key])
                return None
        if not isinstance(value, (int, float)):
            self.error('number', section=section, key=key, value=value)
            return None
        if integer:
            if int(value) != value:
                self.error('integer', section=section, key=key, value=value)
                return None
            value = int(value)
        else:
            value = float(value)
        if positive and not value > 0:
            self.error('positive', section=section, key=key, value=value)
            return None
        return value

    def choice(self, section, values, key, choices, fallback):
        value = values.get(key, fallback)
        if value not in choices:
            self.error('choice', section=section, key=key, value=value, choices=', '.join(choices))
            return fallback
        return value

    def mass(self, values):
        value = values.get('mass')
        if isinstance(value, str) and value.lower() in MASS_ALIASES:
            return MASS_ALIASES[value.lower()]
        if value is None:
            return None
        try:
            mass = float(value) if not isinstance(value, bool) else None
        except (TypeError, ValueError):
            mass = None
        if mass is None or not mass > 0:
            self.error('mass', value=value, choices=', '.join(sorted(MASS_ALIASES)))
            return None
        return mass

    def build(self):
        if not isinstance(self.document, dict):
            raise ValidationError(self.error_messages['document'], 'document',
                                  {'type': type(self.document).__name__})
        for name in self.document:
            if name not in SECTIONS:
                self.error('section', section=name)

        beam_values = self.section('beam')
        grating_values = self.section('grating')
        grid_values = self.section('grid')
        integrator_values = self.section('integrator')
        render_values = self.section('render')
        farfield_values = self.section('farfield')
        defaults = self.section('defaults')

        mass = self.mass(beam_values)
        wavelength = self.number('beam', beam_values, 'wavelength')
        n_slits = self.number('grating', grating_values, 'n_slits', integer=True)
        d = self.number('grating', grating_values, 'd')
        sigma = self.number('grating', grating_values, 'sigma')

        grid = {key: self.number('grid', grid_values, key, integer=key in ('nx', 'nz'),
                                 positive=key in ('nx', 'nz', 'z_min', 'z_max'))
                for key in self.known_keys['grid']}
        integrator = {key: self.number('integrator', integrator_values, key, integer=key == 'max_steps')
                      for key in self.known_keys['integrator']}
        render = {
            'palette': self.choice('render', render_values, 'palette', PALETTE_CHOICES,
                                   settings.NSLIT['palette']),
            'normalization': self.choice('render', render_values, 'normalization', NORMALIZATION_CHOICES,
                                         settings.NSLIT['normalization']),
            'gamma': self.number('render', render_values, 'gamma'),
            'width': self.number('render', render_values, 'width', integer=True),
            'height': self.number('render', render_values, 'height', integer=True),
        }
        overlay = render_values.get('trajectory_overlay', True)
        if not isinstance(overlay, bool):
            self.error('boolean', section='render', key='trajectory_overlay', value=overlay)
        sources = self.choice('farfield', farfield_values, 'sources', SOURCES_CHOICES,
                              settings.NSLIT['farfield_sources'])
        form = self.choice('farfield', farfield_values, 'form', FORM_CHOICES, settings.NSLIT['farfield_form'])

        if self.errors:
            raise ValidationError(self.errors)

        beam = grating = None
        try:
            beam = beam_from_wavelength(mass, wavelength)
        except DomainError as e:
            self.error('invalid', section='beam', message=e)
        try:
            grating = GratingConfig(n_slits=n_slits, period=d, sigma=sigma)
        except DomainError as e:
            self.error('invalid', section='grating', message=e)
        if self.errors:
            raise ValidationError(self.errors)
        ctx = EvalContext(beam=beam, grating=grating)

        built = {}
        for name, factory in (('grid', lambda: self.grid(ctx, grid)),
                              ('integrator', lambda: self.integrator(ctx, integrator)),
                              ('render', lambda: RenderOptions(trajectory_overlay=bool(overlay), **{
                                  key: value if value is not None else settings.NSLIT.get(key)
                                  for key, value in render.items()})),
                              ('farfield', lambda: FarFieldParams.for_grating(beam, grating, sources, form))):
            try:
                built[name] = factory()
            except DomainError as e:
                self.error('invalid', section=name, message=e)
        if self.errors:
            raise ValidationError(self.errors)

        config = RunConfig(beam=beam, grating=grating, defaults=dict(defaults), source=self.source, **built)
        logger.debug('loaded configuration {}: {} slits, d={:.3e} m, sigma={:.3e} m, z_T={:.6e} m'.format(
            self.source, grating.n_slits, grating.period, grating.sigma, ctx.talbot_length))
        return config

    @staticmethod
    def grid(ctx, values):
        nx = values['nx'] or settings.NSLIT['grid_points']
        nz = values['nz'] or settings.NSLIT['grid_points']
        fallback = default_grid(ctx, nx, nz, margin_periods=settings.NSLIT['grid_margin_periods'],
                                z_min_fraction=settings.NSLIT['z_min_fraction'])
        return GridSpec(
            x_min=fallback.x_min if values['x_min'] is None else values['x_min'],
            x_max=fallback.x_max if values['x_max'] is None else values['x_max'],
            nx=nx,
            z_min=fallback.z_min if values['z_min'] is None else values['z_min'],
            z_max=fallback.z_max if values['z_max'] is None else values['z_max'],
            nz=nz,
        )

    @staticmethod
    def integrator(ctx, values):
        return IntegratorConfig.for_context(ctx, **{
            key: settings.NSLIT[key] if value is None else value for key, value in values.items()})


def parse_config(document, source='<string>'):
    return ConfigHandler(document, source).build()


def load_config(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            document = yaml.safe_load(f)
    except OSError as e:
        raise ValidationError("Configuration %(path)s can not be read: %(reason)s", 'unreadable',
                              {'path': path, 'reason': e.strerror or str(e)})
    except yaml.YAMLError as e:
        raise ValidationError("Configuration %(path)s is not valid YAML: %(reason)s", 'yaml',
                              {'path': path, 'reason': e})
    return parse_config(document, source=path)


def recipe_path(name):
    return os.path.join(settings.NSLIT['recipe_dir'], '{}.yaml'.format(name))


def available_recipes():
    try:
        names = os.listdir(settings.NSLIT['recipe_dir'])
    except OSError:
        return []
    return sorted(os.path.splitext(name)[0] for name in names if name.endswith('.yaml'))


def load_recipe(name):
    if name not in available_recipes():
        raise ValidationError("Unknown recipe %(name)s, available: %(recipes)s", 'recipe',
                              {'name': name, 'recipes': ', '.join(available_recipes())})
    return load_config(recipe_path(name))

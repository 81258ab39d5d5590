#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Shared base of the simulation management commands.

Every command reads one run configuration (``--config PATH`` or
``--recipe NAME``) and resolves each flag as: command line, then the
``defaults`` section of the configuration, then the built-in fallback.
"""

import logging
import os
import re

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from nslit.config import load_config, load_recipe
from nslit.exceptions import ArtifactError, DomainError, NodeError

logger = logging.getLogger('commands')

# argparse reports bad flags with 2
EXIT_CONFIG = 5
EXIT_NUMERIC = 3
EXIT_IO = 4

GRID_PATTERN = re.compile(r'^\s*(\d+)\s*[xX]\s*(\d+)\s*$')


def parse_grid(value):
    """'NXxNZ' to (nx, nz)."""
    match = GRID_PATTERN.match(str(value))
    if not match:
        raise DomainError('grid must look like NXxNZ, e.g. 1024x1024, got {!r}'.format(value))
    return int(match.group(1)), int(match.group(2))


class SimulationCommand(BaseCommand):
    default_output = None

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--config', dest='config', help='Path of a YAML run configuration.')
        source.add_argument('--recipe', dest='recipe', help='Name of a packaged figure recipe, e.g. fig10.')
        parser.add_argument('--threads', type=int, dest='threads', default=None,
                            help='Worker threads, the output does not depend on it.')
        if self.default_output is not None:
            parser.add_argument('--out', dest='out', default=None, help='Output path.')
        self.add_simulation_arguments(parser)

    def add_simulation_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            if options.get('recipe'):
                self.config = load_recipe(options['recipe'])
            else:
                self.config = load_config(options['config'])
            self.options = options
            self.simulate(self.config, options)
        except ValidationError as e:
            logger.error('configuration rejected: {}'.format('; '.join(e.messages)))
            raise CommandError('Invalid configuration: {}'.format('; '.join(e.messages)), returncode=EXIT_CONFIG)
        except DomainError as e:
            logger.error(str(e))
            raise CommandError(str(e), returncode=EXIT_CONFIG)
        except NodeError as e:
            logger.error(str(e))
            raise CommandError(str(e), returncode=EXIT_NUMERIC)
        except ArtifactError as e:
            logger.error(str(e))
            raise CommandError('Could not write {}: {}'.format(e.path, e.reason), returncode=EXIT_IO)

    def simulate(self, config, options):
        raise NotImplementedError('subclasses of SimulationCommand must provide a simulate() method')

    def option(self, name, fallback=None):
        value = self.options.get(name)
        if value is None:
            value = self.config.defaults.get(name)
        if value is None:
            value = fallback
        return value

    def float_option(self, name, fallback=None):
        value = self.option(name, fallback)
        if value is None:
            return None
        try:
            return float(value)
        except (TypeError, ValueError):
            raise DomainError('{} must be a number, got {!r}'.format(name, value))

    def int_option(self, name, fallback=None):
        value = self.float_option(name, fallback)
        if value is None:
            return None
        if int(value) != value:
            raise DomainError('{} must be an integer, got {!r}'.format(name, value))
        return int(value)

    @property
    def threads(self):
        threads = self.options.get('threads')
        if threads is None:
            threads = settings.NSLIT['threads']
        if threads < 1:
            raise DomainError('threads must be at least 1, got {}'.format(threads))
        return threads

    def output_path(self, name='out', default=None):
        path = self.options.get(name)
        if path:
            return path
        return os.path.join(settings.NSLIT['output_dir'], default or self.default_output)

    def success(self, message):
        self.stdout.write(self.style.SUCCESS(message))

    def warn(self, message):
        logger.warning(message)
        self.stdout.write(self.style.WARNING(message))

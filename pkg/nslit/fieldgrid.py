#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Density and velocity fields on rectangular (x, z) grids, cross-sections and
Talbot revival diagnostics.

Grids are sampled column by column (one z per work item); every sample is a
point evaluation of the wave function, so the result does not depend on the
thread count and a refined grid reproduces the samples of a coarser one.
"""

import logging
import timeit
from dataclasses import dataclass

import numpy as np
from scipy.stats import pearsonr

from nslit.bohm import NAN, guidance_velocity
from nslit.constants import Z_MIN_FRACTION
from nslit.exceptions import DomainError
from nslit.qcore import density
from nslit.utils.workers import map_ordered

logger = logging.getLogger('fieldgrid')

FIXED_X = 'fixed-x'
FIXED_Z = 'fixed-z'
AXIS_CHOICES = (FIXED_X, FIXED_Z)


def _axis(start, stop, n):
    if int(n) != n or n < 2:
        raise DomainError('need at least 2 samples, got {!r}'.format(n))
    n = int(n)
    # i / (n - 1) is exact for every refinement 2n - 1, so refined grids share the old positions bit for bit
    values = start + (stop - start) * (np.arange(n) / (n - 1))
    values[-1] = stop
    return values


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    nx: int
    z_min: float
    z_max: float
    nz: int

    def __post_init__(self):
        problems = []
        if not self.x_min < self.x_max:
            problems.append('x_min < x_max')
        if not 0 < self.z_min < self.z_max:
            problems.append('0 < z_min < z_max')
        if int(self.nx) != self.nx or self.nx < 2:
            problems.append('nx >= 2')
        if int(self.nz) != self.nz or self.nz < 2:
            problems.append('nz >= 2')
        if problems:
            raise DomainError('invalid grid, need {}'.format(', '.join(problems)))

    def x_values(self):
        return _axis(self.x_min, self.x_max, int(self.nx))

    def z_values(self):
        return _axis(self.z_min, self.z_max, int(self.nz))

    def with_resolution(self, nx, nz):
        return GridSpec(self.x_min, self.x_max, nx, self.z_min, self.z_max, nz)

    def contains(self, axis, coordinate):
        if axis == FIXED_X:
            return self.x_min <= coordinate <= self.x_max
        return self.z_min <= coordinate <= self.z_max


def default_grid(ctx, nx=1024, nz=1024, margin_periods=2, z_min_fraction=Z_MIN_FRACTION):
    """x over the slits plus a margin of periods on each side, z from z_T/1000 to z_T."""
    half_width = (ctx.grating.n_slits / 2 + margin_periods) * ctx.grating.period
    z_t = ctx.talbot_length
    return GridSpec(-half_width, half_width, nx, z_t * z_min_fraction, z_t, nz)


@dataclass(frozen=True, eq=False)
class DensityField:
    """Density samples, ``values[i, j]`` at (x_i, z_j)."""

    spec: GridSpec
    values: np.ndarray
    global_max: float
    column_max: np.ndarray

    @classmethod
    def from_values(cls, spec, values):
        column_max = values.max(axis=0)
        return cls(spec=spec, values=values, global_max=float(column_max.max()), column_max=column_max)


@dataclass(frozen=True, eq=False)
class VelocityField:
    """Guidance velocities v_x, NaN at wave-function nodes."""

    spec: GridSpec
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class CrossSection:
    axis: str
    coordinate: float
    positions: np.ndarray
    values: np.ndarray

    @property
    def samples(self):
        return list(zip(self.positions.tolist(), self.values.tolist()))


@dataclass(frozen=True)
class RevivalMetrics:
    full_revival_corr: float
    half_revival_shift_corr: float
    z_ref: float
    window_half_width: float


def _sample_columns(func, spec, threads):
    xs = spec.x_values()
    start = timeit.default_timer()
    columns = map_ordered(lambda z: func(xs, z), spec.z_values(), threads)
    values = np.stack(columns, axis=1)
    logger.info('sampled {}x{} grid in {:.3f}s with {} threads'.format(
        spec.nx, spec.nz, timeit.default_timer() - start, threads))
    return values


def sample_density(ctx, spec, threads=1):
    values = _sample_columns(lambda xs, z: density(xs, z, ctx), spec, threads)
    return DensityField.from_values(spec, values)


def sample_velocity(ctx, spec, threads=1):
    values = _sample_columns(lambda xs, z: guidance_velocity(xs, z, ctx, on_node=NAN), spec, threads)
    return VelocityField(spec=spec, values=values)


def cross_section(ctx, domain, axis, coordinate, n_samples=None):
    """Density along a line of constant x or z, re-evaluated rather than interpolated.

    ``domain`` is a GridSpec or a DensityField whose grid bounds the line; the
    line spans the other axis of the domain with ``n_samples`` points (default:
    the grid resolution along that axis).
    """
    spec = getattr(domain, 'spec', domain)
    if axis not in AXIS_CHOICES:
        raise DomainError('axis must be one of {}, got {!r}'.format(AXIS_CHOICES, axis))
    if not spec.contains(axis, coordinate):
        raise DomainError('{} coordinate {!r} outside the domain {}'.format(axis, coordinate, spec))

    if axis == FIXED_X:
        positions = _axis(spec.z_min, spec.z_max, spec.nz if n_samples is None else n_samples)
        values = density(coordinate, positions, ctx)
    else:
        positions = _axis(spec.x_min, spec.x_max, spec.nx if n_samples is None else n_samples)
        values = density(positions, coordinate, ctx)
    return CrossSection(axis=axis, coordinate=float(coordinate), positions=positions, values=np.asarray(values))


def revival_metrics(ctx, window_half_width, n_samples=1001):
    """Pearson correlations of the central window at z_ref with its revival at z_ref + z_T and with
    its half-period shifted image at z_ref + z_T/2, z_ref = z_T/50."""
    grating = ctx.grating
    d = grating.period
    if grating.n_slits < 16:
        raise DomainError('revival metrics need at least 16 slits, got {}'.format(grating.n_slits))
    if 2 * window_half_width < 4 * d:
        raise DomainError('window must cover at least 4 periods')
    if window_half_width + d / 2 > grating.extent:
        raise DomainError('window half-width {!r} m exceeds the grating extent {!r} m'.format(
            window_half_width, grating.extent))

    z_t = ctx.talbot_length
    z_ref = z_t / 50
    xs = _axis(-window_half_width, window_half_width, n_samples)
    reference = density(xs, z_ref, ctx)
    full = density(xs, z_ref + z_t, ctx)
    half = density(xs + d / 2, z_ref + z_t / 2, ctx)

    metrics = RevivalMetrics(full_revival_corr=float(pearsonr(reference, full)[0]),
                             half_revival_shift_corr=float(pearsonr(reference, half)[0]),
                             z_ref=z_ref, window_half_width=window_half_width)
    logger.info('revival over +-{:.3e} m: full {:.4f}, half-shifted {:.4f}'.format(
        window_half_width, metrics.full_revival_corr, metrics.half_revival_shift_corr))
    return metrics


def talbot_section(ctx, fraction, half_width_periods=2, n_samples=801):
    """Central-window density at z = fraction * z_T on a grid fixed in units of the period."""
    if not fraction > 0:
        raise DomainError('fraction must be positive')
    d = ctx.grating.period
    positions = _axis(-half_width_periods * d, half_width_periods * d, n_samples)
    z = fraction * ctx.talbot_length
    return CrossSection(axis=FIXED_Z, coordinate=z, positions=positions,
                        values=np.asarray(density(positions, z, ctx)))

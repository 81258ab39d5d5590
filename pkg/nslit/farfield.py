#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Analytic far-field diffraction intensity of an N-slit grating.

The intensity is the single-packet envelope I0 times the N-source ratio
sin^2(N zeta/2) / sin^2(zeta/2). zeta and I0 are expressed through the flight
time t = z / v_z and the denominator D(z) = m^2 sigma^4 + hbar^2 t^2 / 4.

Two forms of zeta and I0 are available:

* ``printed`` evaluates zeta = x d m hbar t / D and
  I0 = sqrt(1/pi) m sigma / sqrt(D) exp(-2 m^2 sigma^2 x^2 / D) literally.
* ``matched`` (default) evaluates zeta = x d m hbar t / (4 D) and
  I0 = m sigma / sqrt(2 pi D) exp(-m^2 sigma^2 x^2 / (2 D)). These follow from
  the dispersing packets of ``nslit.qcore``: zeta is then the phase step
  between neighbouring packets and I0 is the normalised single-packet density.
  The printed form differs from it by a factor 4 in zeta and in the width and
  normalisation of I0.
"""

import logging
from dataclasses import dataclass

import numpy as np

from nslit.constants import HBAR
from nslit.exceptions import DomainError
from nslit.qcore import BeamParams, GratingConfig, density

logger = logging.getLogger('farfield')

PRINTED = 'printed'
MATCHED = 'matched'
FORM_CHOICES = (PRINTED, MATCHED)

SLIT_COUNT = 'slit-count'
PAPER_N = 'paper-n'
SOURCES_CHOICES = (SLIT_COUNT, PAPER_N)

# below this |sin(u)| the ratio is taken from its Taylor expansion around the principal maximum
SINGULARITY_GUARD = 1e-8


@dataclass(frozen=True)
class FarFieldParams:
    beam: BeamParams
    grating: GratingConfig
    n_for_formula: int
    form: str = MATCHED

    def __post_init__(self):
        if int(self.n_for_formula) != self.n_for_formula or self.n_for_formula < 1:
            raise DomainError('n_for_formula must be a positive integer, got {!r}'.format(self.n_for_formula))
        if self.form not in FORM_CHOICES:
            raise DomainError('form must be one of {}, got {!r}'.format(FORM_CHOICES, self.form))

    @classmethod
    def for_grating(cls, beam, grating, sources=SLIT_COUNT, form=MATCHED):
        """N of the intensity formula is the slit count, or n_slits - 1 with ``paper-n``."""
        if sources not in SOURCES_CHOICES:
            raise DomainError('sources must be one of {}, got {!r}'.format(SOURCES_CHOICES, sources))
        n = grating.n_slits if sources == SLIT_COUNT else grating.n_slits - 1
        return cls(beam=beam, grating=grating, n_for_formula=n, form=form)


def _flight_time(z, p):
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError('z must be >= 0, got min {!r}'.format(float(np.min(z))))
    return z / p.beam.v_z


def d_of_z(z, p):
    t = _flight_time(z, p)
    m = p.beam.mass
    sigma = p.grating.sigma
    return (m ** 2 * sigma ** 4 + HBAR ** 2 * t ** 2 / 4)[()]


def zeta(x, z, p):
    """Phase difference between neighbouring sources seen from (x, z). Only defined for z > 0."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError('zeta is a far-field quantity, z must be > 0')
    t = _flight_time(z, p)
    value = np.asarray(x, dtype=float) * p.grating.period * p.beam.mass * HBAR * t / d_of_z(z, p)
    if p.form == MATCHED:
        value = value / 4
    return value[()]


def envelope_i0(x, z, p):
    D = d_of_z(z, p)
    m = p.beam.mass
    sigma = p.grating.sigma
    x = np.asarray(x, dtype=float)
    if p.form == PRINTED:
        value = np.sqrt(1 / np.pi) * m * sigma / np.sqrt(D) * np.exp(-2 * m ** 2 * sigma ** 2 * x ** 2 / D)
    else:
        value = m * sigma / np.sqrt(2 * np.pi * D) * np.exp(-m ** 2 * sigma ** 2 * x ** 2 / (2 * D))
    return value[()]


def dirichlet_ratio(zeta_values, n):
    """sin^2(n zeta/2) / sin^2(zeta/2), continuous through the principal maxima where it equals n^2."""
    u = np.asarray(zeta_values, dtype=float) / 2
    # sin^2 has period pi, reduce to [-pi/2, pi/2] around the nearest principal maximum
    r = u - np.rint(u / np.pi) * np.pi
    s = np.sin(r)
    near = np.abs(s) < SINGULARITY_GUARD
    safe = np.where(near, 1.0, s)
    ratio = np.where(near,
                     n ** 2 * (1 - (n ** 2 - 1) * r ** 2 / 3),
                     np.sin(n * r) ** 2 / safe ** 2)
    return ratio[()]


def farfield_intensity(x, z, p):
    z = np.asarray(z, dtype=float)
    return (envelope_i0(x, z, p) * dirichlet_ratio(zeta(x, z, p), p.n_for_formula))[()]


def principal_maxima(z, p, count=5):
    """x positions of the ``count`` principal maxima closest to the axis (zeta = 2 pi j)."""
    slope = zeta(1.0, z, p)
    orders = np.arange(count) - (count - 1) // 2
    return 2 * np.pi * orders / slope


@dataclass(frozen=True)
class FarFieldComparison:
    x: np.ndarray
    simulated: np.ndarray
    analytic: np.ndarray

    @property
    def max_deviation(self):
        return float(np.max(np.abs(self.simulated - self.analytic)))


def compare_with_simulation(ctx, p, z, xs):
    """Peak-normalised simulated density next to the peak-normalised analytic intensity along z."""
    xs = np.asarray(xs, dtype=float)
    simulated = np.asarray(density(xs, z, ctx))
    analytic = np.asarray(farfield_intensity(xs, z, p))
    simulated = simulated / simulated.max()
    analytic = analytic / analytic.max()
    comparison = FarFieldComparison(x=xs, simulated=simulated, analytic=analytic)
    logger.info('far field at z={:.6e} m, {} samples, N={} ({}): max deviation {:.3e}'.format(
        z, xs.size, p.n_for_formula, p.form, comparison.max_deviation))
    return comparison

#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Wave function of an N-slit grating.

Each slit emits a Gaussian wavepacket that disperses with the complex spreading
sigma_t while it is carried along z with the beam velocity v_z, so that time only
enters through t = z / v_z. The grating wave function is the normalised sum of
all packets, its squared modulus is the probability density.

Complex values are plain Python/numpy complex numbers. Every function accepts
scalars or numpy arrays and broadcasts; scalars in give numpy scalars out.

Two wave-number conventions meet here and are never mixed in one expression:
the spectrum (``packet_spectrum``) uses k in cycles per metre, the carrier
factor uses k_z = 2 pi / lambda in rad per metre.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from nslit.constants import BOLTZMANN, HBAR, PLANCK
from nslit.exceptions import DomainError

logger = logging.getLogger('qcore')

# complex numbers carry wave-function values (m^-1/2) and sigma_t (m)
ComplexAmplitude = complex


def _require_positive(**values):
    problems = ['{}={!r}'.format(name, value) for name, value in values.items() if not value > 0]
    if problems:
        raise DomainError('must be positive: {}'.format(', '.join(problems)))


@dataclass(frozen=True)
class BeamParams:
    """Particle mass and de Broglie wavelength with the derived kinematics."""

    mass: float
    wavelength: float

    def __post_init__(self):
        _require_positive(mass=self.mass, wavelength=self.wavelength)
        try:
            finite = math.isfinite(self.energy) and math.isfinite(self.v_z)
        except ZeroDivisionError:
            finite = False
        if not finite:
            raise DomainError('mass={!r} kg and wavelength={!r} m give non-finite kinematics'.format(
                self.mass, self.wavelength))

    @property
    def k_z(self):
        return 2 * math.pi / self.wavelength

    @property
    def v_z(self):
        return HBAR * self.k_z / self.mass

    @property
    def energy(self):
        return PLANCK ** 2 / (2 * self.mass * self.wavelength ** 2)

    @property
    def omega(self):
        return self.energy / HBAR

    @property
    def temperature(self):
        return self.energy / BOLTZMANN


@dataclass(frozen=True)
class GratingConfig:
    """Slit count, period and packet width; slits are centred around x = 0.

    ``n_slits`` counts all slits, i.e. N + 1 in the notation where the slits
    are numbered n = 0..N and x_n = (n - N/2) d.
    """

    n_slits: int
    period: float
    sigma: float
    slit_centers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.n_slits, bool) or int(self.n_slits) != self.n_slits or self.n_slits < 1:
            raise DomainError('n_slits must be a positive integer, got {!r}'.format(self.n_slits))
        _require_positive(period=self.period, sigma=self.sigma)
        object.__setattr__(self, 'n_slits', int(self.n_slits))

        # half-integer offsets are exact, so the centres are exactly antisymmetric
        centers = (np.arange(self.n_slits) - (self.n_slits - 1) / 2) * self.period
        centers.flags.writeable = False
        object.__setattr__(self, 'slit_centers', centers)

    @property
    def extent(self):
        """Half-width of the slit array."""
        return self.n_slits * self.period / 2

    @property
    def central_midpoint(self):
        """x of the midpoint between the two central slits."""
        if self.n_slits % 2 == 0:
            return 0.0
        return self.period / 2


@dataclass(frozen=True)
class EvalContext:
    """Beam and grating bundled for evaluation. Read-only, safe to share between workers."""

    beam: BeamParams
    grating: GratingConfig

    @property
    def talbot_length(self):
        return talbot_length(self.grating.period, self.beam.wavelength)

    def time_at(self, z):
        z = np.asarray(z, dtype=float)
        if np.any(z < 0):
            raise DomainError('z must be >= 0, got min {!r}'.format(float(np.min(z))))
        return z / self.beam.v_z

    def sigma_t(self, z):
        return sigma_t(self.grating.sigma, self.time_at(z), self.beam)


def talbot_length(d, wavelength):
    """Distance 2 d^2 / lambda after which a periodic grating images itself."""
    _require_positive(d=d, wavelength=wavelength)
    return 2 * d ** 2 / wavelength


def beam_from_wavelength(mass, wavelength):
    beam = BeamParams(mass=mass, wavelength=wavelength)
    logger.debug('beam m={:.6e} kg lambda={:.6e} m: E={:.6e} J, T={:.4f} K, v_z={:.4f} m/s'.format(
        mass, wavelength, beam.energy, beam.temperature, beam.v_z))
    return beam


def sigma_t(sigma, t, beam):
    """Complex spreading sigma (1 + i hbar t / (2 m sigma^2)) of a dispersing packet."""
    _require_positive(sigma=sigma)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError('t must be >= 0, got min {!r}'.format(float(np.min(t))))
    result = sigma * (1 + 1j * (HBAR / (2 * beam.mass)) * t / sigma ** 2)
    return result[()]


def _envelope(dx, st, sigma):
    # principal branch of (2 / (4 pi st^2))^(1/4); st stays in the right half-plane for t >= 0
    prefactor = np.exp(0.25 * np.log(2 / (4 * np.pi * st ** 2)))
    return prefactor * np.exp(-dx ** 2 / (4 * sigma * st))


def _carrier(z, t, beam):
    return np.exp(1j * (beam.omega * t - beam.k_z * z))


def dispersed_packet(x, x0, t, sigma, beam):
    """Gaussian packet of width sigma centred at x0 after dispersing for time t, without the z carrier."""
    st = np.asarray(sigma_t(sigma, t, beam))
    dx = np.asarray(x, dtype=float) - x0
    return _envelope(dx, st, sigma)[()]


def packet_psi(x, x0, z, ctx):
    """Wave function at (x, z) of the packet emitted by the slit centred at x0."""
    t = ctx.time_at(z)
    st = np.asarray(sigma_t(ctx.grating.sigma, t, ctx.beam))
    dx = np.asarray(x, dtype=float) - x0
    return (_envelope(dx, st, ctx.grating.sigma) * _carrier(np.asarray(z, dtype=float), t, ctx.beam))[()]


def packet_spectrum(k, x0, sigma):
    """Fourier spectrum of the initial packet, k in cycles per metre."""
    _require_positive(sigma=sigma)
    k = np.asarray(k, dtype=float)
    amplitude = (8 * np.pi * sigma ** 2) ** 0.25 * np.exp(-4 * np.pi ** 2 * sigma ** 2 * k ** 2)
    return (amplitude * np.exp(-2j * np.pi * k * x0))[()]


def _terms(x, z, ctx):
    """Per-slit packet values along a trailing slit axis, plus the pieces the derivative needs."""
    x, z = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    t = ctx.time_at(z)
    sigma = ctx.grating.sigma
    st = np.asarray(sigma_t(sigma, t, ctx.beam))[..., np.newaxis]
    dx = x[..., np.newaxis] - ctx.grating.slit_centers
    return _envelope(dx, st, sigma), dx, st, _carrier(z, t, ctx.beam)


def superposed_psi(x, z, ctx):
    """Grating wave function: the packets of all slits summed and divided by the slit count.

    An axis over the slits is materialised, so callers evaluating very large
    arrays should chunk them (fieldgrid works column by column).
    """
    terms, _, _, carrier = _terms(x, z, ctx)
    return (terms.sum(axis=-1) / ctx.grating.n_slits * carrier)[()]


def psi_and_gradient(x, z, ctx):
    """Grating wave function and its x derivative, d psi_n/dx = -(x - x_n) / (2 sigma sigma_t) psi_n."""
    terms, dx, st, carrier = _terms(x, z, ctx)
    scale = carrier / ctx.grating.n_slits
    psi = terms.sum(axis=-1) * scale
    gradient = (-dx / (2 * ctx.grating.sigma * st) * terms).sum(axis=-1) * scale
    return psi[()], gradient[()]


def density(x, z, ctx):
    """Probability density |psi|^2 of the grating wave function."""
    psi = np.asarray(superposed_psi(x, z, ctx))
    return (psi.real ** 2 + psi.imag ** 2)[()]

#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Bohmian trajectories behind the grating.

The guidance equation gives v_x = (hbar/m) Im(psi^-1 d psi/dx). Particles move
along z with the constant beam velocity v_z, so paths are integrated in z with
dx/dz = v_x / v_z. The stepper is the Dormand-Prince 4(5) pair of scipy
(``scipy.integrate.RK45``), driven step by step so that step underflow near
nodes and the step budget can be reported on the trajectory.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import RK45, cumulative_trapezoid
from scipy.stats import kstest, norm

from nslit.constants import HBAR, Z_MIN_FRACTION
from nslit.exceptions import DomainError, NodeError
from nslit.qcore import density
from nslit.utils.workers import map_ordered

logger = logging.getLogger('bohm')

COMPLETE = 'COMPLETE'
UNDERFLOW = 'UNDERFLOW'
MAX_STEPS = 'MAX_STEPS'
NODE = 'NODE'
STATUS_CHOICES = (
    (COMPLETE, 'Reached z_end'),
    (UNDERFLOW, 'Step size fell below dz_min'),
    (MAX_STEPS, 'Step budget exhausted'),
    (NODE, 'Hit a wave-function node'),
)

# |sum of packet envelopes| below this counts as a node, the envelopes peak at 1
NODE_THRESHOLD = 1e-300

RAISE = 'raise'
NAN = 'nan'


@dataclass(frozen=True)
class IntegratorConfig:
    dz_initial: float
    dz_min: float
    rel_tol: float
    v_cap: float
    max_steps: int

    def __post_init__(self):
        problems = []
        if not 0 < self.dz_min <= self.dz_initial:
            problems.append('need 0 < dz_min <= dz_initial')
        if not self.rel_tol > 0:
            problems.append('rel_tol must be positive')
        if not self.v_cap > 0:
            problems.append('v_cap must be positive')
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            problems.append('max_steps must be a positive integer')
        if problems:
            raise DomainError('invalid integrator config: {}'.format('; '.join(problems)))

    @classmethod
    def for_context(cls, ctx, rel_tol=1e-8, dz_initial_fraction=1 / 2000, dz_min_fraction=1e-7,
                    v_cap_factor=100.0, max_steps=200000):
        """Step sizes scale with the Talbot length, the velocity cap with d / z_T * v_z."""
        z_t = ctx.talbot_length
        return cls(dz_initial=z_t * dz_initial_fraction,
                   dz_min=z_t * dz_min_fraction,
                   rel_tol=rel_tol,
                   v_cap=v_cap_factor * ctx.grating.period / z_t * ctx.beam.v_z,
                   max_steps=max_steps)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Points of one path, ordered by strictly increasing z."""

    x: np.ndarray
    z: np.ndarray
    t: np.ndarray
    seed_slit: int
    seed_offset: float
    status: str = COMPLETE
    clamp_events: int = 0

    @property
    def points(self):
        return list(zip(self.x.tolist(), self.z.tolist(), self.t.tolist()))

    @property
    def truncated(self):
        return self.status != COMPLETE

    def position_at(self, z):
        if not self.z[0] <= z <= self.z[-1]:
            raise DomainError('z={!r} outside trajectory span [{!r}, {!r}]'.format(z, self.z[0], self.z[-1]))
        return float(np.interp(z, self.z, self.x))


class Seed(NamedTuple):
    x0: float
    z0: float
    slit: int
    offset: float


def _log_derivative(dx, st, sigma):
    """Sum of packet envelopes and of their x derivatives; prefactor and carrier are common and cancel."""
    terms = np.exp(-dx ** 2 / (4 * sigma * st))
    total = terms.sum(axis=-1)
    gradient = (-dx / (2 * sigma * st) * terms).sum(axis=-1)
    return total, gradient


def guidance_velocity(x, z, ctx, on_node=RAISE):
    """v_x at (x, z). Nodes raise NodeError, or give NaN with ``on_node='nan'``."""
    x, z = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(z, dtype=float))
    st = np.asarray(ctx.sigma_t(z))[..., np.newaxis]
    dx = x[..., np.newaxis] - ctx.grating.slit_centers
    total, gradient = _log_derivative(dx, st, ctx.grating.sigma)

    nodes = np.abs(total) < NODE_THRESHOLD
    if np.any(nodes) and on_node == RAISE:
        index = np.argwhere(nodes)[0]
        index = tuple(index) if nodes.ndim else ()
        raise NodeError(float(x[index]), float(z[index]), float(np.abs(total[index])))

    safe = np.where(nodes, 1.0, total)
    velocity = HBAR / ctx.beam.mass * np.imag(gradient / safe)
    return np.where(nodes, np.nan, velocity)[()]


def _slope_function(ctx, cfg, clamps):
    """dx/dz for the stepper, with the velocity clamped at cfg.v_cap and clamp events counted."""
    centers = ctx.grating.slit_centers
    sigma = ctx.grating.sigma
    v_z = ctx.beam.v_z
    coefficient = HBAR / ctx.beam.mass
    # sigma_t = sigma (1 + i spread z) with t = z / v_z
    spread = HBAR / (2 * ctx.beam.mass) / sigma ** 2 / v_z

    def slope(z, y):
        st = sigma * complex(1.0, spread * z)
        total, gradient = _log_derivative(y[0] - centers, st, sigma)
        if abs(total) < NODE_THRESHOLD:
            raise NodeError(float(y[0]), float(z), abs(total))
        velocity = coefficient * (gradient / total).imag
        if abs(velocity) > cfg.v_cap:
            clamps[0] += 1
            velocity = np.copysign(cfg.v_cap, velocity)
        return np.array([velocity / v_z])

    return slope


def integrate_trajectory(x0, z0, z_end, ctx, cfg, z_eval=None, seed_slit=-1, seed_offset=None):
    """Integrate one path from (x0, z0) to z_end.

    Without ``z_eval`` every accepted step is recorded, otherwise the path is
    reported at the given detector planes (dense output of the stepper) plus
    its starting point. A path stopped early keeps the points reached so far
    and a status other than COMPLETE.
    """
    if not 0 <= z0 < z_end:
        raise DomainError('need 0 <= z0 < z_end, got z0={!r} z_end={!r}'.format(z0, z_end))
    if seed_offset is None:
        seed_offset = 0.0

    planes = deque()
    if z_eval is not None:
        planes.extend(float(z) for z in np.unique(np.asarray(z_eval, dtype=float)) if z0 < z <= z_end)

    clamps = [0]
    zs = [float(z0)]
    xs = [float(x0)]
    status = COMPLETE
    steps = 0
    try:
        # the stepper evaluates the slope at the seed already
        solver = RK45(_slope_function(ctx, cfg, clamps), z0, np.array([float(x0)]), z_end,
                      first_step=min(cfg.dz_initial, z_end - z0),
                      rtol=cfg.rel_tol, atol=cfg.rel_tol * ctx.grating.sigma)
        while solver.status == 'running':
            if steps >= cfg.max_steps:
                status = MAX_STEPS
                break

            solver.step()
            steps += 1
            if solver.status == 'failed':
                status = UNDERFLOW
                break

            if z_eval is None:
                zs.append(float(solver.t))
                xs.append(float(solver.y[0]))
            else:
                dense = solver.dense_output()
                while planes and planes[0] <= solver.t:
                    plane = planes.popleft()
                    zs.append(plane)
                    xs.append(float(dense(plane)[0]))

            if solver.status == 'running' and solver.step_size < cfg.dz_min:
                status = UNDERFLOW
                break
    except NodeError as e:
        logger.warning('trajectory from x0={:.6e} stopped: {}'.format(x0, e))
        status = NODE

    if status != COMPLETE:
        logger.warning('trajectory from x0={:.6e} m truncated at z={:.6e} m after {} steps ({})'.format(
            x0, zs[-1], steps, status))
    if clamps[0]:
        logger.info('trajectory from x0={:.6e} m: velocity clamped {} times'.format(x0, clamps[0]))

    z = np.array(zs)
    return Trajectory(x=np.array(xs), z=z, t=z / ctx.beam.v_z,
                      seed_slit=seed_slit, seed_offset=seed_offset,
                      status=status, clamp_events=clamps[0])


def seed_trajectories(ctx, per_slit, quantile_lo, quantile_hi, z0=None):
    """Seeds at equally spaced quantiles of every slit's initial Gaussian |phi0|^2.

    Without ``z0`` the seeds sit at z_T * Z_MIN_FRACTION, the z_min of the default grid.
    """
    if int(per_slit) != per_slit or per_slit < 1:
        raise DomainError('per_slit must be a positive integer, got {!r}'.format(per_slit))
    if not 0 < quantile_lo < quantile_hi < 1:
        raise DomainError('need 0 < quantile_lo < quantile_hi < 1')
    if z0 is None:
        z0 = ctx.talbot_length * Z_MIN_FRACTION

    if per_slit == 1:
        quantiles = np.array([(quantile_lo + quantile_hi) / 2])
    else:
        quantiles = np.linspace(quantile_lo, quantile_hi, int(per_slit))
    offsets = norm.ppf(quantiles) * ctx.grating.sigma

    seeds = []
    for slit, center in enumerate(ctx.grating.slit_centers):
        for offset in offsets:
            seeds.append(Seed(x0=float(center + offset), z0=float(z0), slit=slit, offset=float(offset)))
    return seeds


def integrate_many(seeds, z_end, ctx, cfg, threads=1, z_eval=None):
    def run(seed):
        return integrate_trajectory(seed.x0, seed.z0, z_end, ctx, cfg, z_eval=z_eval,
                                    seed_slit=seed.slit, seed_offset=seed.offset)

    trajectories = map_ordered(run, seeds, threads)
    truncated = sum(1 for trajectory in trajectories if trajectory.truncated)
    logger.info('integrated {} trajectories to z={:.6e} m, {} truncated'.format(len(trajectories), z_end, truncated))
    return trajectories


def equivariance_distance(trajectories, ctx, z, n_samples=4001):
    """Kolmogorov-Smirnov distance between trajectory positions at z and |psi(., z)|^2 on their span."""
    positions = np.array([trajectory.position_at(z) for trajectory in trajectories])
    grid = np.linspace(positions.min(), positions.max(), n_samples)
    cdf = cumulative_trapezoid(density(grid, z, ctx), grid, initial=0)
    cdf = cdf / cdf[-1]
    return kstest(positions, lambda v: np.interp(v, grid, cdf)).statistic


def node_avoidance_fraction(trajectories, ctx, x_min, x_max, n_samples=2048, threshold=1e-6):
    """Fraction of trajectory points where the density exceeds threshold times the column maximum.

    The column maximum at each z is taken over n_samples points in [x_min, x_max];
    trajectories reported on shared detector planes reuse it.
    """
    xs = np.linspace(x_min, x_max, n_samples)
    column_max = {}
    above = 0
    total = 0
    for trajectory in trajectories:
        values = np.asarray(density(trajectory.x, trajectory.z, ctx))
        for z, value in zip(trajectory.z.tolist(), values.tolist()):
            if z not in column_max:
                column_max[z] = float(np.max(density(xs, z, ctx)))
            total += 1
            if value > threshold * column_max[z]:
                above += 1
    return above / total

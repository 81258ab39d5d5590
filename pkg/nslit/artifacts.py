#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Rendering and export of simulation results.

Carpets become 8-bit grayscale images (binary PGM by default, PNG on request)
with x increasing upwards and z increasing to the right. Tables are CSV with
17 significant digits, LF line endings and SI units, so a file read back gives
the exact floats that were written.
"""

import io
import logging
import os
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from PIL import Image, ImageDraw

from nslit.bohm import Trajectory
from nslit.exceptions import ArtifactError, DomainError
from nslit.fieldgrid import FIXED_X, CrossSection, DensityField, VelocityField

logger = logging.getLogger('artifacts')

BLACK_MAX = 'black-max'
WHITE_MAX = 'white-max'
PALETTE_CHOICES = (BLACK_MAX, WHITE_MAX)

GLOBAL = 'global'
PER_COLUMN = 'per-column'
NORMALIZATION_CHOICES = (GLOBAL, PER_COLUMN)

PGM = 'PGM'
PNG = 'PNG'
FORMAT_CHOICES = (PGM, PNG)

# gray level kept free for trajectory polylines, counted from the zero-intensity end
OVERLAY_LEVEL = 254

NUMBER_FORMAT = '%.17g'


@dataclass(frozen=True)
class RenderOptions:
    palette: str = BLACK_MAX
    normalization: str = GLOBAL
    gamma: float = 0.5
    width: Optional[int] = None
    height: Optional[int] = None
    trajectory_overlay: bool = True

    def __post_init__(self):
        problems = []
        if self.palette not in PALETTE_CHOICES:
            problems.append('palette must be one of {}'.format(PALETTE_CHOICES))
        if self.normalization not in NORMALIZATION_CHOICES:
            problems.append('normalization must be one of {}'.format(NORMALIZATION_CHOICES))
        if not self.gamma > 0:
            problems.append('gamma must be positive')
        for name in ('width', 'height'):
            value = getattr(self, name)
            if value is not None and (int(value) != value or value < 1):
                problems.append('{} must be a positive integer'.format(name))
        if problems:
            raise DomainError('invalid render options: {}'.format('; '.join(problems)))


def intensity_levels(field, opts):
    """Levels 0..255 of the field, 0 at zero density and 255 at the normalising maximum."""
    values = field.values
    if opts.normalization == GLOBAL:
        norm = np.full(values.shape[1], field.global_max)
    else:
        norm = np.asarray(field.column_max, dtype=float)

    scaled = np.zeros(values.shape, dtype=float)
    nonzero = norm > 0
    scaled[:, nonzero] = values[:, nonzero] / norm[nonzero]
    levels = np.rint(255 * np.clip(scaled, 0.0, 1.0) ** opts.gamma)
    return levels.astype(np.uint8)


def _to_pixel(level, palette):
    return level if palette == WHITE_MAX else 255 - level


def _polyline(trajectory, spec, width, height):
    z_scale = (width - 1) / (spec.z_max - spec.z_min)
    x_scale = (height - 1) / (spec.x_max - spec.x_min)
    columns = (trajectory.z - spec.z_min) * z_scale
    rows = (spec.x_max - trajectory.x) * x_scale
    return list(zip(columns.tolist(), rows.tolist()))


def render_carpet(field, trajectories=None, opts=None, fmt=PGM):
    """Encode the density field as an 8-bit grayscale image and return its bytes."""
    if opts is None:
        opts = RenderOptions()
    if fmt not in FORMAT_CHOICES:
        raise DomainError('image format must be one of {}, got {!r}'.format(FORMAT_CHOICES, fmt))
    if field.values.size == 0:
        raise DomainError('cannot render an empty field')

    levels = intensity_levels(field, opts)
    overlay = bool(trajectories) and opts.trajectory_overlay
    if overlay:
        levels[levels == OVERLAY_LEVEL] = 255

    # rows run from x_max down to x_min
    pixels = _to_pixel(levels[::-1, :], opts.palette).astype(np.uint8)
    image = Image.fromarray(pixels)
    width = int(opts.width or image.width)
    height = int(opts.height or image.height)
    if (width, height) != image.size:
        image = image.resize((width, height), resample=Image.Resampling.NEAREST)

    if overlay:
        draw = ImageDraw.Draw(image)
        fill = _to_pixel(OVERLAY_LEVEL, opts.palette)
        for trajectory in trajectories:
            points = _polyline(trajectory, field.spec, width, height)
            if len(points) > 1:
                draw.line(points, fill=fill, width=1)

    buffer = io.BytesIO()
    image.save(buffer, format='PPM' if fmt == PGM else 'PNG')
    logger.debug('rendered {}x{} {} image ({}, {}, gamma {})'.format(
        width, height, fmt, opts.palette, opts.normalization, opts.gamma))
    return buffer.getvalue()


def image_format_for(path):
    return PNG if str(path).lower().endswith('.png') else PGM


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(parent, exist_ok=True)
    except OSError as e:
        raise ArtifactError(path, e.strerror or str(e))


def write_bytes(path, data):
    _ensure_parent(path)
    try:
        with open(path, 'wb') as f:
            f.write(data)
    except OSError as e:
        raise ArtifactError(path, e.strerror or str(e))
    logger.info('wrote {} bytes to {}'.format(len(data), path))


def write_columns(path, header, rows):
    """Write a 2-D float table below a header row of cells."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows.reshape(-1, len(header)) if rows.size else np.empty((0, len(header)))
    buffer = io.StringIO()
    np.savetxt(buffer, rows, fmt=NUMBER_FORMAT, delimiter=',', newline='\n',
               header=','.join(header), comments='')
    write_bytes(path, buffer.getvalue().encode('utf-8'))


def read_csv_columns(path):
    """Header cells and the float table below them."""
    try:
        with open(path, 'r', encoding='utf-8', newline='') as f:
            header = f.readline().rstrip('\n').split(',')
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', UserWarning)
                rows = np.loadtxt(f, delimiter=',', ndmin=2)
    except OSError as e:
        raise ArtifactError(path, e.strerror or str(e))
    if rows.size == 0:
        rows = np.empty((0, len(header)))
    return header, rows


def _grid_table(field):
    x = field.spec.x_values()
    header = ['x\\z'] + [NUMBER_FORMAT % z for z in field.spec.z_values()]
    return header, np.column_stack([x, field.values])


def export_csv(obj, path):
    """Write a field, cross-section or trajectory as CSV.

    Fields have a header row of z values and a first column of x values,
    cross-sections the columns (position, density) and trajectories (z, x, t).
    """
    if isinstance(obj, (DensityField, VelocityField)):
        header, rows = _grid_table(obj)
    elif isinstance(obj, CrossSection):
        header = ['z' if obj.axis == FIXED_X else 'x', 'density']
        rows = np.column_stack([obj.positions, obj.values])
    elif isinstance(obj, Trajectory):
        header = ['z', 'x', 't']
        rows = np.column_stack([obj.z, obj.x, obj.t]) if obj.z.size else np.empty((0, 3))
    else:
        raise TypeError('cannot export {} as CSV'.format(type(obj).__name__))
    write_columns(path, header, rows)


def export_trajectories(trajectories, directory):
    """One CSV per trajectory, named by seed slit and batch index."""
    paths = []
    for index, trajectory in enumerate(trajectories):
        path = os.path.join(directory, 'trajectory_{:05d}_slit{:03d}.csv'.format(index, trajectory.seed_slit))
        export_csv(trajectory, path)
        paths.append(path)
    return paths

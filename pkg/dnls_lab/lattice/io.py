"""Persistence of grid functions and trajectories.

Binary layout: a 32-byte header (magic b'DNLSGRID', then d, N, h as
little-endian float64) followed by the values as little-endian float64
pairs (re, im), row-major.
"""
import os.path as osp

import numpy as np
import h5py

from dnls_lab.lattice.LatticeGrid import LatticeGrid
from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.utils.utils import may_make_dir

MAGIC = b'DNLSGRID'
HEADER_SIZE = 32


def save_grid_function(u, path):
  may_make_dir(osp.dirname(osp.abspath(path)))
  header = MAGIC + np.array([u.grid.d, u.grid.N, u.grid.h], '<f8').tobytes()
  assert len(header) == HEADER_SIZE
  with open(path, 'wb') as f:
    f.write(header)
    f.write(np.ascontiguousarray(u.values, dtype='<c16').tobytes())


def load_grid_function(path):
  with open(path, 'rb') as f:
    raw = f.read()
  if len(raw) < HEADER_SIZE or raw[:8] != MAGIC:
    raise ValueError('{} is not a grid function file'.format(path))
  d, N, h = np.frombuffer(raw[8:HEADER_SIZE], dtype='<f8')
  grid = LatticeGrid(int(d), int(N), float(h))
  values = np.frombuffer(raw[HEADER_SIZE:], dtype='<c16')
  if values.size != grid.size:
    raise ValueError('{}: expected {} values, found {}'.format(
      path, grid.size, values.size))
  return GridFunction(grid, values)


def export_grid_csv(u, path):
  """CSV with header index,a_1[,a_2],re,im and 17 significant digits."""
  may_make_dir(osp.dirname(osp.abspath(path)))
  grid = u.grid
  coords = [c.ravel() for c in grid.coordinates()]
  vals = u.flat_values
  table = np.column_stack(
    [np.arange(grid.size)] + coords + [vals.real, vals.imag])
  header = ','.join(['index'] + ['a_{}'.format(j + 1) for j in range(grid.d)]
                    + ['re', 'im'])
  fmt = ['%d'] + ['%.17g'] * (grid.d + 2)
  np.savetxt(path, table, fmt=fmt, delimiter=',', header=header, comments='')


def load_grid_csv(path, h):
  """Inverse of `export_grid_csv`; the spacing is not stored in the CSV."""
  table = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
  d = table.shape[1] - 3
  N = int(round(table.shape[0] ** (1. / d)))
  grid = LatticeGrid(d, N, h)
  return GridFunction(grid, table[:, -2] + 1j * table[:, -1])


def load_state(path, h=None):
  """Load a state written by `save_grid_function` or, for .csv files, by
  `export_grid_csv` (then h must be given)."""
  if not osp.exists(path):
    raise IOError('State file {} does not exist'.format(path))
  if path.endswith('.csv'):
    if h is None:
      raise ValueError('Loading a CSV state needs the lattice spacing h')
    return load_grid_csv(path, h)
  return load_grid_function(path)


def save_trajectory(path, grid, times, states):
  """Store snapshots in HDF5: datasets t, re, im; attributes d, N, h."""
  may_make_dir(osp.dirname(osp.abspath(path)))
  values = np.stack([s.values for s in states]) if len(states) > 0 \
    else np.zeros((0,) + grid.shape, dtype=np.complex128)
  with h5py.File(path, 'w') as f:
    f.attrs['d'] = grid.d
    f.attrs['N'] = grid.N
    f.attrs['h'] = grid.h
    f.create_dataset('t', data=np.asarray(times, dtype=np.float64))
    f.create_dataset('re', data=values.real)
    f.create_dataset('im', data=values.imag)


def load_trajectory(path):
  with h5py.File(path, 'r') as f:
    grid = LatticeGrid(int(f.attrs['d']), int(f.attrs['N']),
                       float(f.attrs['h']))
    times = f['t'][()]
    values = f['re'][()] + 1j * f['im'][()]
  return grid, times, [GridFunction(grid, v) for v in values]

"""Observers passed to `flow.integrate`. Each keeps the records of one
trajectory and must not be shared between trajectories."""
import os.path as osp

import numpy as np

from dnls_lab.dynamics import flow
from dnls_lab.lattice import io
from dnls_lab.spectral.fourier import sobolev_norm
from dnls_lab.utils.utils import may_make_dir


class ConservationObserver(object):
  """Records t, mass, energy and H^1, H^2 (plus optional higher) norms."""

  def __init__(self, params, extra_orders=()):
    self.params = params
    self.orders = [1, 2] + [m for m in extra_orders if m > 2]
    self.records = []

  @property
  def header(self):
    return ['t', 'mass', 'energy'] + ['H{}'.format(m) for m in self.orders]

  def __call__(self, t, u):
    row = [t, flow.mass(u), flow.energy(u, self.params)]
    row += [sobolev_norm(u, m) for m in self.orders]
    self.records.append(row)

  def as_array(self):
    return np.array(self.records, dtype=np.float64).reshape(
      -1, len(self.header))

  def relative_mass_drift(self):
    arr = self.as_array()
    if arr.shape[0] == 0 or arr[0, 1] == 0:
      return 0.
    return float(np.max(np.abs(arr[:, 1] - arr[0, 1])) / arr[0, 1])

  def to_csv(self, path):
    may_make_dir(osp.dirname(osp.abspath(path)))
    np.savetxt(path, self.as_array(), fmt='%.17g', delimiter=',',
               header=','.join(self.header), comments='')


class NormObserver(object):
  """Records (t, ||u(t)||_{H^m}) for each requested m."""

  def __init__(self, orders):
    self.orders = list(orders)
    self.times = []
    self.norms = []

  def __call__(self, t, u):
    self.times.append(t)
    self.norms.append([sobolev_norm(u, m) for m in self.orders])

  def series(self, m):
    j = self.orders.index(m)
    return np.array(self.times), np.array([n[j] for n in self.norms])


class SnapshotObserver(object):
  """Keeps the states themselves."""

  def __init__(self):
    self.times = []
    self.states = []

  def __call__(self, t, u):
    self.times.append(t)
    self.states.append(u)

  def save_h5(self, path):
    if len(self.states) == 0:
      raise ValueError('No snapshots recorded')
    io.save_trajectory(path, self.states[0].grid, self.times, self.states)

"""Modified energies E_2k and E_3 and the d_t^k u ~ (i Delta_h)^k u gap.

All lattice sums carry the weight h^d. Correction terms carry the model
sign: the |d_t^(k-1) N|^2 term is weighted by lam^2, the others by lam, so
that for lam = 0 only the leading term survives.
"""
from collections import OrderedDict

import numpy as np

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice.operators import laplacian_values
from dnls_lab.dynamics.jet import time_jet_values
from dnls_lab.dynamics.jet import nonlinearity_jet
from dnls_lab.dynamics.jet import modulus_squared_jet
from dnls_lab.spectral.fourier import sobolev_norm


class EnergyBreakdown(object):
  """leading + sum(corrections.values()) = total."""

  def __init__(self, leading, corrections):
    self.leading = float(leading)
    self.corrections = OrderedDict(
      (k, float(v)) for k, v in corrections.items())
    self.total = self.leading + sum(self.corrections.values())

  def to_dict(self):
    d = OrderedDict([('leading', self.leading)])
    d.update(self.corrections)
    d['total'] = self.total
    return d

  def __repr__(self):
    return 'EnergyBreakdown({})'.format(
      ', '.join('{}={:.6g}'.format(k, v) for k, v in self.to_dict().items()))


def _forward(v, axis, h):
  return (np.roll(v, -1, axis=axis) - v) / h


def _neighbour_weight(a, axis, p):
  """sum_{l=1}^{(p-1)/2} |u(a)|^(p-1-2l) |u(a + h e_j)|^(2l-2)."""
  b = np.roll(a, -1, axis=axis)
  return sum(a ** (p - 1 - 2 * l) * b ** (2 * l - 2)
             for l in range(1, (p - 1) // 2 + 1))


def modified_energy_even(u, k, params):
  """E_2k(u) = ||d_t^k u||^2 - lam^2 ||d_t^(k-1) N||^2
     - lam/2 sum_a sum_j |d_t^(k-1) grad+_j |u|^2|^2 W_j(a),
  N = |u|^(p-1) u."""
  if k < 1:
    raise ValueError('E_2k needs k >= 1, got {}'.format(k))
  params.check_grid(u.grid)
  grid = u.grid
  w = grid.cell_volume
  layers = time_jet_values(u.values, grid.h, k, params)
  leading = w * np.sum(np.abs(layers[k]) ** 2)
  lam, p = params.lam, params.p
  nl = nonlinearity_jet(layers, params, k - 1)[k - 1]
  nonlinear = -lam ** 2 * w * np.sum(np.abs(nl) ** 2)
  dens = modulus_squared_jet(layers, k - 1)[k - 1]
  modulus = np.abs(u.values)
  gradient = 0.
  for axis in range(grid.d):
    g = _forward(dens, axis, grid.h)
    gradient += np.sum(np.abs(g) ** 2 * _neighbour_weight(modulus, axis, p))
  gradient = -lam * 0.5 * w * gradient
  return EnergyBreakdown(leading, OrderedDict([
    ('nonlinearity', nonlinear), ('modulus_gradient', gradient)]))


def modified_energy_odd(u, k=1, params=None):
  """E_3(u) = 1/2 ||grad+ d_t u||^2 + lam/2 <|u|^(p-1), |d_t u|^2>
     + lam (p-1)/8 <|u|^(p-3), |d_t |u|^2|^2>.
  Only k = 1 is defined."""
  if k != 1:
    raise NotImplementedError(
      'Unsupported order: E_(2k+1) is only available for k=1, got k={}'
      .format(k))
  if params is None:
    raise ValueError('modified_energy_odd needs model parameters')
  params.check_grid(u.grid)
  grid = u.grid
  w = grid.cell_volume
  layers = time_jet_values(u.values, grid.h, 1, params)
  dt_u = layers[1]
  leading = 0.5 * w * sum(np.sum(np.abs(_forward(dt_u, axis, grid.h)) ** 2)
                          for axis in range(grid.d))
  lam, p = params.lam, params.p
  modulus = np.abs(u.values)
  weighted = lam * 0.5 * w * np.sum(modulus ** (p - 1) * np.abs(dt_u) ** 2)
  dt_dens = 2. * np.real(np.conj(u.values) * dt_u)
  radial = lam * (p - 1) / 8. * w * np.sum(
    modulus ** (p - 3) * np.abs(dt_dens) ** 2)
  return EnergyBreakdown(leading, OrderedDict([
    ('weighted_kinetic', weighted), ('radial', radial)]))


def jet_laplacian_gap(u, k, s, params):
  """(||d_t^k u - i^k Delta_h^k u||_{H^s}, ||u||_{H^(s+2k-1)})."""
  if k < 0:
    raise ValueError('Jet order k={} must be >= 0'.format(k))
  params.check_grid(u.grid)
  layers = time_jet_values(u.values, u.grid.h, k, params)
  target = u.values
  for _ in range(k):
    target = 1j * laplacian_values(target, u.grid.h)
  gap = sobolev_norm(GridFunction(u.grid, layers[k] - target), s)
  return gap, sobolev_norm(u, s + 2 * k - 1)

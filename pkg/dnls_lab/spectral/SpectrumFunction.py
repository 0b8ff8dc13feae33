import os.path as osp

import numpy as np

from dnls_lab.utils.utils import may_make_dir


class SpectrumFunction(object):
  """Complex coefficients on the dual grid of a LatticeGrid.

  coeffs[k] sits at xi_k = 2*pi*k/(N*h), k_j in {-N/2, ..., N/2-1}, stored in
  increasing frequency order. Torus integrals become dual-grid sums with
  weight (2*pi/(N*h))^d, so that (2*pi)^-d * sum |c|^2 * weight equals the
  L^2(hZ^d) norm of the inverse transform.
  """

  def __init__(self, grid, coeffs):
    coeffs = np.array(coeffs, dtype=np.complex128)
    if coeffs.size != grid.size:
      raise ValueError('Got {} coefficients for a grid of {} points'.format(
        coeffs.size, grid.size))
    coeffs = coeffs.reshape(grid.shape)
    coeffs.flags.writeable = False
    self._grid = grid
    self._coeffs = coeffs

  @property
  def grid(self):
    return self._grid

  @property
  def coeffs(self):
    return self._coeffs

  @property
  def xi(self):
    return self._grid.dual_coordinates()

  @property
  def quadrature_weight(self):
    return (2 * np.pi / (self._grid.N * self._grid.h)) ** self._grid.d

  def norm(self, weight=None):
    """(2pi)^-d sum weight * |c|^2 * dxi, square-rooted."""
    dens = np.abs(self._coeffs) ** 2
    if weight is not None:
      dens = dens * weight
    return float(np.sqrt(np.sum(dens) / (self._grid.N * self._grid.h)
                         ** self._grid.d))

  def __mul__(self, other):
    if isinstance(other, SpectrumFunction):
      other = other.coeffs
    return SpectrumFunction(self._grid, self._coeffs * other)

  __rmul__ = __mul__

  def __add__(self, other):
    return SpectrumFunction(self._grid, self._coeffs + other.coeffs)

  def __sub__(self, other):
    return SpectrumFunction(self._grid, self._coeffs - other.coeffs)

  def export_csv(self, path):
    """CSV with header k_1[,k_2],xi_1[,xi_2],re,im."""
    may_make_dir(osp.dirname(osp.abspath(path)))
    d = self._grid.d
    ks = np.meshgrid(*([self._grid.dual_indices()] * d), indexing='ij')
    cols = [k.ravel() for k in ks] + [x.ravel() for x in self.xi] \
      + [self._coeffs.real.ravel(), self._coeffs.imag.ravel()]
    header = ','.join(['k_{}'.format(j + 1) for j in range(d)]
                      + ['xi_{}'.format(j + 1) for j in range(d)]
                      + ['re', 'im'])
    fmt = ['%d'] * d + ['%.17g'] * (d + 2)
    np.savetxt(path, np.column_stack(cols), fmt=fmt, delimiter=',',
               header=header, comments='')

  def __repr__(self):
    return 'SpectrumFunction({!r})'.format(self._grid)

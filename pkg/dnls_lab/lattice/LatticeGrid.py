"""Truncated periodic lattice and complex grid functions on it.

The lattice hZ^d is truncated to the box [-L, L)^d with N points per axis,
L = N*h/2. Points are stored in increasing coordinate order starting at -L,
row-major over the axes. The dual (frequency) grid is
xi_k = 2*pi*k/(N*h), k in {-N/2, ..., N/2-1}, stored in the same increasing
order (the `fftshift` layout).
"""
import numbers

import numpy as np


def _is_power_of_two(n):
  return n >= 1 and (n & (n - 1)) == 0


class LatticeGrid(object):
  """Geometry of the truncated periodic lattice.

  Args:
    d: dimension, 1 or 2
    N: points per axis, even and >= 4
    h: lattice spacing, > 0
  """

  def __init__(self, d, N, h):
    if d not in (1, 2):
      raise ValueError('Unsupported dimension d={}, expected 1 or 2'.format(d))
    if not isinstance(N, numbers.Integral) or N < 4 or N % 2 != 0:
      raise ValueError('N={} must be an even integer >= 4'.format(N))
    h = float(h)
    if not np.isfinite(h) or h <= 0:
      raise ValueError('Lattice spacing h={} must be positive'.format(h))
    self._d = int(d)
    self._N = int(N)
    self._h = h

  @classmethod
  def from_box(cls, d, L, h):
    """Grid of spacing h on [-L, L)^d; 2L/h must be an even integer."""
    ratio = 2. * L / h
    N = int(round(ratio))
    if abs(N - ratio) > 1e-9 * max(1., ratio):
      raise ValueError(
        'Box half-width L={} is not a multiple of h/2={}'.format(L, h / 2.))
    return cls(d, N, h)

  @property
  def d(self):
    return self._d

  @property
  def N(self):
    return self._N

  @property
  def h(self):
    return self._h

  @property
  def L(self):
    return self._N * self._h / 2.

  @property
  def shape(self):
    return (self._N,) * self._d

  @property
  def size(self):
    return self._N ** self._d

  @property
  def cell_volume(self):
    """h^d, the quadrature weight of every lattice sum."""
    return self._h ** self._d

  def axis(self):
    return -self.L + self._h * np.arange(self._N)

  def coordinates(self):
    """List of d arrays of shape `self.shape` holding the point coordinates."""
    ax = self.axis()
    return np.meshgrid(*([ax] * self._d), indexing='ij')

  def dual_indices(self):
    return np.arange(-self._N // 2, self._N // 2)

  def dual_axis(self):
    return 2 * np.pi * self.dual_indices() / (self._N * self._h)

  def dual_coordinates(self):
    ax = self.dual_axis()
    return np.meshgrid(*([ax] * self._d), indexing='ij')

  def dual_norm_squared(self):
    """|xi|^2 over the dual grid."""
    return sum(x ** 2 for x in self.dual_coordinates())

  def origin_index(self):
    """Array index of the lattice point a = 0."""
    return (self._N // 2,) * self._d

  def refine(self, r):
    """Same box, spacing h / 2^r."""
    if not isinstance(r, numbers.Integral) or r < 0:
      raise ValueError('Refinement level r={} must be a non-negative integer'
                       .format(r))
    return LatticeGrid(self._d, self._N * 2 ** r, self._h / 2 ** r)

  def coarsen(self, r):
    """Same box, spacing h * 2^r."""
    factor = 2 ** r
    if self._N % factor != 0 or self._N // factor < 4 \
        or (self._N // factor) % 2 != 0:
      raise ValueError('Cannot coarsen N={} by 2^{}'.format(self._N, r))
    return LatticeGrid(self._d, self._N // factor, self._h * factor)

  def refinement_level(self, coarse):
    """Return r such that `self == coarse.refine(r)`.
    Raise ValueError when the two grids are incommensurate."""
    if coarse.d != self._d:
      raise ValueError('Dimension mismatch: {} vs {}'.format(coarse.d, self._d))
    if abs(coarse.L - self.L) > 1e-12 * max(1., self.L):
      raise ValueError('Box mismatch: L={} vs L={}'.format(coarse.L, self.L))
    if self._N % coarse.N != 0 or not _is_power_of_two(self._N // coarse.N):
      raise ValueError(
        'Grid with N={} is not a dyadic refinement of N={}'.format(
          self._N, coarse.N))
    return int(np.log2(self._N // coarse.N))

  def __eq__(self, other):
    if not isinstance(other, LatticeGrid):
      return NotImplemented
    return (self._d, self._N) == (other.d, other.N) \
      and abs(self._h - other.h) <= 1e-14 * self._h

  def __ne__(self, other):
    eq = self.__eq__(other)
    return eq if eq is NotImplemented else not eq

  def __hash__(self):
    return hash((self._d, self._N, round(self._h, 12)))

  def __repr__(self):
    return 'LatticeGrid(d={}, N={}, h={!r})'.format(self._d, self._N, self._h)


class GridFunction(object):
  """Complex-valued function on a LatticeGrid. Immutable once built.

  Args:
    grid: LatticeGrid
    values: array broadcastable to complex of shape `grid.shape`; a flat
      array of length N^d in row-major order is accepted as well
  """

  def __init__(self, grid, values):
    values = np.array(values, dtype=np.complex128)
    if values.size != grid.size:
      raise ValueError('Got {} values for a grid of {} points'.format(
        values.size, grid.size))
    values = values.reshape(grid.shape)
    if not np.all(np.isfinite(values)):
      raise ValueError('GridFunction values must be finite')
    values.flags.writeable = False
    self._grid = grid
    self._values = values

  @property
  def grid(self):
    return self._grid

  @property
  def values(self):
    """Read-only array of shape `grid.shape`."""
    return self._values

  @property
  def flat_values(self):
    return self._values.ravel()

  def conj(self):
    return GridFunction(self._grid, np.conj(self._values))

  def modulus(self):
    return np.abs(self._values)

  def _other_values(self, other):
    if isinstance(other, GridFunction):
      if other.grid != self._grid:
        raise ValueError('Grid mismatch: {} vs {}'.format(other.grid, self._grid))
      return other.values
    return other

  def __add__(self, other):
    return GridFunction(self._grid, self._values + self._other_values(other))

  __radd__ = __add__

  def __sub__(self, other):
    return GridFunction(self._grid, self._values - self._other_values(other))

  def __rsub__(self, other):
    return GridFunction(self._grid, self._other_values(other) - self._values)

  def __mul__(self, other):
    return GridFunction(self._grid, self._values * self._other_values(other))

  __rmul__ = __mul__

  def __truediv__(self, scalar):
    return GridFunction(self._grid, self._values / scalar)

  def __neg__(self):
    return GridFunction(self._grid, -self._values)

  def __repr__(self):
    return 'GridFunction({!r})'.format(self._grid)

  ##################
  # Constructors   #
  ##################

  @classmethod
  def zeros(cls, grid):
    return cls(grid, np.zeros(grid.shape))

  @classmethod
  def constant(cls, grid, c):
    return cls(grid, np.full(grid.shape, c, dtype=np.complex128))

  @classmethod
  def from_function(cls, grid, func):
    """Sample func(x_1[, x_2]) at every lattice point."""
    return cls(grid, func(*grid.coordinates()))

  @classmethod
  def delta(cls, grid, index=None, value=1.):
    """`value` at one lattice point (default a = 0), zero elsewhere."""
    if index is None:
      index = grid.origin_index()
    values = np.zeros(grid.shape, dtype=np.complex128)
    values[tuple(index)] = value
    return cls(grid, values)

  @classmethod
  def plane_wave(cls, grid, k, amplitude=1.):
    """amplitude * exp(i a.xi_k) for the dual index k (int or d-tuple),
    k_j in {-N/2, ..., N/2-1}."""
    k = np.atleast_1d(k)
    if k.size != grid.d:
      raise ValueError('Dual index {} does not match d={}'.format(k, grid.d))
    xi = 2 * np.pi * k / (grid.N * grid.h)
    phase = sum(x * w for x, w in zip(grid.coordinates(), xi))
    return cls(grid, amplitude * np.exp(1j * phase))

  @classmethod
  def random(cls, grid, rng, scale=1.):
    """Complex Gaussian values drawn from a np.random.RandomState."""
    re = rng.standard_normal(grid.shape)
    im = rng.standard_normal(grid.shape)
    return cls(grid, scale * (re + 1j * im))

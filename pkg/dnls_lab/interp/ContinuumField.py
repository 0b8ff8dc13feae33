import numpy as np

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.spectral import fourier


class ContinuumField(object):
  """A function on R^d, represented by its samples on a fine periodic grid.

  The fine grid spans the same box [-L, L)^d as the coarse lattices it is
  compared with; its spectrum is the continuous Fourier transform restricted
  to the fine dual grid.

  Args:
    fine_grid: LatticeGrid
    values: complex samples of shape `fine_grid.shape`
    band_limit: half-width of the torus carrying the spectrum, or np.inf if
      the field is not band-limited below the fine Nyquist frequency
  """

  def __init__(self, fine_grid, values, band_limit=np.inf):
    values = np.array(values, dtype=np.complex128).reshape(fine_grid.shape)
    if not np.all(np.isfinite(values)):
      raise ValueError('ContinuumField values must be finite')
    values.flags.writeable = False
    self._grid = fine_grid
    self._values = values
    self._band_limit = float(band_limit)
    if self._band_limit < np.pi / fine_grid.h:
      self._check_band_limit()

  def _check_band_limit(self):
    coeffs = fourier.dft_values(self._grid, self._values)
    outside = ~self.torus_mask(self._grid, self._band_limit)
    total = np.sqrt(np.sum(np.abs(coeffs) ** 2))
    leak = np.sqrt(np.sum(np.abs(coeffs[outside]) ** 2))
    if leak > 1e-12 * max(total, 1e-300):
      raise ValueError('Spectrum leaks beyond band limit {}: {:.3e}'.format(
        self._band_limit, leak / total))

  @staticmethod
  def torus_mask(grid, band_limit):
    """Dual points of `grid` inside [-band_limit, band_limit)^d."""
    mask = np.ones(grid.shape, dtype=bool)
    eps = 1e-9 * 2 * np.pi / (grid.N * grid.h)
    for x in grid.dual_coordinates():
      mask &= (x >= -band_limit - eps) & (x < band_limit - eps)
    return mask

  @property
  def fine_grid(self):
    return self._grid

  @property
  def values(self):
    return self._values

  @property
  def band_limit(self):
    return self._band_limit

  @property
  def L(self):
    return self._grid.L

  def spectrum(self):
    """Continuous Fourier transform on the fine dual grid."""
    return fourier.dft_values(self._grid, self._values)

  def as_grid_function(self):
    return GridFunction(self._grid, self._values)

  @classmethod
  def from_spectrum(cls, fine_grid, coeffs, band_limit=np.inf):
    return cls(fine_grid, fourier.idft_values(fine_grid, coeffs), band_limit)

  @classmethod
  def from_function(cls, fine_grid, func):
    return cls(fine_grid, func(*fine_grid.coordinates()))

  def _other(self, other):
    if isinstance(other, ContinuumField):
      if other.fine_grid != self._grid:
        raise ValueError('Fine grid mismatch: {} vs {}'.format(
          other.fine_grid, self._grid))
      return other.values, other.band_limit
    return other, self._band_limit

  def __add__(self, other):
    v, b = self._other(other)
    return ContinuumField(self._grid, self._values + v,
                          max(self._band_limit, b))

  def __sub__(self, other):
    v, b = self._other(other)
    return ContinuumField(self._grid, self._values - v,
                          max(self._band_limit, b))

  def __mul__(self, other):
    """Pointwise product; band limits add."""
    if isinstance(other, ContinuumField):
      v, b = self._other(other)
      return ContinuumField(self._grid, self._values * v,
                            self._band_limit + b)
    return ContinuumField(self._grid, self._values * other, self._band_limit)

  __rmul__ = __mul__

  def conj(self):
    return ContinuumField(self._grid, np.conj(self._values), self._band_limit)

  def __repr__(self):
    return 'ContinuumField({!r}, band_limit={})'.format(
      self._grid, self._band_limit)


class DecayProfile(object):
  """Recipe for random test data of sharp Sobolev regularity.

  The spectrum decays like (1 + |xi|^2)^(-beta/2) with beta = delta + d/2 +
  1/2, which puts the field in H^delta (and just short of H^(delta + 1/2)).

  Args:
    delta: target regularity, > d/2
    d: dimension
    seed: seed of the random phases
    width: optional width of a Gaussian envelope exp(-|x|^2 / (2 width^2))
      that makes the field decay in space; None for no envelope
  """

  def __init__(self, delta, d, seed=0, width=None):
    if d not in (1, 2):
      raise ValueError('Unsupported dimension d={}'.format(d))
    if not delta > d / 2.:
      raise ValueError('DecayProfile needs delta > d/2, got delta={}'.format(
        delta))
    if width is not None and not width > 0:
      raise ValueError('Envelope width must be positive, got {}'.format(width))
    self.delta = float(delta)
    self.d = d
    self.seed = int(seed)
    self.width = width
    self.beta = self.delta + d / 2. + 0.5
    assert self.beta > self.delta + d / 2.

  def __repr__(self):
    return 'DecayProfile(delta={}, d={}, seed={}, width={})'.format(
      self.delta, self.d, self.seed, self.width)

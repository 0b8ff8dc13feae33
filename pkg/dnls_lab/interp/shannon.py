"""Shannon interpolation S_h, pointwise projection Pi_h and continuum Sobolev
norms on fine periodic surrogates of R^d."""
import numbers

import numpy as np
from scipy import fft as sp_fft

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.spectral import fourier
from dnls_lab.spectral.SpectrumFunction import SpectrumFunction
from dnls_lab.interp.ContinuumField import ContinuumField

DEFAULT_REFINEMENT = 3


def _check_level(r):
  if not isinstance(r, numbers.Integral) or r < 1:
    raise ValueError('Refinement level r={} must be an integer >= 1'.format(r))


def zero_pad(coeffs, coarse, fine):
  """Embed a coarse spectrum (increasing frequency order) into the fine dual
  grid; modes outside the coarse torus are zero."""
  off = (fine.N - coarse.N) // 2
  out = np.zeros(fine.shape, dtype=np.complex128)
  out[(slice(off, off + coarse.N),) * coarse.d] = coeffs
  return out


def truncate(coeffs, fine, coarse):
  """Restrict a fine spectrum to the coarse torus."""
  off = (fine.N - coarse.N) // 2
  return coeffs[(slice(off, off + coarse.N),) * coarse.d]


def shannon_interpolate(u, r=DEFAULT_REFINEMENT):
  """S_h u sampled on the grid of spacing h / 2^r.

  The Nyquist coefficient stays on -pi/h, so that the spectrum of S_h u is
  1_{[-pi/h, pi/h)^d} dft(u) exactly.
  """
  _check_level(r)
  fine = u.grid.refine(r)
  coeffs = zero_pad(fourier.dft_values(u.grid, u.values), u.grid, fine)
  return ContinuumField.from_spectrum(fine, coeffs, band_limit=np.pi / u.grid.h)


def interpolate_onto(u, fine):
  """S_h u on a given dyadic refinement of u's grid."""
  r = fine.refinement_level(u.grid)
  if r == 0:
    return ContinuumField(fine, u.values, band_limit=np.pi / u.grid.h)
  return shannon_interpolate(u, r)


def pointwise_project(f, coarse):
  """Pi_h f: read f at the coarse lattice points (stride read, no filter)."""
  r = f.fine_grid.refinement_level(coarse)
  stride = 2 ** r
  return GridFunction(coarse, f.values[(slice(None, None, stride),) * coarse.d])


def continuum_weight(grid, s):
  return (1. + grid.dual_norm_squared()) ** s


def continuum_sobolev_norm(f, s):
  """(2pi)^-d sum (1 + |xi|^2)^s |F f|^2 dxi over the fine dual grid."""
  grid = f.fine_grid
  dens = np.abs(f.spectrum()) ** 2 * continuum_weight(grid, s)
  return float(np.sqrt(np.sum(dens) / (2 * grid.L) ** grid.d))


def shannon_sobolev_norm(u, s):
  """||S_h u||_{H^s(R^d)}, read off the coarse spectrum directly."""
  return fourier.dft(u).norm(continuum_weight(u.grid, s))


def continuum_linear_flow(f, t):
  """exp(i t Delta) f with the exact symbol exp(-i t |xi|^2)."""
  grid = f.fine_grid
  coeffs = f.spectrum() * np.exp(-1j * t * grid.dual_norm_squared())
  return ContinuumField.from_spectrum(grid, coeffs, f.band_limit)


def low_pass(f, band_limit):
  """Keep the modes in [-band_limit, band_limit)^d."""
  grid = f.fine_grid
  mask = ContinuumField.torus_mask(grid, band_limit)
  return ContinuumField.from_spectrum(grid, f.spectrum() * mask,
                                      min(band_limit, f.band_limit))


def poisson_fold(f, coarse):
  """sum_m F f(xi + 2 pi m / h) over the fine images of each coarse
  frequency, as a SpectrumFunction on `coarse`. Equals dft(Pi_h f)."""
  fine = f.fine_grid
  R = 2 ** fine.refinement_level(coarse)
  d = coarse.d
  coeffs = sp_fft.ifftshift(f.spectrum())
  # fine index k_f = j + m N_c in FFT order, so a (R, N_c) split per axis
  # groups all images of the coarse index j.
  coeffs = coeffs.reshape(sum([(R, coarse.N) for _ in range(d)], ()))
  folded = coeffs.sum(axis=tuple(range(0, 2 * d, 2)))
  return SpectrumFunction(coarse, sp_fft.fftshift(folded))


def _reflect(a):
  """a(-k) in increasing frequency order (the Nyquist index maps to itself)."""
  axes = tuple(range(a.ndim))
  return np.roll(np.flip(a, axis=axes), 1, axis=axes)


def nested_phases(rng, N, d):
  """Uniform phases on [-N/2, N/2)^d in increasing frequency order, drawn
  from the coarsest even block upwards: a dyadic refinement of the grid keeps
  the phase of every coarser mode."""
  n = N
  while n % 4 == 0 and n // 2 >= 4:
    n //= 2
  theta = rng.uniform(0., 2 * np.pi, size=(n,) * d)
  while n < N:
    new = rng.uniform(0., 2 * np.pi, size=(2 * n,) * d)
    new[(slice(n // 2, n // 2 + n),) * d] = theta
    theta, n = new, 2 * n
  return theta


def generate_decay_function(profile, grid):
  """Real field with spectrum (1 + |xi|^2)^(-beta/2) exp(i theta), theta
  odd-symmetrised random phases, optionally tapered by a Gaussian envelope,
  normalised to ||f||_{H^delta} = 1. Without an envelope, refining the grid
  keeps every coarser mode up to the normalisation except the former Nyquist
  row, whose phase the symmetrisation pairs with a newly drawn mode."""
  if grid.d != profile.d:
    raise ValueError('Profile d={} does not match grid d={}'.format(
      profile.d, grid.d))
  theta = nested_phases(np.random.RandomState(profile.seed), grid.N, grid.d)
  theta = 0.5 * (theta - _reflect(theta))
  amp = (1. + grid.dual_norm_squared()) ** (-profile.beta / 2.)
  values = np.real(fourier.idft_values(grid, amp * np.exp(1j * theta)))
  if profile.width is not None:
    r2 = sum(x ** 2 for x in grid.coordinates())
    values = values * np.exp(-r2 / (2. * profile.width ** 2))
  f = ContinuumField(grid, values)
  norm = continuum_sobolev_norm(f, profile.delta)
  return ContinuumField(grid, values / norm)


def refine_until_stable(measure, r0=DEFAULT_REFINEMENT, tol=0.01, r_max=8):
  """Increase the refinement level until `measure(r)` moves by less than
  `tol` (relative). Returns (value, r)."""
  _check_level(r0)
  prev = measure(r0)
  r = r0
  while r < r_max:
    r += 1
    cur = measure(r)
    if abs(cur - prev) <= tol * abs(prev):
      return cur, r
    prev = cur
  print('[Warning] refinement not stable at r={}, last value {:.6g}'.format(
    r, prev))
  return prev, r

"""Discrete Fourier transform on the truncated lattice, Sobolev multiplier
norms and the exact discrete linear Schroedinger flow.

Convention:
  dft(u)(xi_k) = h^d sum_a u(a) exp(-i a.xi_k),  a = -L + h n.
Since exp(i L xi_k) = (-1)^k, this is h^d (-1)^(sum k_j) times the standard
FFT, re-ordered to increasing frequency.
"""
import numpy as np
from scipy import fft as sp_fft

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.spectral.SpectrumFunction import SpectrumFunction


def dual_sign(grid):
  """(-1)^(k_1 + ... + k_d) over the dual grid."""
  s = np.where(grid.dual_indices() % 2 == 0, 1., -1.)
  out = s
  for _ in range(grid.d - 1):
    out = np.multiply.outer(out, s)
  return out


def sigma_array(grid):
  """(4/h^2) sum_j sin^2(h xi_j / 2) as a plain array."""
  h = grid.h
  return sum((4. / h ** 2) * np.sin(h * x / 2.) ** 2
             for x in grid.dual_coordinates())


def dft_values(grid, values):
  return grid.cell_volume * dual_sign(grid) * sp_fft.fftshift(
    sp_fft.fftn(values))


def idft_values(grid, coeffs):
  return sp_fft.ifftn(sp_fft.ifftshift(coeffs * dual_sign(grid))) \
    / grid.cell_volume


def dft(u):
  return SpectrumFunction(u.grid, dft_values(u.grid, u.values))


def idft(v):
  return GridFunction(v.grid, idft_values(v.grid, v.coeffs))


def sine_multiplier(grid):
  """sigma_h(xi), the symbol of -Delta_h, as a (real-valued) SpectrumFunction."""
  return SpectrumFunction(grid, sigma_array(grid))


def apply_symbol(u, symbol):
  """idft(symbol * dft(u)) for a symbol given on the dual grid."""
  return GridFunction(u.grid, idft_values(
    u.grid, symbol * dft_values(u.grid, u.values)))


def sobolev_norm(u, s):
  """H^s(hZ^d) norm through the multiplier (1 + sigma_h)^s; any real s."""
  return dft(u).norm((1. + sigma_array(u.grid)) ** s)


def homogeneous_sobolev_norm(u, s):
  """H^s dot(hZ^d) norm through sigma_h^s, s >= 0."""
  if s < 0:
    raise ValueError('Homogeneous norm needs s >= 0, got {}'.format(s))
  return dft(u).norm(sigma_array(u.grid) ** s)


def linear_flow(u, t):
  """exp(i t Delta_h) u, exact up to rounding."""
  return apply_symbol(u, np.exp(-1j * t * sigma_array(u.grid)))


def fractional_sobolev_apply(u, s):
  """(1 - Delta_h)^(s/2) u."""
  return apply_symbol(u, (1. + sigma_array(u.grid)) ** (s / 2.))


class LinearPropagator(object):
  """exp(i tau Delta_h) on raw value arrays, with the symbol cached in FFT
  order. The phase and h^d factors of dft/idft cancel in the composition."""

  def __init__(self, grid, tau):
    self.grid = grid
    self.tau = tau
    self.phase = np.exp(-1j * tau * sp_fft.ifftshift(sigma_array(grid)))

  def __call__(self, values):
    return sp_fft.ifftn(sp_fft.fftn(values) * self.phase)

"""Difference operators, the discrete Laplacian and real-space norms on the
periodic lattice. Every sum carries the quadrature weight h^d."""
import numbers

import numpy as np
from scipy.special import comb

from dnls_lab.lattice.LatticeGrid import GridFunction

# Outer shell (fraction of L) watched for mass leaking through the periodic
# box, and the tolerated share of the total mass.
BOUNDARY_SHELL = 0.1
BOUNDARY_MASS_TOL = 1e-10


def _check_axis(u, j):
  if not isinstance(j, numbers.Integral) or not 1 <= j <= u.grid.d:
    raise ValueError('Axis j={} out of range 1..{}'.format(j, u.grid.d))


def _check_same_grid(f, g):
  if f.grid != g.grid:
    raise ValueError('Grid mismatch: {} vs {}'.format(f.grid, g.grid))


def forward_difference(u, j):
  """(u(a + h e_j) - u(a)) / h with periodic wraparound."""
  _check_axis(u, j)
  v = u.values
  return GridFunction(u.grid, (np.roll(v, -1, axis=j - 1) - v) / u.grid.h)


def backward_difference(u, j):
  """(u(a) - u(a - h e_j)) / h with periodic wraparound."""
  _check_axis(u, j)
  v = u.values
  return GridFunction(u.grid, (v - np.roll(v, 1, axis=j - 1)) / u.grid.h)


def laplacian_values(v, h):
  out = -2. * v.ndim * v
  for axis in range(v.ndim):
    out = out + np.roll(v, 1, axis=axis) + np.roll(v, -1, axis=axis)
  return out / h ** 2


def apply_laplacian(u):
  """Periodic 2d+1-point stencil Delta_h."""
  return GridFunction(u.grid, laplacian_values(u.values, u.grid.h))


def lp_norm(u, p):
  """(h^d sum |u|^p)^(1/p), or max |u| for p = inf."""
  if p == np.inf:
    return float(np.max(np.abs(u.values)))
  if not p >= 1:
    raise ValueError('lp_norm needs p >= 1 or p = inf, got {}'.format(p))
  total = u.grid.cell_volume * np.sum(np.abs(u.values) ** p)
  return float(total ** (1. / p))


def inner_product(f, g):
  """<f, g>_h = h^d sum f(a) conj(g(a))."""
  _check_same_grid(f, g)
  return complex(f.grid.cell_volume * np.sum(f.values * np.conj(g.values)))


def _homogeneous_squared(u, m):
  """||u||^2_{H^m dot} = <(-Delta_h)^m u, u>_h, evaluated as ||Delta^j u||^2
  for m = 2j and sum_i ||grad+_i Delta^j u||^2 for m = 2j + 1."""
  v = u.values
  h = u.grid.h
  for _ in range(m // 2):
    v = laplacian_values(v, h)
  w = u.grid.cell_volume
  if m % 2 == 0:
    return w * np.sum(np.abs(v) ** 2)
  total = 0.
  for axis in range(v.ndim):
    dv = (np.roll(v, -1, axis=axis) - v) / h
    total += w * np.sum(np.abs(dv) ** 2)
  return total


def _check_order(m):
  if not isinstance(m, numbers.Integral) or m < 0:
    raise ValueError('Sobolev order m={} must be a non-negative integer'
                     .format(m))


def homogeneous_sobolev_norm_operator(u, m):
  _check_order(m)
  return float(np.sqrt(_homogeneous_squared(u, m)))


def sobolev_norm_operator(u, m, weights='binomial'):
  """Inhomogeneous H^m(hZ^d) norm from repeated differences.

  Args:
    u: GridFunction
    m: non-negative integer
    weights: 'binomial' gives <(1 - Delta_h)^m u, u>^(1/2), which agrees with
      the Fourier multiplier norm; 'plain' gives (sum_k ||u||^2_{H^k dot})^(1/2).
      Both coincide for m <= 1.
  Returns:
    non-negative float
  """
  _check_order(m)
  if weights not in ['binomial', 'plain']:
    raise ValueError('Unsupported weights {}'.format(weights))
  total = 0.
  for k in range(m + 1):
    c = comb(m, k, exact=True) if weights == 'binomial' else 1
    total += c * _homogeneous_squared(u, k)
  return float(np.sqrt(total))


def laplacian_norm_bounds(grid, m, verbose=True):
  """Constants C with ||u||_{H^m dot} <= C ||u||_{L^2}.

  Returns:
    verified: (4d/h^2)^(m/2), from the stencil's operator norm
    quoted: (2 sqrt(m)/h)^d, kept for comparison only
  """
  _check_order(m)
  verified = (4. * grid.d / grid.h ** 2) ** (m / 2.)
  quoted = (2. * np.sqrt(m) / grid.h) ** grid.d
  if verbose:
    print('H^{} vs L^2 constant on {}: verified {:.6g}, quoted {:.6g}'.format(
      m, grid, verified, quoted))
  return verified, quoted


def boundary_mass(u):
  """Share of the L^2 mass sitting in the outer shell max_j |a_j| >= 0.9 L."""
  grid = u.grid
  dens = np.abs(u.values) ** 2
  total = np.sum(dens)
  if total == 0:
    return 0.
  dist = np.max(np.abs(np.stack(grid.coordinates())), axis=0)
  shell = dist >= (1. - BOUNDARY_SHELL) * grid.L
  return float(np.sum(dens[shell]) / total)


def check_boundary_mass(u, tol=BOUNDARY_MASS_TOL, label=''):
  """Print a warning when the box truncation is felt. Returns
  (ok, fraction)."""
  frac = boundary_mass(u)
  ok = frac <= tol
  if not ok:
    print('[Warning] {}boundary mass {:.3e} exceeds {:.1e}'.format(
      label + ': ' if label else '', frac, tol))
  return ok, frac

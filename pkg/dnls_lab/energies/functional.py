"""Empirical checks of functional inequalities on the lattice: discrete
Gagliardo-Nirenberg, discrete Strichartz (homogeneous and inhomogeneous),
the continuous bilinear Sobolev product estimate on band-limited
surrogates, the bilinear L^inf bound and Sobolev log-convexity."""
from fractions import Fraction

import numpy as np
from scipy.integrate import trapezoid
from scipy.integrate import cumulative_trapezoid

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice.operators import lp_norm
from dnls_lab.spectral import fourier
from dnls_lab.interp import shannon

STRICHARTZ_TIME_POINTS = 512


def _inverse(x):
  """1/x as an exact Fraction, 0 for x = inf."""
  if x == np.inf:
    return Fraction(0)
  return 1 / Fraction(x).limit_denominator(10 ** 6)


def strichartz_admissible(q, r, d):
  """3/q + d/r = d/2 with 2 <= q, r <= inf and q finite, in exact arithmetic."""
  if d not in (1, 2):
    raise ValueError('Unsupported dimension d={}'.format(d))
  if q == np.inf or not q >= 2 or not r >= 2:
    return False
  return 3 * _inverse(q) + d * _inverse(r) == Fraction(d, 2)


def gagliardo_nirenberg_ratio(u, q, s):
  """||u||_{L^q} / (||u||_{L^2}^(1-theta) ||u||_{H^s dot}^theta),
  theta = (d/s)(1/2 - 1/q), which must lie in (0, 1)."""
  d = u.grid.d
  if not 2 <= q <= np.inf or not s > 0:
    raise ValueError('Need 2 <= q <= inf and s > 0, got q={}, s={}'.format(q, s))
  theta = d / float(s) * (0.5 - float(_inverse(q)))
  if not 0 < theta < 1:
    raise ValueError('theta={} must lie in (0, 1) for q={}, s={}, d={}'.format(
      theta, q, s, d))
  l2 = lp_norm(u, 2)
  hs = fourier.homogeneous_sobolev_norm(u, s)
  if l2 == 0 or hs == 0:
    raise ValueError('Gagliardo-Nirenberg ratio undefined for constant u')
  return lp_norm(u, q) / (l2 ** (1 - theta) * hs ** theta)


def _lq_lr_norm(times, states_values, grid, q, r):
  """(int_0^T ||v(t)||_{L^r}^q dt)^(1/q) by the trapezoid rule."""
  w = grid.cell_volume
  if r == np.inf:
    norms = np.array([np.max(np.abs(v)) for v in states_values])
  else:
    norms = np.array([(w * np.sum(np.abs(v) ** r)) ** (1. / r)
                      for v in states_values])
  return trapezoid(norms ** q, times) ** (1. / q)


def strichartz_ratio(u0, q, r, T, n_time=STRICHARTZ_TIME_POINTS):
  """||exp(i t Delta_h) u0||_{L^q([0,T]; L^r)} / ||u0||_{H^(1/q)}."""
  grid = u0.grid
  if not strichartz_admissible(q, r, grid.d):
    raise ValueError('({}, {}) is not admissible in d={}'.format(q, r, grid.d))
  if not T > 0:
    raise ValueError('Need T > 0, got {}'.format(T))
  times = np.linspace(0., T, n_time + 1)
  coeffs = fourier.dft_values(grid, u0.values)
  sigma = fourier.sigma_array(grid)
  states = [fourier.idft_values(grid, np.exp(-1j * t * sigma) * coeffs)
            for t in times]
  return _lq_lr_norm(times, states, grid, q, r) \
    / fourier.sobolev_norm(u0, 1. / q)


def strichartz_inhomogeneous_ratio(forcing, q, r, T,
                                   n_time=STRICHARTZ_TIME_POINTS):
  """||int_0^t exp(i(t-s) Delta_h) F(s) ds||_{L^q([0,T]; L^r)}
  / sup_s ||F(s)||_{H^(1/q)}.

  Args:
    forcing: callable t -> GridFunction
  """
  if not T > 0:
    raise ValueError('Need T > 0, got {}'.format(T))
  times = np.linspace(0., T, n_time + 1)
  forces = [forcing(t) for t in times]
  grid = forces[0].grid
  if not strichartz_admissible(q, r, grid.d):
    raise ValueError('({}, {}) is not admissible in d={}'.format(q, r, grid.d))
  sigma = fourier.sigma_array(grid)
  # exp(-i s Delta_h) F(s) in Fourier, accumulated in s.
  pulled = np.stack([np.exp(1j * t * sigma) * fourier.dft_values(grid, F.values)
                     for t, F in zip(times, forces)])
  acc = cumulative_trapezoid(pulled, times, axis=0, initial=0)
  states = [fourier.idft_values(grid, np.exp(-1j * t * sigma) * a)
            for t, a in zip(times, acc)]
  sup_force = max(fourier.sobolev_norm(F, 1. / q) for F in forces)
  if sup_force == 0:
    raise ValueError('Inhomogeneous Strichartz ratio of a zero forcing')
  return _lq_lr_norm(times, states, grid, q, r) / sup_force


def bilinear_sobolev_ratio(f, g, s, s1, s2):
  """||S_h f S_h g||_{H^s} / (||S_h f||_{H^s1} ||S_h g||_{H^s2}), valid when
  0 <= s <= s1, s2 and s < s1 + s2 - d/2."""
  d = f.grid.d
  if not (0 <= s <= min(s1, s2) and s < s1 + s2 - d / 2.):
    raise ValueError('Bilinear estimate needs 0 <= s <= s1, s2 and '
                     's < s1 + s2 - d/2, got s={}, s1={}, s2={}'.format(
                       s, s1, s2))
  prod = shannon.shannon_interpolate(f, 1) * shannon.shannon_interpolate(g, 1)
  den = shannon.shannon_sobolev_norm(f, s1) * shannon.shannon_sobolev_norm(g, s2)
  if den == 0:
    raise ValueError('Bilinear ratio of a zero function')
  return shannon.continuum_sobolev_norm(prod, s) / den


def _h1_h2_interpolant(f, eps):
  return fourier.sobolev_norm(f, 1) ** (1 - eps) \
    * fourier.sobolev_norm(f, 2) ** eps


def bilinear_linf_ratio(f, g, eps=0.1):
  """||f g||_{L^inf} / (||f||_{H^1}^(1-eps) ||f||_{H^2}^eps
  ||g||_{H^1}^(1-eps) ||g||_{H^2}^eps), the symmetric two-factor form."""
  if f.grid != g.grid:
    raise ValueError('Grid mismatch: {} vs {}'.format(f.grid, g.grid))
  den = _h1_h2_interpolant(f, eps) * _h1_h2_interpolant(g, eps)
  if den == 0:
    raise ValueError('Bilinear L^inf ratio of a zero function')
  return lp_norm(GridFunction(f.grid, f.values * g.values), np.inf) / den


def log_convexity_gap(u, s1, s2, theta):
  """||u||_{H^s1}^(1-theta) ||u||_{H^s2}^theta - ||u||_{H^s}, with
  s = (1-theta) s1 + theta s2. Non-negative up to rounding."""
  if not 0 <= theta <= 1:
    raise ValueError('theta={} must lie in [0, 1]'.format(theta))
  s = (1 - theta) * s1 + theta * s2
  bound = fourier.sobolev_norm(u, s1) ** (1 - theta) \
    * fourier.sobolev_norm(u, s2) ** theta
  return bound - fourier.sobolev_norm(u, s)

"""Measurable versions of the interpolation, projection and aliasing
estimates. Each function returns the quantities whose h-dependence the
harness fits."""
from collections import namedtuple

import numpy as np

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.spectral import fourier
from dnls_lab.interp.ContinuumField import ContinuumField
from dnls_lab.interp import shannon

RoundtripResidual = namedtuple('RoundtripResidual', ['total', 'aliasing', 'tail'])
ProjectionGap = namedtuple('ProjectionGap', ['lhs', 'rhs_main', 'rhs_correction'])


def _check_pair(f, g):
  if f.grid != g.grid:
    raise ValueError('Grid mismatch: {} vs {}'.format(f.grid, g.grid))


def aliasing_defect(f, g, s, r=1):
  """||S_h(f g) - (S_h f)(S_h g)||_{H^s(R^d)}.

  The product of two fields band-limited to the coarse torus lives on the
  torus of spacing h/2, so any r >= 1 gives the exact value.
  """
  _check_pair(f, g)
  fg = shannon.shannon_interpolate(f * g, r)
  prod = shannon.shannon_interpolate(f, r) * shannon.shannon_interpolate(g, r)
  return shannon.continuum_sobolev_norm(fg - prod, s)


def power_aliasing_defect(u, p, s):
  """||S_h(|u|^(p-1) u) - |S_h u|^(p-1) S_h u||_{H^s(R^d)} for odd p, on the
  smallest dyadic refinement carrying the p-fold product exactly."""
  if p < 1 or p % 2 != 1:
    raise ValueError('Power p={} must be an odd positive integer'.format(p))
  r = max(1, int(np.ceil(np.log2(p))))
  v = u.values
  su = shannon.shannon_interpolate(u, r)
  lhs = shannon.shannon_interpolate(
    GridFunction(u.grid, np.abs(v) ** (p - 1) * v), r)
  w = su.values
  rhs = ContinuumField(su.fine_grid, np.abs(w) ** (p - 1) * w)
  return shannon.continuum_sobolev_norm(lhs - rhs, s)


def power_subordination_ratio(g, n1, n2, delta):
  """||S_h(g^n1 conj(g)^n2)||_{H^delta} / ||S_h g||_{H^delta}^(n1+n2)."""
  if n1 < 0 or n2 < 0 or n1 + n2 < 1:
    raise ValueError('Need n1, n2 >= 0 and n1 + n2 >= 1, got {}, {}'.format(
      n1, n2))
  if not delta > g.grid.d / 2.:
    raise ValueError('Need delta > d/2, got delta={}'.format(delta))
  v = g.values
  power = GridFunction(g.grid, v ** n1 * np.conj(v) ** n2)
  den = shannon.shannon_sobolev_norm(g, delta) ** (n1 + n2)
  if den == 0:
    raise ValueError('power_subordination_ratio of the zero function')
  return shannon.shannon_sobolev_norm(power, delta) / den


def _strictly_finer_level(f, coarse):
  r = f.fine_grid.refinement_level(coarse)
  if r < 1:
    raise ValueError('Field grid {} is not strictly finer than {}'.format(
      f.fine_grid, coarse))
  return r


def roundtrip_residual(f, coarse, s):
  """||S_h Pi_h f - f||_{H^s(R^d)}, split into the in-torus aliasing part and
  the out-of-torus tail. The two parts have disjoint spectral supports, so
  total^2 = aliasing^2 + tail^2."""
  if s < 0:
    raise ValueError('roundtrip_residual needs s >= 0, got {}'.format(s))
  r = _strictly_finer_level(f, coarse)
  fine = f.fine_grid
  back = shannon.shannon_interpolate(shannon.pointwise_project(f, coarse), r)
  diff = back.spectrum() - f.spectrum()
  inside = ContinuumField.torus_mask(fine, np.pi / coarse.h)
  dens = np.abs(diff) ** 2 * shannon.continuum_weight(fine, s) \
    / (2 * fine.L) ** fine.d
  aliasing = float(np.sqrt(np.sum(dens[inside])))
  tail = float(np.sqrt(np.sum(dens[~inside])))
  return RoundtripResidual(float(np.hypot(aliasing, tail)), aliasing, tail)


def projection_norm_gap(f, coarse, s, delta):
  """(||Pi_h f||_{H^s(hZ^d)}, ||f||_{H^s}, h^(delta-s) ||f||_{H^delta})."""
  if not delta - s > coarse.d / 2.:
    raise ValueError('projection_norm_gap needs delta - s > d/2, got '
                     'delta={}, s={}'.format(delta, s))
  lhs = fourier.sobolev_norm(shannon.pointwise_project(f, coarse), s)
  rhs_main = shannon.continuum_sobolev_norm(f, s)
  rhs_corr = coarse.h ** (delta - s) * shannon.continuum_sobolev_norm(f, delta)
  return ProjectionGap(lhs, rhs_main, rhs_corr)


def projection_fold_norm(f, coarse, s):
  """||Pi_h (f - P f)||_{H^s(hZ^d)}, P the projection onto the coarse torus:
  what the out-of-torus part of f folds into after sampling."""
  _strictly_finer_level(f, coarse)
  tail = f - shannon.low_pass(f, np.pi / coarse.h)
  return fourier.sobolev_norm(shannon.pointwise_project(tail, coarse), s)

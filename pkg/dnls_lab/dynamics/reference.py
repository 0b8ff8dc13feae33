"""Continuum reference solutions psi(t) for convergence measurements.

Every reference exposes `grid` (the fine grid it lives on) and `at(t)`,
returning a ContinuumField.
"""
import numpy as np

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.dynamics.ModelParams import ModelParams
from dnls_lab.dynamics.ModelParams import Integrator
from dnls_lab.dynamics import flow
from dnls_lab.interp.ContinuumField import ContinuumField
from dnls_lab.interp import shannon

SOLITON_RESIDUAL_TOL = 1e-6


class ReferenceNotConvergedError(RuntimeError):
  pass


class SolitonReference(object):
  """psi(t, x) = sqrt(2) sech(x - x0) exp(i t), an exact solution of the
  focusing cubic NLS i psi_t + psi_xx = -|psi|^2 psi."""

  params = ModelParams(p=3, lam=-1, d=1)

  def __init__(self, grid, x0=0.):
    if grid.d != 1:
      raise ValueError('Soliton reference needs d=1, got d={}'.format(grid.d))
    self.grid = grid
    self.x0 = float(x0)

  def profile(self, x):
    return np.sqrt(2.) / np.cosh(x - self.x0)

  def at(self, t):
    x = self.grid.axis()
    return ContinuumField(self.grid, self.profile(x) * np.exp(1j * t))

  def residual(self, t):
    """Relative L^2 residual of the NLS with the exact Fourier Laplacian."""
    psi = self.at(t)
    v = psi.values
    lap = ContinuumField.from_spectrum(
      self.grid, -self.grid.dual_norm_squared() * psi.spectrum()).values
    res = 1j * (1j * v) + lap + np.abs(v) ** 2 * v
    return float(np.linalg.norm(res) / np.linalg.norm(v))

  def validate(self, times):
    for t in times:
      res = self.residual(t)
      if not res <= SOLITON_RESIDUAL_TOL:
        raise ReferenceNotConvergedError(
          'Soliton residual {:.3e} at t={} exceeds {:.0e} on {}'.format(
            res, t, SOLITON_RESIDUAL_TOL, self.grid))


class LinearReference(object):
  """Exact continuum free flow exp(i t Delta) psi0."""

  def __init__(self, psi0):
    self.psi0 = psi0
    self.grid = psi0.fine_grid

  def at(self, t):
    return shannon.continuum_linear_flow(self.psi0, t)


class FineGridReference(object):
  """DNLS integrated on the fine grid of psi0; its Shannon field stands in
  for the NLS solution.

  Args:
    psi0: ContinuumField, the initial datum on the reference grid
    params: ModelParams
    tau: time step of the reference run
    richardson_tol: tolerated ratio between the reference's own error
      (estimated from a run at twice the spacing) and the coarse error it
      is used to measure
  """

  def __init__(self, psi0, params, tau, richardson_tol=0.05):
    self.psi0 = psi0
    self.grid = psi0.fine_grid
    self.params = params
    self.integrator = Integrator(params, tau)
    self.richardson_tol = richardson_tol
    self._t = 0.
    self._u = psi0.as_grid_function()

  def at(self, t):
    if t < self._t:
      self._t, self._u = 0., self.psi0.as_grid_function()
    self._u = flow.integrate(self._u, self.integrator, t - self._t)
    self._t = t
    return ContinuumField(self.grid, self._u.values, np.pi / self.grid.h)

  def richardson_check(self, t, coarse_error, s=0.):
    """Compare with the same run at spacing 2 h_ref. Returns the difference;
    raises ReferenceNotConvergedError when it is not small against
    `coarse_error`."""
    # The companion run sits one level coarser, at 2 h_ref, not at h_ref / 2:
    # its difference to the reference exceeds what a finer companion gives.
    half = self.grid.coarsen(1)
    u0 = shannon.pointwise_project(self.psi0, half)
    u_half = flow.integrate(u0, self.integrator, t)
    diff = shannon.continuum_sobolev_norm(
      self.at(t) - shannon.interpolate_onto(u_half, self.grid), s)
    print('Reference check at t={}: |ref(h) - ref(2h)| = {:.3e}, '
          'smallest coarse error {:.3e}'.format(t, diff, coarse_error))
    if not diff < self.richardson_tol * coarse_error:
      raise ReferenceNotConvergedError(
        'Reference not converged: difference {:.3e} is not below {} x {:.3e}'
        .format(diff, self.richardson_tol, coarse_error))
    return diff


def reference_solution(kind, **setup):
  """Factory.
  Args:
    kind: 'soliton' (setup: grid, params, x0=0., T=1.),
      'fine_grid' (setup: psi0, params, tau, richardson_tol=0.05) or
      'linear' (setup: psi0)
  """
  assert kind in ['soliton', 'fine_grid', 'linear'], \
    "Unsupported reference {}".format(kind)
  if kind == 'soliton':
    params = setup['params']
    if params != SolitonReference.params:
      raise ValueError('Soliton reference needs (lam, d, p) = (-1, 1, 3), '
                       'got {}'.format(params))
    ref = SolitonReference(setup['grid'], setup.get('x0', 0.))
    ref.validate([0., setup.get('T', 1.)])
    return ref
  if kind == 'fine_grid':
    return FineGridReference(setup['psi0'], setup['params'], setup['tau'],
                             setup.get('richardson_tol', 0.05))
  return LinearReference(setup['psi0'])

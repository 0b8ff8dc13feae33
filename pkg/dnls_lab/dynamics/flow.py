"""Strang splitting for DNLS and its conserved quantities.

Both sub-flows are exact: the drift exp(i tau Delta_h) is diagonal in
Fourier, and the kick u -> u exp(-i lam |u|^(p-1) dt) is the exact solution
of i u_t = lam |u|^(p-1) u since |u| is constant along it.
"""
import numpy as np

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice.operators import lp_norm
from dnls_lab.lattice.operators import homogeneous_sobolev_norm_operator
from dnls_lab.spectral.fourier import LinearPropagator


class BlowUpError(RuntimeError):
  """Non-finite values during time integration."""

  def __init__(self, last_healthy_time, last_state=None):
    super(BlowUpError, self).__init__(
      'Blow-up/instability: non-finite values after t={:.17g}'.format(
        last_healthy_time))
    self.last_healthy_time = last_healthy_time
    self.last_state = last_state


def nonlinearity(u, params):
  """lam |u|^(p-1) u, pointwise."""
  v = u.values
  return GridFunction(u.grid, params.lam * np.abs(v) ** (params.p - 1) * v)


def _kick(v, params, dt):
  if params.lam == 0:
    return v
  return v * np.exp(-1j * params.lam * np.abs(v) ** (params.p - 1) * dt)


class StrangStepper(object):
  """Half kick, full drift, half kick on raw arrays, with the drift symbol
  cached per step size."""

  def __init__(self, grid, integrator):
    integrator.params.check_grid(grid)
    self.grid = grid
    self.params = integrator.params
    self._propagators = {}

  def _drift(self, dt):
    prop = self._propagators.get(dt)
    if prop is None:
      prop = LinearPropagator(self.grid, dt)
      self._propagators[dt] = prop
    return prop

  def __call__(self, v, dt):
    v = _kick(v, self.params, dt / 2.)
    v = self._drift(dt)(v)
    return _kick(v, self.params, dt / 2.)


def step_strang(u, integrator):
  stepper = StrangStepper(u.grid, integrator)
  return GridFunction(u.grid, stepper(u.values, integrator.tau))


def num_steps(T, tau):
  """Steps of size tau needed to reach T, the last one possibly shorter."""
  return int(np.ceil(T / tau * (1. - 1e-12)))


def integrate(u0, integrator, T, observers=(), sample_every=None):
  """Advance u0 to time T.

  Args:
    u0: GridFunction
    integrator: Integrator
    T: final time, >= 0
    observers: callables observer(t, u) invoked at t = 0, every
      `sample_every` steps and at t = T
    sample_every: int or None (only the end points)
  Returns:
    u(T) as a GridFunction; observers keep their own records
  """
  T = float(T)
  if not T >= 0:
    raise ValueError('Final time T={} must be >= 0'.format(T))
  if sample_every is not None and sample_every < 1:
    raise ValueError('sample_every must be >= 1, got {}'.format(sample_every))
  for obs in observers:
    obs(0., u0)
  n = num_steps(T, integrator.tau)
  if n == 0:
    return u0
  stepper = StrangStepper(u0.grid, integrator)
  tau = integrator.tau
  v = u0.values
  t = 0.
  for i in range(1, n + 1):
    dt = tau if i < n else T - (n - 1) * tau
    w = stepper(v, dt)
    if not np.all(np.isfinite(w)):
      raise BlowUpError(t, GridFunction(u0.grid, v))
    v = w
    t = T if i == n else i * tau
    if observers and (i == n or (sample_every is not None
                                 and i % sample_every == 0)):
      u = GridFunction(u0.grid, v)
      for obs in observers:
        obs(t, u)
  return GridFunction(u0.grid, v)


def integrate_to_times(u0, integrator, times, observers=()):
  """States at the increasing times `times` (each >= 0), integrating segment
  by segment."""
  states = []
  u = u0
  t_prev = 0.
  for t in times:
    if t < t_prev:
      raise ValueError('times must be increasing, got {} after {}'.format(
        t, t_prev))
    u = integrate(u, integrator, t - t_prev)
    for obs in observers:
      obs(t, u)
    states.append(u)
    t_prev = t
  return states


def mass(u):
  return lp_norm(u, 2) ** 2


def energy(u, params):
  """1/2 ||u||^2_{H^1 dot} + lam/(p+1) ||u||^(p+1)_{L^(p+1)}."""
  kinetic = 0.5 * homogeneous_sobolev_norm_operator(u, 1) ** 2
  if params.lam == 0:
    return kinetic
  p = params.p
  return kinetic + params.lam / (p + 1.) * lp_norm(u, p + 1) ** (p + 1)

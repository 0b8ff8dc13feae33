import numbers

import numpy as np

from dnls_lab.lattice.LatticeGrid import GridFunction


class ModelParams(object):
  """Parameters of i u_t + Delta_h u = lam |u|^(p-1) u.

  Admissible sets:
    lam = +1, d in {1, 2}, p = 2n + 1 (n >= 1)  defocusing
    lam = -1, d = 1, p = 3                      focusing cubic
    lam =  0, d in {1, 2}, any odd p >= 3       linear
  """

  def __init__(self, p=3, lam=1, d=1):
    if not isinstance(p, numbers.Integral) or p < 3 or p % 2 != 1:
      raise ValueError('Power p={} must be an odd integer >= 3'.format(p))
    if lam not in (-1, 0, 1):
      raise ValueError('Sign lam={} must be one of -1, 0, 1'.format(lam))
    if d not in (1, 2):
      raise ValueError('Unsupported dimension d={}'.format(d))
    if lam == -1 and (d, p) != (1, 3):
      raise ValueError(
        'Focusing case is only supported for d=1, p=3, got d={}, p={}'.format(
          d, p))
    self.p = int(p)
    self.lam = int(lam)
    self.d = int(d)

  @property
  def n(self):
    return (self.p - 1) // 2

  @property
  def q(self):
    """u^q conj(u)^(q-1) = |u|^(p-1) u."""
    return (self.p + 1) // 2

  @property
  def is_linear(self):
    return self.lam == 0

  @property
  def is_defocusing(self):
    return self.lam == 1

  def check_grid(self, grid):
    if grid.d != self.d:
      raise ValueError('Model d={} does not match grid d={}'.format(
        self.d, grid.d))

  def to_dict(self):
    return dict(p=self.p, lam=self.lam, d=self.d)

  def __eq__(self, other):
    return isinstance(other, ModelParams) \
      and (self.p, self.lam, self.d) == (other.p, other.lam, other.d)

  def __hash__(self):
    return hash((self.p, self.lam, self.d))

  def __repr__(self):
    return 'ModelParams(p={}, lam={}, d={})'.format(self.p, self.lam, self.d)


class Integrator(object):
  """Time stepper settings. Strang splitting is unconditionally stable, so
  tau is chosen for accuracy only."""

  SCHEMES = ['strang']

  def __init__(self, params, tau, scheme='strang'):
    tau = float(tau)
    if not np.isfinite(tau) or tau <= 0:
      raise ValueError('Time step tau={} must be positive'.format(tau))
    if scheme not in self.SCHEMES:
      raise ValueError('Unsupported scheme {}'.format(scheme))
    self.params = params
    self.tau = tau
    self.scheme = scheme

  def __repr__(self):
    return 'Integrator({!r}, tau={!r}, scheme={!r})'.format(
      self.params, self.tau, self.scheme)


class TimeJet(object):
  """The stack [u, d_t u, ..., d_t^k u] of a DNLS solution at one time."""

  def __init__(self, layers):
    layers = list(layers)
    if len(layers) == 0:
      raise ValueError('TimeJet needs at least the state layer')
    grid = layers[0].grid
    for l in layers:
      if not isinstance(l, GridFunction) or l.grid != grid:
        raise ValueError('TimeJet layers must be GridFunctions on one grid')
    self._layers = tuple(layers)

  @property
  def order(self):
    return len(self._layers) - 1

  @property
  def layers(self):
    return self._layers

  @property
  def state(self):
    return self._layers[0]

  @property
  def grid(self):
    return self._layers[0].grid

  def __getitem__(self, n):
    return self._layers[n]

  def __len__(self):
    return len(self._layers)

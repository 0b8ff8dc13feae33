import os.path as osp

import numpy as np
from scipy import stats

from dnls_lab.dynamics import flow
from dnls_lab.spectral.fourier import sobolev_norm
from dnls_lab.utils.utils import may_make_dir


class GrowthSeries(object):
  """||u(t_i)||_{H^m} at increasing times, with the log-log slope fitted on
  the window t >= fit_start.

  Args:
    times: strictly increasing positive times
    norms: positive H^m norms
    m: Sobolev order
    h1_norms: optional H^1 norms at the same times
    fit_start: start of the fit window, default T/2
  """

  def __init__(self, times, norms, m, h1_norms=None, fit_start=None):
    times = np.asarray(times, dtype=np.float64)
    norms = np.asarray(norms, dtype=np.float64)
    if times.shape != norms.shape or times.ndim != 1:
      raise ValueError('times and norms must be 1-d arrays of equal length')
    if np.any(np.diff(times) <= 0) or np.any(times <= 0):
      raise ValueError('times must be positive and strictly increasing')
    if np.any(norms <= 0):
      raise ValueError('norms must be positive')
    self.times = times
    self.norms = norms
    self.m = m
    self.h1_norms = None if h1_norms is None \
      else np.asarray(h1_norms, dtype=np.float64)
    self.fit_start = times[-1] / 2. if fit_start is None else fit_start
    self.fit_exponent = self._fit(self.norms)

  def _fit(self, norms):
    sel = self.times >= self.fit_start
    if np.sum(sel) < 2:
      raise ValueError('Fit window t >= {} holds fewer than 2 samples'.format(
        self.fit_start))
    res = stats.linregress(np.log(self.times[sel]), np.log(norms[sel]))
    return float(res.slope)

  def h1_fit_exponent(self):
    if self.h1_norms is None:
      return None
    return self._fit(self.h1_norms)

  def to_csv(self, path):
    """Header t,Hm_norm."""
    may_make_dir(osp.dirname(osp.abspath(path)))
    np.savetxt(path, np.column_stack([self.times, self.norms]), fmt='%.17g',
               delimiter=',', header='t,Hm_norm', comments='')


def growth_track(u0, m, T, samples, integrator):
  """Integrate u0 over [0, T] in `samples` equal segments and record the H^m
  (and H^1) norm at the end of each."""
  if m < 1:
    raise ValueError('Growth order m={} must be >= 1'.format(m))
  if samples < 4:
    raise ValueError('Need at least 4 samples, got {}'.format(samples))
  if not T > 0:
    raise ValueError('Need T > 0, got {}'.format(T))
  times = T * np.arange(1, samples + 1) / float(samples)
  norms, h1 = [], []
  u = u0
  t_prev = 0.
  for t in times:
    u = flow.integrate(u, integrator, t - t_prev)
    t_prev = t
    norms.append(sobolev_norm(u, m))
    h1.append(sobolev_norm(u, 1))
  return GrowthSeries(times, norms, m, h1_norms=h1)


def h1_energy_bound(u0, params):
  """sqrt(mass + 2 E), the H^1 bound conservation gives in the defocusing
  and linear cases; None when the energy does not control H^1."""
  if params.lam < 0:
    return None
  return float(np.sqrt(flow.mass(u0) + 2. * flow.energy(u0, params)))

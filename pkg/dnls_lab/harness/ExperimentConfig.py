"""Experiment configuration files.

Flat INI text (`key = value` under section headers), parsed with
configparser. Every key, its type and its default:

  [experiment]
    kind            converge | linear-flow | interp-test | aliasing | growth |
                    functional-check | simulate
    name            report name (default: kind)
    seed            int, 1
  [model]
    p               odd int >= 3, 3
    lam             -1 | 0 | 1, 1
    d               1 | 2, 1
  [grid]
    L               box half-width, 6.4
    h_values        comma-separated spacings, each half the previous
    r               refinement levels of the data grid below min(h), 3
    r_ref           refinement levels of the reference grid below min(h), 5
    adaptive        bool, refine the data grid until the finest measurement
                    moves by less than 1%, false
  [data]
    kind            decay | soliton | gaussian | state, decay
    delta           regularity of decay data, 2.1
    amplitude       ||psi0||_{H^delta} for decay data, peak for gaussian, 1.0
    envelope        Gaussian envelope width as a fraction of L (0: none), 1/6
    width           gaussian width, 1.0
    velocity        gaussian carrier wave number, 0.0
    x0              soliton / gaussian centre, 0.0
    band_limited    bool, low-pass decay data to half the coarsest torus, false
    state_file      input state for simulate (binary or .csv), ''
  [time]
    T               final time, 1.0
    tau_factor      tau = tau_factor * h^2 when tau is 0, 0.1
    tau             explicit time step, 0.0
    snapshots       Duhamel quadrature nodes of the converge channels, 32
    samples         growth samples, 50
    sample_every    steps between simulate records (0: end points only), 0
  [checks]
    s               measurement regularity, 0.0
    m               growth Sobolev order, 1
    slope_tolerance 0.2
    trend_tolerance 0.15
    subordination_tolerance 0.1
    symbol_law      bool, linear-flow asserts the h^2 symbol law, false
    soliton_slope   asserted soliton order, 2.0
    max_terminal_error  soliton error bound at the finest h, 1e-2
    richardson_tol  0.05
    n_seeds         functional-check seeds, 20
    gn_q, gn_s      Gagliardo-Nirenberg exponents, 4, 1.0
    strichartz_q, strichartz_r   admissible pair (default 6, inf for d=1;
                    3, inf for d=2)
    strichartz_T    1.0
    bilinear_s, bilinear_s1, bilinear_s2   0.5, 1.0, 1.0
    linf_eps        0.1
    mass_tolerance  relative mass drift allowed in simulate, 1e-10
  [report]
    record_runtime  bool, write the wall time into the report, false
    save_trajectory bool, simulate stores snapshots in HDF5, false
"""
from collections import OrderedDict
import configparser
import os.path as osp

import numpy as np

from dnls_lab.dynamics.ModelParams import ModelParams
from dnls_lab.lattice.LatticeGrid import LatticeGrid
from dnls_lab.utils.utils import str2bool

KINDS = ['converge', 'linear-flow', 'interp-test', 'aliasing', 'growth',
         'functional-check', 'simulate']
SWEEP_KINDS = ['converge', 'linear-flow', 'interp-test', 'aliasing',
               'functional-check']
DATA_KINDS = ['decay', 'soliton', 'gaussian', 'state']


def _float(v):
  v = v.strip().lower()
  if v in ('inf', '+inf', 'infinity'):
    return np.inf
  return float(v)


def _float_list(v):
  return [_float(x) for x in v.split(',') if x.strip()]


def _str(v):
  return v.strip()


# (section, key) -> (parser, default); None default means required.
SCHEMA = OrderedDict([
  (('experiment', 'kind'), (_str, '')),
  (('experiment', 'name'), (_str, '')),
  (('experiment', 'seed'), (int, 1)),
  (('model', 'p'), (int, 3)),
  (('model', 'lam'), (int, 1)),
  (('model', 'd'), (int, 1)),
  (('grid', 'L'), (_float, 6.4)),
  (('grid', 'h_values'), (_float_list, None)),
  (('grid', 'r'), (int, 3)),
  (('grid', 'r_ref'), (int, 5)),
  (('grid', 'adaptive'), (str2bool, False)),
  (('data', 'kind'), (_str, 'decay')),
  (('data', 'delta'), (_float, 2.1)),
  (('data', 'amplitude'), (_float, 1.0)),
  (('data', 'envelope'), (_float, 1. / 6)),
  (('data', 'width'), (_float, 1.0)),
  (('data', 'velocity'), (_float, 0.0)),
  (('data', 'x0'), (_float, 0.0)),
  (('data', 'band_limited'), (str2bool, False)),
  (('data', 'state_file'), (_str, '')),
  (('time', 'T'), (_float, 1.0)),
  (('time', 'tau_factor'), (_float, 0.1)),
  (('time', 'tau'), (_float, 0.0)),
  (('time', 'snapshots'), (int, 32)),
  (('time', 'samples'), (int, 50)),
  (('time', 'sample_every'), (int, 0)),
  (('checks', 's'), (_float, 0.0)),
  (('checks', 'm'), (int, 1)),
  (('checks', 'slope_tolerance'), (_float, 0.2)),
  (('checks', 'trend_tolerance'), (_float, 0.15)),
  (('checks', 'subordination_tolerance'), (_float, 0.1)),
  (('checks', 'symbol_law'), (str2bool, False)),
  (('checks', 'soliton_slope'), (_float, 2.0)),
  (('checks', 'max_terminal_error'), (_float, 1e-2)),
  (('checks', 'richardson_tol'), (_float, 0.05)),
  (('checks', 'n_seeds'), (int, 20)),
  (('checks', 'gn_q'), (_float, 4.0)),
  (('checks', 'gn_s'), (_float, 1.0)),
  (('checks', 'strichartz_q'), (_float, 0.0)),
  (('checks', 'strichartz_r'), (_float, 0.0)),
  (('checks', 'strichartz_T'), (_float, 1.0)),
  (('checks', 'bilinear_s'), (_float, 0.5)),
  (('checks', 'bilinear_s1'), (_float, 1.0)),
  (('checks', 'bilinear_s2'), (_float, 1.0)),
  (('checks', 'linf_eps'), (_float, 0.1)),
  (('checks', 'mass_tolerance'), (_float, 1e-10)),
  (('report', 'record_runtime'), (str2bool, False)),
  (('report', 'save_trajectory'), (str2bool, False)),
])

# Machine-specific entries kept out of the report's config echo.
NOT_ECHOED = [('data', 'state_file')]


class ExperimentConfig(object):
  """Resolved configuration. Entries are attributes named after their key;
  clashing keys are disambiguated by section (`data_kind`, `data_delta` is
  exposed as `delta`, ...)."""

  def __init__(self, entries, path=''):
    self.entries = OrderedDict(entries)
    self.path = path
    self._resolve()

  @classmethod
  def from_file(cls, path, overrides=None):
    if not osp.exists(path):
      raise IOError('Config file {} does not exist'.format(path))
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
      with open(path) as f:
        parser.read_file(f)
    except configparser.Error as e:
      raise ValueError('Cannot parse {}: {}'.format(path, e))
    return cls.from_parser(parser, path, overrides)

  @classmethod
  def from_string(cls, text, overrides=None):
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
      parser.read_string(text)
    except configparser.Error as e:
      raise ValueError('Cannot parse config: {}'.format(e))
    return cls.from_parser(parser, '', overrides)

  @classmethod
  def from_parser(cls, parser, path='', overrides=None):
    raw = {}
    for section in parser.sections():
      for key, value in parser.items(section):
        if (section, key) not in SCHEMA:
          raise ValueError('Unknown config entry [{}] {}'.format(section, key))
        raw[(section, key)] = value
    entries = OrderedDict()
    for (section, key), (conv, default) in SCHEMA.items():
      if (section, key) in raw:
        try:
          entries[(section, key)] = conv(raw[(section, key)])
        except ValueError:
          raise ValueError('Bad value for [{}] {}: {!r}'.format(
            section, key, raw[(section, key)]))
      elif default is None:
        raise ValueError('Missing required config entry [{}] {}'.format(
          section, key))
      else:
        entries[(section, key)] = default
    for k, v in (overrides or {}).items():
      if k not in SCHEMA:
        raise ValueError('Unknown override {}'.format(k))
      entries[k] = v
    return cls(entries, path)

  def _resolve(self):
    e = self.entries
    self.kind = e[('experiment', 'kind')]
    self.name = e[('experiment', 'name')] or self.kind
    self.seed = e[('experiment', 'seed')]
    self.params = ModelParams(p=e[('model', 'p')], lam=e[('model', 'lam')],
                              d=e[('model', 'd')])
    self.d = self.params.d
    self.L = e[('grid', 'L')]
    self.h_values = list(e[('grid', 'h_values')])
    self.r = e[('grid', 'r')]
    self.r_ref = e[('grid', 'r_ref')]
    self.adaptive = e[('grid', 'adaptive')]
    self.data_kind = e[('data', 'kind')]
    self.delta = e[('data', 'delta')]
    self.amplitude = e[('data', 'amplitude')]
    self.envelope = e[('data', 'envelope')]
    self.width = e[('data', 'width')]
    self.velocity = e[('data', 'velocity')]
    self.x0 = e[('data', 'x0')]
    self.band_limited = e[('data', 'band_limited')]
    self.state_file = e[('data', 'state_file')]
    self.T = e[('time', 'T')]
    self.tau_factor = e[('time', 'tau_factor')]
    self.tau_fixed = e[('time', 'tau')]
    self.snapshots = e[('time', 'snapshots')]
    self.samples = e[('time', 'samples')]
    self.sample_every = e[('time', 'sample_every')]
    self.s = e[('checks', 's')]
    self.m = e[('checks', 'm')]
    self.slope_tolerance = e[('checks', 'slope_tolerance')]
    self.trend_tolerance = e[('checks', 'trend_tolerance')]
    self.subordination_tolerance = e[('checks', 'subordination_tolerance')]
    self.symbol_law = e[('checks', 'symbol_law')]
    self.soliton_slope = e[('checks', 'soliton_slope')]
    self.max_terminal_error = e[('checks', 'max_terminal_error')]
    self.richardson_tol = e[('checks', 'richardson_tol')]
    self.n_seeds = e[('checks', 'n_seeds')]
    self.gn_q = e[('checks', 'gn_q')]
    self.gn_s = e[('checks', 'gn_s')]
    default_pair = (6., np.inf) if self.d == 1 else (3., np.inf)
    self.strichartz_q = e[('checks', 'strichartz_q')] or default_pair[0]
    self.strichartz_r = e[('checks', 'strichartz_r')] or default_pair[1]
    self.strichartz_T = e[('checks', 'strichartz_T')]
    self.bilinear_s = e[('checks', 'bilinear_s')]
    self.bilinear_s1 = e[('checks', 'bilinear_s1')]
    self.bilinear_s2 = e[('checks', 'bilinear_s2')]
    self.linf_eps = e[('checks', 'linf_eps')]
    self.mass_tolerance = e[('checks', 'mass_tolerance')]
    self.record_runtime = e[('report', 'record_runtime')]
    self.save_trajectory = e[('report', 'save_trajectory')]

  def set_kind(self, kind):
    self.entries[('experiment', 'kind')] = kind
    if not self.entries[('experiment', 'name')]:
      self.name = kind
    self.kind = kind

  def set_seed(self, seed):
    self.entries[('experiment', 'seed')] = int(seed)
    self.seed = int(seed)

  def tau(self, h):
    return self.tau_fixed if self.tau_fixed > 0 else self.tau_factor * h ** 2

  def grid(self, h):
    return LatticeGrid.from_box(self.d, self.L, h)

  @property
  def h_min(self):
    return min(self.h_values)

  def data_grid(self):
    """Dyadic refinement of every sweep grid carrying the data."""
    return self.grid(self.h_min).refine(self.r)

  def reference_grid(self):
    return self.grid(self.h_min).refine(self.r_ref)

  def validate(self):
    if self.kind not in KINDS:
      raise ValueError('Unknown experiment kind {!r}, expected one of {}'
                       .format(self.kind, KINDS))
    if self.data_kind not in DATA_KINDS:
      raise ValueError('Unknown data kind {!r}'.format(self.data_kind))
    if len(self.h_values) < 1 or any(not h > 0 for h in self.h_values):
      raise ValueError('h_values must hold positive spacings')
    if self.kind in SWEEP_KINDS:
      hs = self.h_values
      if len(hs) < 3:
        raise ValueError('A sweep needs at least 3 h values, got {}'.format(
          len(hs)))
      for a, b in zip(hs[:-1], hs[1:]):
        if abs(b - a / 2.) > 1e-12 * a:
          raise ValueError('h_values must halve at each entry, got {}'
                           .format(hs))
    for h in self.h_values:
      self.grid(h)
    if self.r < 1 or self.r_ref < 1:
      raise ValueError('Refinement levels r, r_ref must be >= 1')
    if self.kind in SWEEP_KINDS and self.data_kind == 'state':
      raise ValueError('A {} sweep needs continuum data, not a state file'
                       .format(self.kind))
    if self.kind in ['converge', 'linear-flow', 'interp-test', 'aliasing']:
      if not 0 <= self.s < self.delta - self.d / 2.:
        raise ValueError('Need 0 <= s < delta - d/2, got s={}, delta={}, d={}'
                         .format(self.s, self.delta, self.d))
    if self.kind == 'converge' and self.data_kind == 'soliton' \
        and self.params != ModelParams(3, -1, 1):
      raise ValueError('A soliton reference needs (lam, d, p) = (-1, 1, 3)')
    if self.data_kind == 'state' and not self.state_file:
      raise ValueError('Data kind state needs [data] state_file')
    if not self.T >= 0:
      raise ValueError('Final time T={} must be >= 0'.format(self.T))
    if self.kind == 'growth' and not self.m >= 1:
      raise ValueError('Growth order m={} must be >= 1'.format(self.m))
    return self

  def echo(self):
    """Config entries for the report, `section.key` -> value."""
    out = OrderedDict()
    for (section, key), value in self.entries.items():
      if (section, key) in NOT_ECHOED:
        continue
      if isinstance(value, float) and not np.isfinite(value):
        value = str(value)
      out['{}.{}'.format(section, key)] = value
    return out

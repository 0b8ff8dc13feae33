"""Experiment reports: per-h measurements, fitted rates, checks, and their
JSON / CSV / gnuplot emission."""
from collections import OrderedDict
import json
import os.path as osp

import numpy as np
from scipy import stats

from dnls_lab.utils.utils import may_make_dir
from dnls_lab.utils.utils import float_str

ERROR_FLOOR = 1e-16
DEGENERATE_LEVEL = 1e-10


def fit_loglog_slope(points):
  """Least squares line through (log h, log e).

  Args:
    points: iterable of (h, e) pairs, h > 0, e >= 0
  Returns:
    (slope, intercept, r2); a constant series is fitted exactly, r2 = 1
  """
  points = list(points)
  if len(points) < 3:
    raise ValueError('Slope fit needs at least 3 points, got {}'.format(
      len(points)))
  h = np.array([p[0] for p in points], dtype=np.float64)
  e = np.array([p[1] for p in points], dtype=np.float64)
  if np.any(~np.isfinite(h)) or np.any(h <= 0):
    raise ValueError('Slope fit needs positive h, got {}'.format(h))
  if np.any(~np.isfinite(e)) or np.any(e < 0):
    raise ValueError('Slope fit needs finite non-negative values, got {}'
                     .format(e))
  if np.any(e <= ERROR_FLOOR):
    print('[Warning] {} value(s) at or below {:.0e} floored for the slope fit'
          .format(int(np.sum(e <= ERROR_FLOOR)), ERROR_FLOOR))
    e = np.maximum(e, ERROR_FLOOR)
  x, y = np.log(h), np.log(e)
  res = stats.linregress(x, y)
  fitted = res.intercept + res.slope * x
  ss_tot = np.sum((y - np.mean(y)) ** 2)
  ss_res = np.sum((y - fitted) ** 2)
  r2 = 1. if ss_tot == 0 else 1. - ss_res / ss_tot
  return float(res.slope), float(res.intercept), float(r2)


def _clean(x):
  """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
  if isinstance(x, dict):
    return OrderedDict((k, _clean(v)) for k, v in x.items())
  if isinstance(x, (list, tuple)):
    return [_clean(v) for v in x]
  if isinstance(x, (np.bool_, bool)):
    return bool(x)
  if isinstance(x, (np.integer,)):
    return int(x)
  if isinstance(x, (float, np.floating)):
    x = float(x)
    return x if np.isfinite(x) else None
  return x


class ExperimentReport(object):
  """What an experiment measured and what it asserted.

  `channels` maps a channel name to its values along `sweep` (the h values,
  or any other abscissa). Checks are recorded with `check_*`; the report
  passes when every recorded check passes.
  """

  def __init__(self, name, kind, config=None):
    self.name = name
    self.kind = kind
    self.config = OrderedDict(config or {})
    self.sweep = []
    self.channels = OrderedDict()
    self.slopes = OrderedDict()
    self.exponents = OrderedDict()
    self.checks = []
    self.constant_fit = OrderedDict()
    self.notes = []
    self.tables = OrderedDict()
    self.runtime_s = None
    self.degenerate = False

  ###########
  # Records #
  ###########

  def set_sweep(self, values):
    self.sweep = [float(v) for v in values]

  def add_channel(self, name, values):
    values = [float(v) for v in values]
    if len(values) != len(self.sweep):
      raise ValueError('Channel {} has {} values for a sweep of {}'.format(
        name, len(values), len(self.sweep)))
    self.channels[name] = values

  def fit_channel(self, name, absolute=False):
    """Fit the log-log slope of a channel along the sweep."""
    values = self.channels[name]
    if absolute:
      values = [abs(v) for v in values]
    slope, intercept, r2 = fit_loglog_slope(zip(self.sweep, values))
    self.slopes[name] = OrderedDict(
      [('slope', slope), ('intercept', intercept), ('r2', r2)])
    return slope

  def set_exponent(self, name, value, tag):
    """Theoretical exponent of a channel, quoted with the estimate it comes
    from."""
    self.exponents[name] = OrderedDict([('value', float(value)), ('tag', tag)])

  def add_note(self, msg):
    self.notes.append(msg)

  def add_table(self, name, header, rows, logscale=False):
    """A CSV table; `rows` is a list of equal-length sequences."""
    rows = [list(r) for r in rows]
    for r in rows:
      if len(r) != len(header):
        raise ValueError('Table {}: row of {} entries for {} columns'.format(
          name, len(r), len(header)))
    self.tables[name] = dict(header=list(header), rows=rows, logscale=logscale)

  ##########
  # Checks #
  ##########

  def _check(self, name, kind, value, passed, **target):
    entry = OrderedDict([('name', name), ('kind', kind), ('value', value)])
    entry.update(sorted(target.items()))
    entry['passed'] = bool(passed)
    self.checks.append(entry)
    print('{:<8} {} [{}] value={} {}'.format(
      'pass' if passed else 'FAIL', name, kind,
      '{:.6g}'.format(value) if value is not None else '-',
      ', '.join('{}={}'.format(k, v) for k, v in sorted(target.items()))))
    return bool(passed)

  def check_lower(self, name, value, target, tolerance):
    """value >= target - tolerance."""
    return self._check(name, 'lower', value, value >= target - tolerance,
                       target=target, tolerance=tolerance)

  def check_band(self, name, value, target, tolerance):
    """|value - target| <= tolerance."""
    return self._check(name, 'band', value, abs(value - target) <= tolerance,
                       target=target, tolerance=tolerance)

  def check_flat(self, name, value, tolerance):
    return self._check(name, 'flat', value, abs(value) <= tolerance,
                       target=0., tolerance=tolerance)

  def check_upper(self, name, value, bound):
    return self._check(name, 'upper', value, value <= bound, bound=bound)

  def check_exact(self, name, passed, value=None):
    return self._check(name, 'exact', value, passed)

  def mark_degenerate(self, level=DEGENERATE_LEVEL):
    """True (and recorded) when every channel value is at most `level`: the
    sweep measured nothing but rounding."""
    values = [abs(v) for vs in self.channels.values() for v in vs]
    self.degenerate = len(values) > 0 and max(values) <= level
    if self.degenerate:
      self.add_note('All measurements <= {:.0e}: degenerate-pass'.format(level))
    return self.degenerate

  @property
  def passed(self):
    return all(c['passed'] for c in self.checks)

  @property
  def status(self):
    if not self.passed:
      return 'fail'
    return 'degenerate-pass' if self.degenerate else 'pass'

  ##########
  # Output #
  ##########

  def to_dict(self):
    return _clean(OrderedDict([
      ('name', self.name),
      ('kind', self.kind),
      ('config', self.config),
      ('sweep', self.sweep),
      ('channels', self.channels),
      ('slopes', self.slopes),
      ('exponents', self.exponents),
      ('constant_fit', self.constant_fit),
      ('checks', self.checks),
      ('notes', self.notes),
      ('status', self.status),
      ('pass', self.passed),
      ('runtime_s', self.runtime_s),
    ]))

  def to_json(self):
    return json.dumps(self.to_dict(), indent=2)

  def save_json(self, path):
    may_make_dir(osp.dirname(osp.abspath(path)))
    with open(path, 'w') as f:
      f.write(self.to_json())
      f.write('\n')

  def channel_table(self):
    header = ['h'] + list(self.channels.keys())
    rows = [[h] + [self.channels[c][i] for c in self.channels]
            for i, h in enumerate(self.sweep)]
    return header, rows

  def save_csv(self, out_dir):
    """Write `channels.csv` and every extra table, each with a gnuplot script
    next to it. Returns the CSV paths."""
    may_make_dir(out_dir)
    tables = OrderedDict()
    if len(self.channels) > 0:
      header, rows = self.channel_table()
      tables['channels'] = dict(header=header, rows=rows, logscale=True)
    tables.update(self.tables)
    paths = []
    for name, t in tables.items():
      path = osp.join(out_dir, '{}.csv'.format(name))
      with open(path, 'w') as f:
        f.write(','.join(t['header']) + '\n')
        for r in t['rows']:
          f.write(','.join(float_str(v) for v in r) + '\n')
      write_gnuplot_script(osp.join(out_dir, '{}.gp'.format(name)),
                           osp.basename(path), t['header'], t['logscale'])
      paths.append(path)
    return paths

  def log_to_tensorboard(self, writer):
    """One scalar group per channel, indexed by sweep position."""
    for i, h in enumerate(self.sweep):
      writer.add_scalars(
        '{}/channels'.format(self.name),
        dict((c, vs[i]) for c, vs in self.channels.items()
             if np.isfinite(vs[i])),
        i)
      writer.add_scalar('{}/h'.format(self.name), h, i)
    for name, fit in self.slopes.items():
      writer.add_scalar('{}/slope/{}'.format(self.name, name), fit['slope'])

  def summary(self):
    lines = ['Report {} ({}): {}'.format(self.name, self.kind, self.status)]
    for name, fit in self.slopes.items():
      exp = self.exponents.get(name)
      r2 = fit.get('r2')
      lines.append('  {:<24} slope {:.4f}{}{}'.format(
        name, fit['slope'], '' if r2 is None else ' (r2 {:.4f})'.format(r2),
        '' if exp is None else ', expected {:.4f} [{}]'.format(
          exp['value'], exp['tag'])))
    for note in self.notes:
      lines.append('  note: {}'.format(note))
    return '\n'.join(lines)


def write_gnuplot_script(path, csv_name, header, logscale=False):
  """Plot every column of `csv_name` against the first one."""
  lines = [
    '# Plots {}'.format(csv_name),
    "set datafile separator ','",
    'set key autotitle columnhead',
    "set xlabel '{}'".format(header[0]),
  ]
  if logscale:
    lines.append('set logscale xy')
  plots = ["'{}' using 1:{} with linespoints".format(csv_name, j + 1)
           for j in range(1, len(header))]
  lines.append('plot ' + ', \\\n     '.join(plots))
  with open(path, 'w') as f:
    f.write('\n'.join(lines) + '\n')

"""Experiment drivers. Every run_* takes a validated ExperimentConfig and
returns an ExperimentReport; sweep points are measured in parallel through
the work queue and merged in h order."""
from collections import OrderedDict
import os.path as osp

import numpy as np
from scipy.integrate import trapezoid

from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice import io
from dnls_lab.lattice.operators import check_boundary_mass
from dnls_lab.spectral import fourier
from dnls_lab.interp.ContinuumField import ContinuumField
from dnls_lab.interp import shannon
from dnls_lab.interp import estimates
from dnls_lab.dynamics.ModelParams import Integrator
from dnls_lab.dynamics import flow
from dnls_lab.dynamics.observers import ConservationObserver
from dnls_lab.dynamics.observers import SnapshotObserver
from dnls_lab.dynamics.reference import reference_solution
from dnls_lab.energies import functional
from dnls_lab.energies.growth import growth_track
from dnls_lab.energies.growth import h1_energy_bound
from dnls_lab.harness.ExperimentReport import ExperimentReport
from dnls_lab.harness.WorkQueue import run_jobs
from dnls_lab.harness import data
from dnls_lab.utils.utils import measure_time

CONTINUUM_LIMIT_TAG = 'continuum-limit rate (delta-s)/2 - d/4'
LINEAR_FLOW_TAG = 'linear-flow rate (delta-s)/2 - d/4'
SYMBOL_LAW_TAG = 'symbol error t h^2 |xi|^4'
SMOOTH_CONSISTENCY_TAG = 'second-order consistency of Delta_h on smooth data'
INTERP_TAG = 'interpolation/projection/aliasing rate delta - s'
SUBORDINATION_TAG = 'power subordination, bounded uniformly in h'
GROWTH_TAG = 'polynomial growth bound 2(m-1) + eps'
UNIFORM_TAG = 'uniform in h'

# (q, r, d, admissible) rows of the exact admissibility table.
ADMISSIBILITY_TABLE = [
  (6, np.inf, 1, True),
  (12, 4, 1, True),
  (4, np.inf, 1, False),
  (2, 2, 1, False),
  (np.inf, 2, 1, False),
  (6, 4, 1, False),
  (3, np.inf, 2, True),
  (6, 4, 2, True),
  (4, 4, 2, False),
  (2, 2, 2, False),
  (6, 3, 2, False),
]

# GN ratio of a unit delta, q = 4, s = 1, for d = 1 and d = 2.
GN_DELTA_ORACLE = {1: 2. ** -0.125, 2: 2. ** -0.5}


def _new_report(cfg):
  return ExperimentReport(cfg.name, cfg.kind, cfg.echo())


def continuum_rate(cfg):
  return (cfg.delta - cfg.s) / 2. - cfg.d / 4.


def _check_kind(cfg, kinds):
  if cfg.kind not in kinds:
    raise ValueError('Config of kind {!r} passed to a {} experiment'.format(
      cfg.kind, '/'.join(kinds)))


def _add_points(report, points):
  for name in points[0].keys():
    report.add_channel(name, [p[name] for p in points])


###############
# Convergence #
###############

def _duhamel_channels(cfg, grid, times, states):
  """|lam| int_0^T of the propagator mismatch (J2) and of the aliasing
  defect (J3) of the nonlinearity, by the trapezoid rule over the
  snapshots."""
  params, T, s = cfg.params, cfg.T, cfg.s
  p = params.p
  sigma = fourier.sigma_array(grid)
  xi2 = grid.dual_norm_squared()
  weight = shannon.continuum_weight(grid, s)
  j2, j3 = [], []
  for t, u in zip(times, states):
    v = u.values
    g = fourier.dft(GridFunction(grid, np.abs(v) ** (p - 1) * v))
    gap = np.abs(np.exp(-1j * (T - t) * sigma)
                 - np.exp(-1j * (T - t) * xi2)) ** 2
    j2.append(g.norm(weight * gap))
    j3.append(estimates.power_aliasing_defect(u, p, s))
  lam = abs(params.lam)
  return lam * trapezoid(j2, times), lam * trapezoid(j3, times)


def _converge_point(cfg, grid, psi0, psi_T, psi_free_T):
  params, T, s = cfg.params, cfg.T, cfg.s
  fine = psi0.fine_grid
  integrator = Integrator(params, cfg.tau(grid.h))
  u0 = shannon.pointwise_project(psi0, grid)
  times = T * np.arange(cfg.snapshots + 1) / float(cfg.snapshots)
  with measure_time('Integrating on {} to T={}, tau={:.3e}...'.format(
      grid, T, integrator.tau)):
    states = flow.integrate_to_times(u0, integrator, times)
  total = shannon.continuum_sobolev_norm(
    shannon.interpolate_onto(states[-1], fine) - psi_T, s)
  j1 = shannon.continuum_sobolev_norm(
    shannon.interpolate_onto(fourier.linear_flow(u0, T), fine) - psi_free_T, s)
  if params.is_linear:
    j2, j3 = 0., 0.
  else:
    j2, j3 = _duhamel_channels(cfg, grid, times, states)
  return OrderedDict([('total', total), ('J1', j1), ('J2', j2), ('J3', j3),
                      ('J4', total - j1 - j2 - j3)])


def run_convergence(cfg, num_threads=1):
  """||S_h u(T) - psi(T)||_{H^s} over the h sweep, split into the free-flow
  channel J1, the propagator channel J2, the aliasing channel J3 and the
  remainder J4 = total - J1 - J2 - J3."""
  _check_kind(cfg, ['converge'])
  params, T = cfg.params, cfg.T
  report = _new_report(cfg)
  if cfg.data_kind == 'soliton':
    fine = cfg.data_grid()
    ref = reference_solution('soliton', grid=fine, params=params, x0=cfg.x0,
                             T=T)
    psi0 = ref.at(0.)
  elif params.is_linear:
    fine = cfg.data_grid()
    psi0 = data.initial_field(cfg, fine)
    ref = reference_solution('linear', psi0=psi0)
  else:
    fine = cfg.reference_grid()
    psi0 = data.initial_field(cfg, fine)
    ref = reference_solution('fine_grid', psi0=psi0, params=params,
                             tau=cfg.tau(cfg.h_min) / 4.,
                             richardson_tol=cfg.richardson_tol)
  check_boundary_mass(psi0.as_grid_function(), label='initial data')
  with measure_time('Computing the reference solution at T={} on {}...'.format(
      T, fine)):
    psi_T = ref.at(T)
  psi_free_T = shannon.continuum_linear_flow(psi0, T)

  points = run_jobs(
    lambda grid: _converge_point(cfg, grid, psi0, psi_T, psi_free_T),
    data.sweep_grids(cfg), num_threads)
  report.set_sweep(cfg.h_values)
  _add_points(report, points)

  slope = report.fit_channel('total')
  report.fit_channel('J1')
  if params.is_linear:
    report.add_note('Linear model: J2 = J3 = 0 and J4 is rounding only')
  else:
    report.fit_channel('J2')
    report.fit_channel('J3')
    report.fit_channel('J4', absolute=True)
  total = report.channels['total']
  if cfg.data_kind == 'soliton':
    report.set_exponent('total', cfg.soliton_slope, SMOOTH_CONSISTENCY_TAG)
    report.check_lower('total_slope', slope, cfg.soliton_slope,
                       cfg.slope_tolerance)
    report.check_upper('terminal_error', total[-1], cfg.max_terminal_error)
  else:
    rate = continuum_rate(cfg)
    report.set_exponent('total', rate, CONTINUUM_LIMIT_TAG)
    report.set_exponent('J1', rate, LINEAR_FLOW_TAG)
    report.check_lower('total_slope', slope, rate, cfg.slope_tolerance)
  if hasattr(ref, 'richardson_check'):
    with measure_time('Checking the reference against spacing 2 h_ref...'):
      diff = ref.richardson_check(T, min(total), cfg.s)
    report.add_note('Reference self-difference {:.3e} against smallest error '
                    '{:.3e}'.format(diff, min(total)))
  report.add_note('T is fixed and only h is swept: the exponential-in-time '
                  'growth of the error constant is not measured')
  return report


###############
# Linear flow #
###############

def _symbol_bound(psi0, grid, T, s):
  """T h^2 / 12 ||(|xi|^4) P_h psi0||_{H^s}, a bound of the symbol error
  |xi|^2 - sigma_h <= h^2 |xi|^4 / 12 applied for time T."""
  fine = psi0.fine_grid
  low = shannon.low_pass(psi0, np.pi / grid.h)
  lifted = ContinuumField.from_spectrum(
    fine, fine.dual_norm_squared() ** 2 * low.spectrum())
  return T * grid.h ** 2 / 12. * shannon.continuum_sobolev_norm(lifted, s)


def run_linear_flow(cfg, num_threads=1):
  """||S_h exp(i T Delta_h) Pi_h psi0 - exp(i T Delta) psi0||_{H^s} over
  the h sweep."""
  _check_kind(cfg, ['linear-flow'])
  T, s = cfg.T, cfg.s
  report = _new_report(cfg)
  fine = data.data_grid(cfg, lambda f, grid: estimates.roundtrip_residual(
    f, grid, s).total)
  psi0 = data.initial_field(cfg, fine)
  psi_T = shannon.continuum_linear_flow(psi0, T)

  def measure(grid):
    uT = fourier.linear_flow(shannon.pointwise_project(psi0, grid), T)
    err = shannon.continuum_sobolev_norm(
      shannon.interpolate_onto(uT, fine) - psi_T, s)
    return OrderedDict([('error', err),
                        ('symbol_bound', _symbol_bound(psi0, grid, T, s))])

  points = run_jobs(measure, data.sweep_grids(cfg), num_threads)
  report.set_sweep(cfg.h_values)
  _add_points(report, points)
  slope = report.fit_channel('error')
  rate = continuum_rate(cfg)
  report.set_exponent('error', rate, LINEAR_FLOW_TAG)
  # Smooth data saturates at the h^2 symbol error, below the continuum rate.
  if cfg.symbol_law:
    report.check_band('error_symbol_law', slope, 2., cfg.slope_tolerance)
  else:
    report.check_lower('error_slope', slope, rate, cfg.slope_tolerance)
  if T > 0:
    report.fit_channel('symbol_bound')
    report.set_exponent('symbol_bound', 2., SYMBOL_LAW_TAG)
  else:
    report.add_note('T = 0: the error is the round-trip residual of psi0')
  return report


#################
# Interpolation #
#################

INTERP_CHANNELS = ['projection_fold', 'roundtrip', 'aliasing']


def run_interp_test(cfg, num_threads=1):
  """Static sweeps of the projection, round-trip and aliasing estimates on
  psi0 and its samples."""
  _check_kind(cfg, ['interp-test'])
  s, delta = cfg.s, cfg.delta
  report = _new_report(cfg)
  f = data.initial_field(cfg, data.data_grid(
    cfg, lambda f, grid: estimates.roundtrip_residual(f, grid, s).total))

  def measure(grid):
    rt = estimates.roundtrip_residual(f, grid, s)
    u = shannon.pointwise_project(f, grid)
    gap = estimates.projection_norm_gap(f, grid, s, delta)
    return OrderedDict([
      ('projection_fold', estimates.projection_fold_norm(f, grid, s)),
      ('roundtrip', rt.total),
      ('roundtrip_aliasing', rt.aliasing),
      ('roundtrip_tail', rt.tail),
      ('aliasing', estimates.aliasing_defect(u, u, s)),
    ]), gap

  results = run_jobs(measure, data.sweep_grids(cfg), num_threads)
  report.set_sweep(cfg.h_values)
  _add_points(report, [r[0] for r in results])
  gaps = [r[1] for r in results]
  report.add_table('projection_gap',
                   ['h', 'lhs', 'rhs_main', 'rhs_correction'],
                   [[h] + list(g) for h, g in zip(cfg.h_values, gaps)],
                   logscale=True)
  report.constant_fit['projection'] = max(
    max(g.lhs - g.rhs_main, 0.) / g.rhs_correction for g in gaps)

  if report.mark_degenerate():
    report.check_exact('band_limited_exact', True)
    return report
  for name in INTERP_CHANNELS:
    slope = report.fit_channel(name)
    report.set_exponent(name, delta - s, INTERP_TAG)
    report.check_lower('{}_slope'.format(name), slope, delta - s,
                       cfg.slope_tolerance)
  report.fit_channel('roundtrip_aliasing')
  report.fit_channel('roundtrip_tail')
  return report


def run_aliasing(cfg, num_threads=1):
  """The aliasing defect of products and powers of Pi_h psi0, and the
  subordination ratio of its nonlinear power."""
  _check_kind(cfg, ['aliasing'])
  s, delta = cfg.s, cfg.delta
  params = cfg.params
  report = _new_report(cfg)

  def product_aliasing(f, grid):
    u = shannon.pointwise_project(f, grid)
    return estimates.aliasing_defect(u, u, s)

  f = data.initial_field(cfg, data.data_grid(cfg, product_aliasing))

  def measure(grid):
    u = shannon.pointwise_project(f, grid)
    return OrderedDict([
      ('aliasing', estimates.aliasing_defect(u, u, s)),
      ('power_aliasing', estimates.power_aliasing_defect(u, params.p, s)),
      ('subordination', estimates.power_subordination_ratio(
        u, params.q, params.q - 1, delta)),
    ])

  points = run_jobs(measure, data.sweep_grids(cfg), num_threads)
  report.set_sweep(cfg.h_values)
  _add_points(report, points)
  slope = report.fit_channel('aliasing')
  report.set_exponent('aliasing', delta - s, INTERP_TAG)
  report.check_lower('aliasing_slope', slope, delta - s, cfg.slope_tolerance)
  report.fit_channel('power_aliasing')
  slope = report.fit_channel('subordination')
  report.set_exponent('subordination', 0., SUBORDINATION_TAG)
  report.check_flat('subordination_trend', slope, cfg.subordination_tolerance)
  return report


##########
# Growth #
##########

def run_growth(cfg, num_threads=1):
  """||u(t)||_{H^m} and ||u(t)||_{H^1} on [0, T] at the first h."""
  _check_kind(cfg, ['growth'])
  params, m = cfg.params, cfg.m
  report = _new_report(cfg)
  grid = cfg.grid(cfg.h_values[0])
  u0 = data.initial_state(cfg, grid)
  check_boundary_mass(u0, label='initial state')
  integrator = Integrator(params, cfg.tau(grid.h))
  with measure_time('Tracking H^{} growth on {} up to T={}...'.format(
      m, grid, cfg.T)):
    series = growth_track(u0, m, cfg.T, cfg.samples, integrator)
  h1_exponent = series.h1_fit_exponent()
  report.add_table('growth', ['t', 'Hm_norm', 'H1_norm'],
                   np.column_stack([series.times, series.norms,
                                    series.h1_norms]).tolist(),
                   logscale=True)
  report.slopes['Hm'] = OrderedDict([('slope', series.fit_exponent),
                                     ('fit_start', series.fit_start)])
  report.slopes['H1'] = OrderedDict([('slope', h1_exponent),
                                     ('fit_start', series.fit_start)])
  report.set_exponent('Hm', 2. * (m - 1), GROWTH_TAG)
  report.set_exponent('H1', 0., UNIFORM_TAG)
  if params.is_linear:
    hm_bound, h1_bound = 0.02, 0.02
  else:
    hm_bound = 0.1 if m == 1 else 2. * (m - 1) + 0.5
    h1_bound = 0.1
  report.check_upper('Hm_fit_exponent', series.fit_exponent, hm_bound)
  report.check_upper('H1_fit_exponent', h1_exponent, h1_bound)
  bound = h1_energy_bound(u0, params)
  if bound is None:
    report.add_note('Focusing model: the energy does not bound H^1')
  else:
    report.check_upper('H1_max', float(np.max(series.h1_norms)), 2. * bound)
  return report


####################
# Functional check #
####################

def _cubic_free_forcing(u):
  """t -> |exp(i t Delta_h) u|^2 exp(i t Delta_h) u."""
  def forcing(t):
    v = fourier.linear_flow(u, t).values
    return GridFunction(u.grid, np.abs(v) ** 2 * v)
  return forcing


def run_functional_check(cfg, num_threads=1):
  """Largest Gagliardo-Nirenberg, Strichartz and bilinear ratios over the
  seeds, per h; each must show no trend in h."""
  _check_kind(cfg, ['functional-check'])
  report = _new_report(cfg)
  fine = cfg.data_grid()
  seeds = [cfg.seed + j for j in range(cfg.n_seeds)]
  fields = [data.initial_field(cfg, fine, seed=sd) for sd in seeds]
  q, r, T = cfg.strichartz_q, cfg.strichartz_r, cfg.strichartz_T

  def measure(grid):
    us = [shannon.pointwise_project(f, grid) for f in fields]
    pairs = list(zip(us, us[1:] + us[:1]))
    return OrderedDict([
      ('gagliardo_nirenberg', max(
        functional.gagliardo_nirenberg_ratio(u, cfg.gn_q, cfg.gn_s)
        for u in us)),
      ('strichartz', max(functional.strichartz_ratio(u, q, r, T) for u in us)),
      ('strichartz_inhomogeneous', max(
        functional.strichartz_inhomogeneous_ratio(
          _cubic_free_forcing(u), q, r, T) for u in us)),
      ('bilinear_sobolev', max(
        functional.bilinear_sobolev_ratio(
          f, g, cfg.bilinear_s, cfg.bilinear_s1, cfg.bilinear_s2)
        for f, g in pairs)),
      ('bilinear_linf', max(
        functional.bilinear_linf_ratio(f, g, cfg.linf_eps)
        for f, g in pairs)),
      ('gn_delta', functional.gagliardo_nirenberg_ratio(
        GridFunction.delta(grid), 4, 1)),
    ])

  points = run_jobs(measure, data.sweep_grids(cfg), num_threads)
  report.set_sweep(cfg.h_values)
  _add_points(report, points)
  for name in ['gagliardo_nirenberg', 'strichartz', 'strichartz_inhomogeneous',
               'bilinear_sobolev', 'bilinear_linf']:
    slope = report.fit_channel(name)
    report.set_exponent(name, 0., UNIFORM_TAG)
    report.check_flat('{}_trend'.format(name), slope, cfg.trend_tolerance)

  oracle = GN_DELTA_ORACLE[cfg.d]
  err = max(abs(v - oracle) for v in report.channels['gn_delta'])
  report.check_exact('gn_delta_oracle', err <= 1e-12, err)
  rows = []
  for tq, tr, td, expected in ADMISSIBILITY_TABLE:
    got = functional.strichartz_admissible(tq, tr, td)
    rows.append([tq, tr, td, int(expected), int(got)])
  report.add_table('admissibility', ['q', 'r', 'd', 'expected', 'admissible'],
                   rows)
  report.check_exact('admissibility_table',
                     all(row[3] == row[4] for row in rows))
  report.add_note('bilinear_linf bounds ||fg||_inf by the H^1/H^2 interpolants of '
                  'both factors, the symmetric form of the one-factor estimate')
  return report


############
# Simulate #
############

def run_simulate(cfg, out_dir, num_threads=1):
  """Integrate one initial state to T; writes final_state.bin (and
  trajectory.h5 with `save_trajectory`) into out_dir."""
  _check_kind(cfg, ['simulate'])
  params = cfg.params
  report = _new_report(cfg)
  u0 = data.initial_state(cfg, cfg.grid(cfg.h_values[0]))
  grid = u0.grid
  params.check_grid(grid)
  check_boundary_mass(u0, label='initial state')
  integrator = Integrator(params, cfg.tau(grid.h))
  conservation = ConservationObserver(params)
  observers = [conservation]
  snapshots = None
  if cfg.save_trajectory:
    snapshots = SnapshotObserver()
    observers.append(snapshots)
  with measure_time('Integrating on {} to T={}, tau={:.3e}...'.format(
      grid, cfg.T, integrator.tau)):
    uT = flow.integrate(u0, integrator, cfg.T, observers,
                        sample_every=cfg.sample_every or None)
  check_boundary_mass(uT, label='final state')
  io.save_grid_function(uT, osp.join(out_dir, 'final_state.bin'))
  if snapshots is not None:
    snapshots.save_h5(osp.join(out_dir, 'trajectory.h5'))
  report.add_table('conservation', conservation.header, conservation.records)
  records = conservation.as_array()
  e0 = records[0, 2]
  energy_drift = float(np.max(np.abs(records[:, 2] - e0)) / max(abs(e0), 1e-300))
  report.constant_fit['energy_drift'] = energy_drift
  report.check_upper('mass_drift', conservation.relative_mass_drift(),
                     cfg.mass_tolerance)
  return report


RUNNERS = {
  'converge': run_convergence,
  'linear-flow': run_linear_flow,
  'interp-test': run_interp_test,
  'aliasing': run_aliasing,
  'growth': run_growth,
  'functional-check': run_functional_check,
}


def run_experiment(cfg, out_dir, num_threads=1):
  if cfg.kind == 'simulate':
    return run_simulate(cfg, out_dir, num_threads)
  if cfg.kind not in RUNNERS:
    raise ValueError('Unknown experiment kind {!r}'.format(cfg.kind))
  return RUNNERS[cfg.kind](cfg, num_threads)

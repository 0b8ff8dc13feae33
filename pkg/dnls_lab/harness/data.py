"""Initial data and grids of an experiment, built from its config."""
import numpy as np

from dnls_lab.lattice import io
from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.interp.ContinuumField import ContinuumField
from dnls_lab.interp.ContinuumField import DecayProfile
from dnls_lab.interp import shannon
from dnls_lab.dynamics.reference import SolitonReference


def envelope_width(cfg):
  if cfg.envelope > 0:
    return cfg.envelope * cfg.L
  return None


def decay_field(cfg, fine_grid, seed=None, delta=None):
  """Random data of sharp regularity delta, scaled to ||psi0||_{H^delta} =
  amplitude. With `band_limited`, the data is low-passed to half the
  coarsest torus of the sweep."""
  profile = DecayProfile(cfg.delta if delta is None else delta, cfg.d,
                         seed=cfg.seed if seed is None else seed,
                         width=envelope_width(cfg))
  f = shannon.generate_decay_function(profile, fine_grid) * cfg.amplitude
  if cfg.band_limited:
    f = shannon.low_pass(f, np.pi / (2. * max(cfg.h_values)))
  return f


def gaussian_values(cfg, coords):
  x0 = [cfg.x0] + [0.] * (len(coords) - 1)
  r2 = sum((x - c) ** 2 for x, c in zip(coords, x0))
  return cfg.amplitude * np.exp(-r2 / (2. * cfg.width ** 2)) \
    * np.exp(1j * cfg.velocity * coords[0])


def initial_field(cfg, fine_grid, seed=None):
  """psi0 as a ContinuumField on `fine_grid`."""
  if cfg.data_kind == 'decay':
    return decay_field(cfg, fine_grid, seed)
  if cfg.data_kind == 'gaussian':
    return ContinuumField(fine_grid, gaussian_values(cfg, fine_grid.coordinates()))
  if cfg.data_kind == 'soliton':
    return SolitonReference(fine_grid, cfg.x0).at(0.)
  raise ValueError('Data kind {!r} has no continuum field'.format(
    cfg.data_kind))


def initial_state(cfg, grid):
  """u0 on the lattice `grid`: the state file, or Pi_h of psi0."""
  if cfg.data_kind == 'state':
    u = io.load_state(cfg.state_file, h=grid.h)
    if u.grid.d != cfg.d:
      raise ValueError('State file {} has d={}, config has d={}'.format(
        cfg.state_file, u.grid.d, cfg.d))
    return u
  if cfg.data_kind == 'decay':
    return shannon.pointwise_project(
      initial_field(cfg, grid.refine(cfg.r)), grid)
  return GridFunction(grid, initial_field(cfg, grid).values)


def data_grid(cfg, measure):
  """The grid carrying psi0. With `adaptive`, the refinement level below
  min(h) is raised from r until measure(psi0, finest sweep grid) settles to 1%."""
  if not cfg.adaptive:
    return cfg.data_grid()
  coarse = cfg.grid(cfg.h_min)
  _, r = shannon.refine_until_stable(
    lambda level: measure(initial_field(cfg, coarse.refine(level)), coarse),
    r0=cfg.r)
  print('Data grid refined to level {} below h={}'.format(r, cfg.h_min))
  return coarse.refine(r)


def sweep_grids(cfg):
  return [cfg.grid(h) for h in cfg.h_values]

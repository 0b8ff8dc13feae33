import numpy as np
import pytest

from dnls_lab.lattice.LatticeGrid import LatticeGrid
from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.dynamics.ModelParams import ModelParams
from dnls_lab.dynamics.ModelParams import Integrator
from dnls_lab.dynamics import flow
from dnls_lab.dynamics import reference
from dnls_lab.dynamics.reference import FineGridReference
from dnls_lab.dynamics.reference import LinearReference
from dnls_lab.dynamics.reference import ReferenceNotConvergedError
from dnls_lab.dynamics.reference import SolitonReference
from dnls_lab.interp.ContinuumField import ContinuumField
from dnls_lab.interp import shannon

FOCUSING = ModelParams(3, -1, 1)


def gaussian_field(grid, velocity=0.):
  return ContinuumField.from_function(
    grid, lambda x: np.exp(-x ** 2 + 1j * velocity * x))


class TestSoliton(object):

  def test_residual_is_small(self):
    ref = SolitonReference(LatticeGrid.from_box(1, 25.6, 0.05))
    assert ref.residual(0.) <= 1e-6
    assert ref.residual(1.) <= 1e-6
    ref.validate([0., 1.])

  def test_phase_rotation(self):
    ref = SolitonReference(LatticeGrid.from_box(1, 25.6, 0.1), x0=1.)
    np.testing.assert_allclose(ref.at(0.7).values,
                               np.exp(0.7j) * ref.at(0.).values)
    assert np.argmax(np.abs(ref.at(0.).values)) == 256 + 10

  def test_coarse_grid_fails_validation(self):
    ref = SolitonReference(LatticeGrid.from_box(1, 25.6, 1.6))
    with pytest.raises(ReferenceNotConvergedError):
      ref.validate([0.])

  def test_factory(self):
    grid = LatticeGrid.from_box(1, 25.6, 0.05)
    ref = reference.reference_solution('soliton', grid=grid, params=FOCUSING,
                                       T=1.)
    assert isinstance(ref, SolitonReference)
    with pytest.raises(ValueError):
      reference.reference_solution('soliton', grid=grid,
                                   params=ModelParams(3, 1, 1))
    with pytest.raises(ValueError):
      SolitonReference(LatticeGrid(2, 8, 0.5))
    with pytest.raises(AssertionError):
      reference.reference_solution('exact', grid=grid)

  @pytest.mark.slow
  def test_fine_lattice_tracks_the_soliton(self):
    grid = LatticeGrid.from_box(1, 25.6, 0.00625)
    ref = SolitonReference(grid)
    u0 = ref.at(0.).as_grid_function()
    u1 = flow.integrate(u0, Integrator(FOCUSING, 5e-4), 1.)
    err = shannon.continuum_sobolev_norm(
      ContinuumField(grid, u1.values) - ref.at(1.), 0.)
    assert err <= 1e-4


class TestLinearReference(object):

  def test_free_flow(self):
    grid = LatticeGrid.from_box(1, 8., 0.125)
    psi0 = gaussian_field(grid, velocity=1.)
    ref = reference.reference_solution('linear', psi0=psi0)
    assert isinstance(ref, LinearReference)
    np.testing.assert_allclose(ref.at(0.).values, psi0.values, atol=1e-13)
    # Mass of the free flow is conserved.
    assert shannon.continuum_sobolev_norm(ref.at(0.6), 0.) == pytest.approx(
      shannon.continuum_sobolev_norm(psi0, 0.), rel=1e-12)


class TestFineGridReference(object):

  def test_rewinds_for_earlier_times(self):
    grid = LatticeGrid.from_box(1, 8., 0.125)
    ref = FineGridReference(gaussian_field(grid), ModelParams(), 0.01)
    late = ref.at(0.5).values
    early = ref.at(0.2).values
    fresh = FineGridReference(gaussian_field(grid), ModelParams(), 0.01)
    np.testing.assert_array_equal(fresh.at(0.2).values, early)
    np.testing.assert_allclose(ref.at(0.5).values, late, atol=1e-12)
    assert ref.at(0.5).band_limit == pytest.approx(np.pi / grid.h)

  def test_richardson_check(self, capsys):
    grid = LatticeGrid.from_box(1, 8., 0.0625)
    ref = reference.reference_solution(
      'fine_grid', psi0=gaussian_field(grid), params=ModelParams(), tau=0.005,
      richardson_tol=0.05)
    diff = ref.richardson_check(0.5, coarse_error=1.)
    assert 0. < diff < 0.05
    assert 'Reference check' in capsys.readouterr().out
    with pytest.raises(ReferenceNotConvergedError):
      ref.richardson_check(0.5, coarse_error=diff)

  def test_richardson_companion_is_twice_the_spacing(self):
    grid = LatticeGrid.from_box(1, 8., 0.125)
    params = ModelParams()
    ref = FineGridReference(gaussian_field(grid), params, 0.01)
    coarse = LatticeGrid.from_box(1, 8., 0.25)
    u = flow.integrate(shannon.pointwise_project(gaussian_field(grid), coarse),
                       Integrator(params, 0.01), 0.3)
    expected = shannon.continuum_sobolev_norm(
      ref.at(0.3) - shannon.interpolate_onto(u, grid), 0.)
    assert ref.richardson_check(0.3, coarse_error=10.) == pytest.approx(
      expected, rel=1e-10)

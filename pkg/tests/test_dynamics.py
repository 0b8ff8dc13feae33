import numpy as np
import pytest

from dnls_lab.lattice.LatticeGrid import LatticeGrid
from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice import operators as ops
from dnls_lab.lattice import io
from dnls_lab.spectral import fourier
from dnls_lab.dynamics.ModelParams import ModelParams
from dnls_lab.dynamics.ModelParams import Integrator
from dnls_lab.dynamics import flow
from dnls_lab.dynamics.observers import ConservationObserver
from dnls_lab.dynamics.observers import NormObserver
from dnls_lab.dynamics.observers import SnapshotObserver


def gaussian(grid, amplitude=1., velocity=0.):
  return GridFunction.from_function(
    grid, lambda x: amplitude * np.exp(-x ** 2 + 1j * velocity * x))


@pytest.fixture
def grid():
  return LatticeGrid.from_box(1, 8., 0.25)


class TestModelParams(object):

  @pytest.mark.parametrize('p, lam, d', [(2, 1, 1), (4, 1, 1), (1, 1, 1),
                                         (3, 2, 1), (3, 1, 3), (3, -1, 2),
                                         (5, -1, 1)])
  def test_rejects(self, p, lam, d):
    with pytest.raises(ValueError):
      ModelParams(p, lam, d)

  def test_exponents(self):
    params = ModelParams(5, 1, 2)
    assert (params.n, params.q) == (2, 3)
    assert params.is_defocusing and not params.is_linear
    assert ModelParams(3, 0, 1).is_linear
    assert ModelParams(3, -1, 1) == ModelParams(p=3, lam=-1, d=1)
    with pytest.raises(ValueError):
      params.check_grid(LatticeGrid(1, 8, 0.5))

  def test_integrator(self):
    params = ModelParams()
    with pytest.raises(ValueError):
      Integrator(params, 0.)
    with pytest.raises(ValueError):
      Integrator(params, 0.1, scheme='euler')
    assert Integrator(params, 0.1).tau == 0.1


class TestSingleStep(object):

  def test_nonlinearity(self, grid):
    params = ModelParams()
    assert np.all(flow.nonlinearity(GridFunction.zeros(grid), params).values
                  == 0.)
    v = flow.nonlinearity(GridFunction.delta(grid, value=2.), params)
    assert v.values[grid.origin_index()] == 8.
    u = gaussian(grid, velocity=1.)
    np.testing.assert_allclose(
      flow.nonlinearity(u * np.exp(0.3j), params).values,
      np.exp(0.3j) * flow.nonlinearity(u, params).values, atol=1e-14)

  def test_linear_step_is_the_drift(self, grid):
    u = gaussian(grid, velocity=1.)
    v = flow.step_strang(u, Integrator(ModelParams(3, 0, 1), 0.02))
    np.testing.assert_allclose(v.values, fourier.linear_flow(u, 0.02).values,
                               atol=1e-13)

  def test_step_keeps_mass_and_matches_integrate(self, grid):
    u = gaussian(grid, amplitude=1.5, velocity=1.)
    integrator = Integrator(ModelParams(5, 1, 1), 0.02)
    v = flow.step_strang(u, integrator)
    assert flow.mass(v) == pytest.approx(flow.mass(u), rel=1e-12)
    np.testing.assert_allclose(v.values,
                               flow.integrate(u, integrator, 0.02).values,
                               atol=1e-14)


class TestStrangSplitting(object):

  def test_linear_model_is_exact(self, grid):
    # lam = 0 leaves only the exact drift, including a shorter last step.
    u = gaussian(grid, velocity=1.)
    v = flow.integrate(u, Integrator(ModelParams(3, 0, 1), 0.01), 0.105)
    np.testing.assert_allclose(v.values, fourier.linear_flow(u, 0.105).values,
                               atol=1e-11)

  @pytest.mark.parametrize('p, lam', [(3, 1), (5, 1), (3, -1)])
  def test_constant_state_rotates(self, p, lam):
    grid = LatticeGrid(1, 16, 0.5)
    c = 0.7 - 0.2j
    u = GridFunction.constant(grid, c)
    T = 1.3
    v = flow.integrate(u, Integrator(ModelParams(p, lam, 1), 0.1), T)
    expected = c * np.exp(-1j * lam * abs(c) ** (p - 1) * T)
    np.testing.assert_allclose(v.values, expected, atol=1e-12)

  def test_single_site_box(self):
    # N = 4 with a huge spacing: the drift is nearly the identity.
    grid = LatticeGrid(1, 4, 1e4)
    u = GridFunction.delta(grid, value=2.)
    v = flow.integrate(u, Integrator(ModelParams(), 0.1), 1.)
    np.testing.assert_allclose(v.values[grid.origin_index()],
                               2. * np.exp(-4j), atol=1e-6)

  def test_mass_is_conserved(self):
    grid = LatticeGrid.from_box(2, 4., 0.25)
    u = GridFunction.random(grid, np.random.RandomState(0))
    obs = ConservationObserver(ModelParams(3, 1, 2))
    flow.integrate(u, Integrator(ModelParams(3, 1, 2), 0.01), 0.5, [obs],
                   sample_every=5)
    assert obs.relative_mass_drift() <= 1e-12

  @pytest.mark.slow
  def test_mass_over_ten_thousand_steps(self):
    grid = LatticeGrid(1, 256, 0.1)
    params = ModelParams(3, 1, 1)
    obs = ConservationObserver(params)
    flow.integrate(gaussian(grid, velocity=1.), Integrator(params, 0.001), 10.,
                   [obs], sample_every=1000)
    assert len(obs.records) == 11
    assert obs.relative_mass_drift() <= 1e-11

  def test_gauge_invariance(self, grid):
    integrator = Integrator(ModelParams(5, 1, 1), 0.01)
    u = gaussian(grid, velocity=1.)
    phase = np.exp(0.7j)
    np.testing.assert_allclose(
      flow.integrate(u * phase, integrator, 1.).values,
      phase * flow.integrate(u, integrator, 1.).values, atol=1e-13)

  def test_time_reversible(self, grid):
    params = ModelParams(3, 1, 1)
    u = gaussian(grid, velocity=2.)
    integrator = Integrator(params, 0.01)
    v = flow.integrate(u, integrator, 1.)
    back = flow.integrate(v.conj(), integrator, 1.).conj()
    np.testing.assert_allclose(back.values, u.values, atol=1e-10)

  def test_second_order_in_tau(self, grid):
    params = ModelParams(3, 1, 1)
    u = gaussian(grid, velocity=1.)
    runs = [flow.integrate(u, Integrator(params, tau), 1.)
            for tau in (0.01, 0.005, 0.0025)]
    d1 = ops.lp_norm(runs[0] - runs[1], 2)
    d2 = ops.lp_norm(runs[1] - runs[2], 2)
    assert 1.8 <= np.log2(d1 / d2) <= 2.2

  def test_energy_drift_is_small(self, grid):
    params = ModelParams(3, 1, 1)
    obs = ConservationObserver(params)
    flow.integrate(gaussian(grid, velocity=1.), Integrator(params, 0.005), 2.,
                   [obs], sample_every=20)
    arr = obs.as_array()
    assert np.max(np.abs(arr[:, 2] - arr[0, 2])) <= 5e-3 * abs(arr[0, 2])

  def test_energy_error_is_second_order_in_tau(self, grid):
    params = ModelParams(3, 1, 1)
    u = gaussian(grid, velocity=1.)
    errors = []
    for tau in (0.005, 0.0025):
      obs = ConservationObserver(params)
      flow.integrate(u, Integrator(params, tau), 5., [obs],
                     sample_every=int(round(0.1 / tau)))
      arr = obs.as_array()
      errors.append(np.max(np.abs(arr[:, 2] - arr[0, 2])))
    assert 3. <= errors[0] / errors[1] <= 5.

  def test_blow_up_is_reported(self):
    grid = LatticeGrid(1, 8, 0.5)
    u = GridFunction.constant(grid, 1e200)
    with np.errstate(over='ignore', invalid='ignore'):
      with pytest.raises(flow.BlowUpError) as e:
        flow.integrate(u, Integrator(ModelParams(), 0.1), 1.)
    assert e.value.last_healthy_time == 0.
    np.testing.assert_array_equal(e.value.last_state.values, u.values)


class TestIntegrate(object):

  def test_zero_time_returns_input(self, grid):
    u = gaussian(grid)
    assert flow.integrate(u, Integrator(ModelParams(), 0.1), 0.) is u

  def test_argument_checks(self, grid):
    u = gaussian(grid)
    integrator = Integrator(ModelParams(), 0.1)
    with pytest.raises(ValueError):
      flow.integrate(u, integrator, -1.)
    with pytest.raises(ValueError):
      flow.integrate(u, integrator, 1., sample_every=0)
    with pytest.raises(ValueError):
      flow.integrate(u, Integrator(ModelParams(3, 1, 2), 0.1), 1.)
    with pytest.raises(ValueError):
      flow.integrate_to_times(u, integrator, [0.5, 0.2])

  def test_observer_schedule(self, grid):
    obs = SnapshotObserver()
    flow.integrate(gaussian(grid), Integrator(ModelParams(), 0.01), 1., [obs],
                   sample_every=10)
    assert len(obs.times) == 11
    np.testing.assert_allclose(obs.times, np.linspace(0., 1., 11))
    assert obs.times[-1] == 1.

  def test_num_steps(self):
    assert flow.num_steps(1., 0.1) == 10
    assert flow.num_steps(1.05, 0.1) == 11
    assert flow.num_steps(0., 0.1) == 0

  def test_integrate_to_times(self, grid):
    params = ModelParams()
    integrator = Integrator(params, 0.01)
    u = gaussian(grid)
    obs = NormObserver([1])
    states = flow.integrate_to_times(u, integrator, [0.1, 0.3, 0.3], [obs])
    assert len(states) == 3
    direct = flow.integrate(flow.integrate(u, integrator, 0.1), integrator, 0.2)
    np.testing.assert_allclose(states[1].values, direct.values, atol=1e-12)
    np.testing.assert_array_equal(states[2].values, states[1].values)
    times, norms = obs.series(1)
    np.testing.assert_allclose(times, [0.1, 0.3, 0.3])
    assert norms[0] == pytest.approx(fourier.sobolev_norm(states[0], 1))


class TestConservedQuantities(object):

  def test_constant_state(self):
    grid = LatticeGrid(1, 16, 0.5)
    c = 0.5 + 0.5j
    u = GridFunction.constant(grid, c)
    assert flow.mass(u) == pytest.approx(2 * grid.L * abs(c) ** 2)
    assert flow.energy(u, ModelParams(3, 1, 1)) == pytest.approx(
      0.25 * 2 * grid.L * abs(c) ** 4)
    assert flow.energy(u, ModelParams(3, 0, 1)) == 0.
    assert flow.energy(u, ModelParams(3, -1, 1)) < 0.

  def test_observer_records(self, grid, tmp_path):
    params = ModelParams()
    obs = ConservationObserver(params, extra_orders=[2, 3])
    flow.integrate(gaussian(grid), Integrator(params, 0.05), 0.5, [obs],
                   sample_every=2)
    assert obs.header == ['t', 'mass', 'energy', 'H1', 'H2', 'H3']
    arr = obs.as_array()
    assert arr.shape == (6, 6)
    path = str(tmp_path / 'cons.csv')
    obs.to_csv(path)
    table = np.loadtxt(path, delimiter=',', skiprows=1)
    np.testing.assert_array_equal(table, arr)

  def test_empty_snapshots(self, tmp_path):
    with pytest.raises(ValueError):
      SnapshotObserver().save_h5(str(tmp_path / 'x.h5'))

  def test_snapshot_h5(self, grid, tmp_path):
    obs = SnapshotObserver()
    flow.integrate(gaussian(grid), Integrator(ModelParams(), 0.1), 0.3, [obs])
    path = str(tmp_path / 'traj.h5')
    obs.save_h5(path)
    _, times, states = io.load_trajectory(path)
    np.testing.assert_allclose(times, [0., 0.3])
    np.testing.assert_array_equal(states[1].values, obs.states[1].values)

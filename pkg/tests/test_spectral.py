import numpy as np
import pytest

from dnls_lab.lattice.LatticeGrid import LatticeGrid
from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice import operators as ops
from dnls_lab.spectral import fourier
from dnls_lab.spectral.SpectrumFunction import SpectrumFunction


def random_function(grid, seed=0):
  return GridFunction.random(grid, np.random.RandomState(seed))


class TestDft(object):

  def test_plane_wave_is_a_spike(self):
    grid = LatticeGrid(1, 32, 0.2)
    k0 = 5
    c = fourier.dft(GridFunction.plane_wave(grid, k0)).coeffs
    expected = np.zeros(32, dtype=np.complex128)
    expected[k0 + 16] = 2 * grid.L
    np.testing.assert_allclose(c, expected, atol=1e-12)

  def test_delta_is_flat(self):
    grid = LatticeGrid(2, 8, 0.5)
    c = fourier.dft(GridFunction.delta(grid)).coeffs
    np.testing.assert_allclose(c, np.full(grid.shape, grid.cell_volume),
                               atol=1e-15)

  def test_matches_direct_sum(self):
    grid = LatticeGrid(1, 16, 0.3)
    u = random_function(grid)
    a = grid.axis()
    direct = np.array([grid.h * np.sum(u.values * np.exp(-1j * a * xi))
                       for xi in grid.dual_axis()])
    np.testing.assert_allclose(fourier.dft(u).coeffs, direct, atol=1e-12)

  @pytest.mark.parametrize('d', [1, 2])
  def test_inverse(self, d):
    grid = LatticeGrid(d, 16, 0.1)
    u = random_function(grid, d)
    np.testing.assert_allclose(fourier.idft(fourier.dft(u)).values, u.values,
                               atol=1e-12)

  @pytest.mark.parametrize('d', [1, 2])
  def test_parseval(self, d):
    grid = LatticeGrid(d, 32, 0.15)
    u = random_function(grid, 3)
    assert fourier.dft(u).norm() == pytest.approx(ops.lp_norm(u, 2), rel=1e-12)

  def test_dual_sign(self):
    grid = LatticeGrid(2, 4, 1.)
    np.testing.assert_array_equal(
      fourier.dual_sign(grid),
      [[1, -1, 1, -1], [-1, 1, -1, 1], [1, -1, 1, -1], [-1, 1, -1, 1]])


class TestSymbol(object):

  def test_sigma_is_the_laplacian_symbol(self):
    grid = LatticeGrid(2, 16, 0.25)
    u = random_function(grid, 4)
    np.testing.assert_allclose(
      fourier.apply_symbol(u, fourier.sigma_array(grid)).values,
      -ops.apply_laplacian(u).values, atol=1e-10)

  def test_sigma_range(self):
    grid = LatticeGrid(1, 64, 0.1)
    sigma = fourier.sine_multiplier(grid).coeffs.real
    assert sigma.min() == 0.
    assert sigma.max() == pytest.approx(4. / grid.h ** 2)
    # sigma_h(xi) <= |xi|^2
    assert np.all(sigma <= grid.dual_norm_squared() + 1e-9)

  def test_sobolev_norms(self):
    grid = LatticeGrid(1, 32, 0.2)
    u = random_function(grid, 5)
    assert fourier.sobolev_norm(u, 0) == pytest.approx(ops.lp_norm(u, 2),
                                                       rel=1e-12)
    assert fourier.sobolev_norm(u, -1) < fourier.sobolev_norm(u, 0.5) \
      < fourier.sobolev_norm(u, 1.5)
    assert fourier.homogeneous_sobolev_norm(u, 1) == pytest.approx(
      ops.homogeneous_sobolev_norm_operator(u, 1), rel=1e-10)
    with pytest.raises(ValueError):
      fourier.homogeneous_sobolev_norm(u, -0.5)

  @pytest.mark.parametrize('d', [1, 2])
  @pytest.mark.parametrize('s', [0., 0.5, 1., 2.])
  def test_quarter_interpolation(self, d, s):
    # ||u||_{H^(s+1/4)} <= ||u||_{H^s}^(3/4) ||u||_{H^(s+1)}^(1/4)
    grid = LatticeGrid(d, 16, 0.25)
    for seed in range(5):
      u = random_function(grid, seed)
      lhs = fourier.sobolev_norm(u, s + 0.25)
      rhs = fourier.sobolev_norm(u, s) ** 0.75 \
        * fourier.sobolev_norm(u, s + 1.) ** 0.25
      assert lhs <= rhs * (1. + 1e-12)
    # equality on a single mode
    u = GridFunction.plane_wave(grid, (3,) * d)
    lhs = fourier.sobolev_norm(u, s + 0.25)
    assert lhs == pytest.approx(fourier.sobolev_norm(u, s) ** 0.75
                                * fourier.sobolev_norm(u, s + 1.) ** 0.25,
                                rel=1e-12)

  def test_fractional_sobolev_apply(self):
    grid = LatticeGrid(1, 32, 0.2)
    u = random_function(grid, 6)
    v = fourier.fractional_sobolev_apply(u, 0.7)
    assert ops.lp_norm(v, 2) == pytest.approx(fourier.sobolev_norm(u, 0.7),
                                              rel=1e-12)


class TestLinearFlow(object):

  def test_plane_wave_phase(self):
    grid = LatticeGrid(1, 32, 0.2)
    k0 = 7
    u = GridFunction.plane_wave(grid, k0)
    t = 0.37
    sigma = fourier.sigma_array(grid)[k0 + 16]
    np.testing.assert_allclose(fourier.linear_flow(u, t).values,
                               np.exp(-1j * t * sigma) * u.values, atol=1e-12)

  def test_group_law_and_mass(self):
    grid = LatticeGrid(2, 16, 0.2)
    u = random_function(grid, 7)
    a = fourier.linear_flow(fourier.linear_flow(u, 0.3), 0.45)
    b = fourier.linear_flow(u, 0.75)
    np.testing.assert_allclose(a.values, b.values, atol=1e-11)
    assert ops.lp_norm(b, 2) == pytest.approx(ops.lp_norm(u, 2), rel=1e-12)
    np.testing.assert_allclose(fourier.linear_flow(b, -0.75).values, u.values,
                               atol=1e-11)

  def test_propagator_matches_flow(self):
    grid = LatticeGrid(1, 64, 0.1)
    u = random_function(grid, 8)
    prop = fourier.LinearPropagator(grid, 0.05)
    v = u.values
    for _ in range(4):
      v = prop(v)
    np.testing.assert_allclose(v, fourier.linear_flow(u, 0.2).values,
                               atol=1e-11)

  def test_solves_the_linear_equation(self):
    # i d/dt u = -Delta_h u, checked by a centred difference in time.
    grid = LatticeGrid(1, 32, 0.2)
    u = random_function(grid, 9)
    eps = 1e-5
    dudt = (fourier.linear_flow(u, eps).values
            - fourier.linear_flow(u, -eps).values) / (2 * eps)
    np.testing.assert_allclose(1j * dudt, -ops.apply_laplacian(u).values,
                               rtol=1e-5, atol=1e-4)


class TestSpectrumFunction(object):

  def test_shape_check(self):
    with pytest.raises(ValueError):
      SpectrumFunction(LatticeGrid(1, 8, 0.5), np.zeros(6))

  def test_arithmetic_and_weight(self):
    grid = LatticeGrid(1, 8, 0.5)
    v = SpectrumFunction(grid, np.ones(8))
    w = v * 2. + v - v
    np.testing.assert_allclose(w.coeffs, 2.)
    assert v.quadrature_weight == pytest.approx(2 * np.pi / 4.)
    assert v.norm() == pytest.approx(np.sqrt(8. / 4.))

  def test_export_csv(self, tmp_path):
    grid = LatticeGrid(1, 8, 0.5)
    v = fourier.dft(GridFunction.delta(grid))
    path = str(tmp_path / 'spec.csv')
    v.export_csv(path)
    table = np.loadtxt(path, delimiter=',', skiprows=1)
    with open(path) as f:
      assert f.readline().strip() == 'k_1,xi_1,re,im'
    np.testing.assert_array_equal(table[:, 0], np.arange(-4, 4))
    np.testing.assert_allclose(table[:, 2], 0.5)

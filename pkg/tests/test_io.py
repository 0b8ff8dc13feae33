import os.path as osp

import numpy as np
import pytest

from dnls_lab.lattice.LatticeGrid import LatticeGrid
from dnls_lab.lattice.LatticeGrid import GridFunction
from dnls_lab.lattice import io


@pytest.fixture
def u():
  grid = LatticeGrid(2, 8, 0.25)
  return GridFunction.random(grid, np.random.RandomState(0))


class TestBinaryState(object):

  def test_header_layout(self, u, tmp_path):
    path = str(tmp_path / 'u.bin')
    io.save_grid_function(u, path)
    with open(path, 'rb') as f:
      raw = f.read()
    assert raw[:8] == b'DNLSGRID'
    np.testing.assert_array_equal(
      np.frombuffer(raw[8:32], dtype='<f8'), [2., 8., 0.25])
    assert len(raw) == 32 + 16 * 64
    # First value is the point (-L, -L), real part then imaginary part.
    re, im = np.frombuffer(raw[32:48], dtype='<f8')
    assert re == u.values[0, 0].real
    assert im == u.values[0, 0].imag

  def test_load_is_bit_exact(self, u, tmp_path):
    path = str(tmp_path / 'sub' / 'u.bin')
    io.save_grid_function(u, path)
    v = io.load_state(path)
    assert v.grid == u.grid
    np.testing.assert_array_equal(v.values, u.values)

  def test_rejects_foreign_and_truncated_files(self, u, tmp_path):
    bad = str(tmp_path / 'bad.bin')
    with open(bad, 'wb') as f:
      f.write(b'NOTAGRID' + b'\0' * 40)
    with pytest.raises(ValueError):
      io.load_grid_function(bad)
    path = str(tmp_path / 'u.bin')
    io.save_grid_function(u, path)
    with open(path, 'rb') as f:
      raw = f.read()
    with open(path, 'wb') as f:
      f.write(raw[:-16])
    with pytest.raises(ValueError):
      io.load_grid_function(path)

  def test_missing_file(self, tmp_path):
    with pytest.raises(IOError):
      io.load_state(str(tmp_path / 'nothing.bin'))


class TestCsvState(object):

  def test_export_and_reload(self, u, tmp_path):
    path = str(tmp_path / 'u.csv')
    io.export_grid_csv(u, path)
    with open(path) as f:
      assert f.readline().strip() == 'index,a_1,a_2,re,im'
    v = io.load_state(path, h=0.25)
    assert v.grid == u.grid
    np.testing.assert_array_equal(v.values, u.values)

  def test_csv_needs_spacing(self, u, tmp_path):
    path = str(tmp_path / 'u.csv')
    io.export_grid_csv(u, path)
    with pytest.raises(ValueError):
      io.load_state(path)


class TestTrajectory(object):

  def test_hdf5_snapshots(self, u, tmp_path):
    path = str(tmp_path / 'traj.h5')
    states = [u, u * 2., u.conj()]
    io.save_trajectory(path, u.grid, [0., 0.5, 1.], states)
    assert osp.exists(path)
    grid, times, loaded = io.load_trajectory(path)
    assert grid == u.grid
    np.testing.assert_array_equal(times, [0., 0.5, 1.])
    assert len(loaded) == 3
    np.testing.assert_array_equal(loaded[2].values, np.conj(u.values))

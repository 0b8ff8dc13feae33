import os
import os.path as osp
import sys
import datetime
import time
from contextlib import contextmanager


def time_str(fmt=None):
  if fmt is None:
    fmt = '%Y-%m-%d_%H:%M:%S'
  return datetime.datetime.today().strftime(fmt)


def may_make_dir(path):
  """
  Args:
    path: a dir, or result of `osp.dirname(osp.abspath(file_path))`
  Note:
    `osp.exists('')` returns `False`, while `osp.exists('.')` returns `True`!
  """
  if path in [None, '']:
    return
  if not osp.exists(path):
    os.makedirs(path)


class ReDirectSTD(object):
  """Tee sys.stdout or sys.stderr into a file, so that the console log of an
  experiment is kept next to its report.
  Args:
    fpath: file path, or None to keep console only
    console: one of ['stdout', 'stderr']
    immediately_visible: If `False`, the file is opened once and closed on
      `close()`. If `True`, every write opens, appends to and closes the file.
  Usage example:
    with ReDirectSTD(osp.join(out_dir, 'stdout.txt'), 'stdout', False):
      ...
  NOTE: File will be deleted if already existing. Log dir and file is created
    lazily -- if no message is written, the dir and file will not be created.
    The original stream is put back on `close()`.
  """

  def __init__(self, fpath=None, console='stdout', immediately_visible=False):
    assert console in ['stdout', 'stderr']
    self.console_name = console
    self.console = sys.stdout if console == 'stdout' else sys.stderr
    self.file = fpath
    self.f = None
    self.immediately_visible = immediately_visible
    self.closed = False
    if fpath is not None:
      if osp.exists(fpath):
        os.remove(fpath)
    setattr(sys, console, self)

  def __enter__(self):
    return self

  def __exit__(self, *args):
    self.close()

  def write(self, msg):
    self.console.write(msg)
    if self.file is None or self.closed:
      return
    may_make_dir(osp.dirname(osp.abspath(self.file)))
    if self.immediately_visible:
      with open(self.file, 'a') as f:
        f.write(msg)
    else:
      if self.f is None:
        self.f = open(self.file, 'w')
      self.f.write(msg)

  def flush(self):
    self.console.flush()
    if self.f is not None:
      self.f.flush()
      os.fsync(self.f.fileno())

  def close(self):
    if self.closed:
      return
    self.closed = True
    # Only restore if nobody redirected on top of us.
    if getattr(sys, self.console_name) is self:
      setattr(sys, self.console_name, self.console)
    if self.f is not None:
      self.f.close()
      self.f = None


@contextmanager
def measure_time(enter_msg):
  st = time.time()
  print(enter_msg)
  yield
  print('Done, {:.2f}s'.format(time.time() - st))


def str2bool(v):
  if isinstance(v, bool):
    return v
  return v.strip().lower() in ("yes", "true", "t", "1")


def float_str(x):
  """17 significant digits, the precision every table and file uses."""
  return '{:.17g}'.format(x)

"""Command line: `run.py <command> --config <file> [flags]`.

Exit codes: 0 when every check of the report passes, 2 when a check fails,
1 on usage errors, on errors raised by the experiment and when the report
cannot be written.
"""
from __future__ import print_function

import argparse
import os.path as osp
import pprint
import sys
import time

from tensorboardX import SummaryWriter

from dnls_lab.harness.ExperimentConfig import ExperimentConfig
from dnls_lab.harness.ExperimentConfig import KINDS
from dnls_lab.harness.experiments import run_experiment
from dnls_lab.utils.utils import ReDirectSTD
from dnls_lab.utils.utils import may_make_dir
from dnls_lab.utils.utils import str2bool
from dnls_lab.utils.utils import time_str

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


class UsageError(Exception):
  pass


class _Parser(argparse.ArgumentParser):
  def error(self, message):
    raise UsageError(message)


def build_parser():
  parser = _Parser(prog='run.py')
  parser.add_argument('command', choices=KINDS)
  parser.add_argument('--config', type=str, default='')
  parser.add_argument('--out', type=str, default='')
  parser.add_argument('--seed', type=int, default=None)
  parser.add_argument('--jobs', type=int, default=1)
  parser.add_argument('--format', type=str, default='json',
                      choices=['csv', 'json'])
  parser.add_argument('--log_to_file', type=str2bool, default=True)
  return parser


class Config(object):
  def __init__(self, argv=None):
    args = build_parser().parse_args(argv)
    if args.config == '':
      raise UsageError('the --config file is required')
    if args.jobs < 1:
      raise UsageError('--jobs must be >= 1, got {}'.format(args.jobs))

    self.command = args.command
    self.config_file = args.config
    # None keeps the seed of the config file.
    self.seed = args.seed
    self.jobs = args.jobs
    self.format = args.format

    #######
    # Log #
    #######

    # If True,
    # 1) stdout and stderr will be redirected to file,
    # 2) channels and slopes will be written to tensorboard.
    self.log_to_file = args.log_to_file

    if args.out == '':
      self.out_dir = osp.join(
        'exp', self.command,
        osp.splitext(osp.basename(self.config_file))[0])
    else:
      self.out_dir = args.out

    self.stdout_file = osp.join(
      self.out_dir, 'stdout_{}.txt'.format(time_str()))
    self.stderr_file = osp.join(
      self.out_dir, 'stderr_{}.txt'.format(time_str()))
    self.report_file = osp.join(self.out_dir, 'report.json')
    self.tensorboard_dir = osp.join(self.out_dir, 'tensorboard')


def load_experiment_config(cfg):
  exp_cfg = ExperimentConfig.from_file(cfg.config_file)
  if exp_cfg.kind not in ['', cfg.command]:
    raise ValueError('Config {} is for {!r}, not {!r}'.format(
      cfg.config_file, exp_cfg.kind, cfg.command))
  exp_cfg.set_kind(cfg.command)
  if cfg.seed is not None:
    exp_cfg.set_seed(cfg.seed)
  return exp_cfg.validate()


def _run(cfg, exp_cfg):
  print('-' * 60)
  print('cfg.__dict__')
  pprint.pprint(cfg.__dict__)
  print('experiment config')
  pprint.pprint(dict(exp_cfg.echo()))
  print('-' * 60)

  st = time.time()
  try:
    report = run_experiment(exp_cfg, cfg.out_dir, cfg.jobs)
  except (ValueError, RuntimeError, IOError, NotImplementedError,
          OverflowError) as e:
    print('Error: {}'.format(e), file=sys.stderr)
    return EXIT_ERROR
  if exp_cfg.record_runtime:
    report.runtime_s = time.time() - st

  try:
    report.save_json(cfg.report_file)
    if cfg.format == 'csv' or exp_cfg.kind == 'simulate':
      report.save_csv(cfg.out_dir)
    if cfg.log_to_file:
      writer = SummaryWriter(log_dir=cfg.tensorboard_dir)
      report.log_to_tensorboard(writer)
      writer.close()
  except (IOError, OSError, TypeError, ValueError) as e:
    print('Error: cannot write the report: {}'.format(e), file=sys.stderr)
    return EXIT_ERROR
  print(report.summary())
  print('Report written to {}'.format(cfg.report_file))
  return EXIT_PASS if report.passed else EXIT_FAIL


def cli_main(argv=None):
  try:
    cfg = Config(argv)
  except UsageError as e:
    sys.stderr.write(build_parser().format_usage())
    sys.stderr.write('Error: {}\n'.format(e))
    return EXIT_ERROR
  try:
    exp_cfg = load_experiment_config(cfg)
  except (IOError, ValueError) as e:
    sys.stderr.write(build_parser().format_usage())
    sys.stderr.write('Error: {}\n'.format(e))
    return EXIT_ERROR

  may_make_dir(cfg.out_dir)
  redirects = []
  if cfg.log_to_file:
    redirects = [ReDirectSTD(cfg.stdout_file, 'stdout', False),
                 ReDirectSTD(cfg.stderr_file, 'stderr', False)]
  try:
    return _run(cfg, exp_cfg)
  finally:
    for r in reversed(redirects):
      r.close()

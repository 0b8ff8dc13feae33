"""Run one experiment: `python script/experiment/run.py converge --config
configs/converge_defocusing.cfg --out exp/converge`."""
from __future__ import print_function

import sys
sys.path.insert(0, '.')

from dnls_lab.harness.cli import cli_main


if __name__ == '__main__':
  sys.exit(cli_main(sys.argv[1:]))

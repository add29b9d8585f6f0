#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
The ``cli`` module is the command line interface of the ``superradiance``
application::

    superradiance run CONFIG [--output-dir DIR] [--jobs N] [--verify-oracle]
                             [--dump-generator PATH] [-v]
    superradiance presets
    superradiance preset NAME

Exit codes:

==  =========================================================
0   success
2   invalid configuration or parameters
3   capacity exceeded (basis or oracle too large)
4   no convergence (steady state not reached, stiff system)
5   internal invariant violated (symmetry, consistency, oracle)
==  =========================================================
"""

import argparse
import logging
import os
import sys

from superradiance.config import ConfigError, load_config
from superradiance.dynamics import NonConvergenceError, StiffnessError
from superradiance.generator import GeneratorError, build_generator
from superradiance.initial import InitialStateError
from superradiance.model import ModelError
from superradiance.observables import NumericalConsistencyError
from superradiance.oracle import SymmetryViolationError
from superradiance.presets import presets
from superradiance.readwrite import write_generator, write_table
from superradiance.scenarios import (
    OracleMismatchError, run_scenario, verify_oracle)
from superradiance.statistics import generator_info
from superradiance.symindex import CapacityError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_NONCONVERGENCE = 4
EXIT_INVARIANT = 5

# checked in order, so subclasses must precede their bases
EXIT_CODES = (
    (CapacityError, EXIT_CAPACITY),
    (MemoryError, EXIT_CAPACITY),
    ((ConfigError, ModelError, InitialStateError, GeneratorError, OSError),
     EXIT_CONFIG),
    ((NonConvergenceError, StiffnessError), EXIT_NONCONVERGENCE),
    ((SymmetryViolationError, NumericalConsistencyError,
      OracleMismatchError), EXIT_INVARIANT),
)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)

# sparsity statistics are written next to a dumped generator
INFO_SUFFIX = '.info'


def build_parser():
    """returns the argument parser of the ``superradiance`` command"""
    parser = argparse.ArgumentParser(
        prog='superradiance',
        description='collective emission of N identical multi-level atoms')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log progress (-v) or details (-vv)')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    run = commands.add_parser('run', help='run a JSON configuration')
    run.add_argument('config', help='run configuration file')
    run.add_argument('-o', '--output-dir', default='.',
                     help='directory for relative output paths')
    run.add_argument('-j', '--jobs', type=int, default=1,
                     help='worker threads/processes for assembly and sweeps')
    run.add_argument('--verify-oracle', action='store_true',
                     help=('compare a small copy of the system with the full '
                           'master equation before the run'))
    run.add_argument('--dump-generator', metavar='PATH',
                     help=('write the generator as coordinate-format text and its '
                           'sparsity statistics to PATH.info'))

    commands.add_parser('presets', help='list the bundled configurations')
    preset = commands.add_parser('preset',
                                 help='print a bundled configuration')
    preset.add_argument('name', help='name of the preset')
    return parser


def output_path(config, output_dir):
    """resolves the configured output path against ``output_dir``"""
    path = os.path.expanduser(config.output.path)
    if os.path.isabs(path):
        return path
    return os.path.join(output_dir, path)


def run_command(args, stdout=None):
    """executes ``superradiance run`` and returns the path written"""
    stdout = sys.stdout if stdout is None else stdout
    config = load_config(args.config)
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    if args.verify_oracle:
        if config.params is None:
            logger.warning("the %s scenario has no system to verify",
                           config.scenario)
        else:
            verify_oracle(config)
    if args.dump_generator:
        if config.params is None:
            raise ConfigError(
                "--dump-generator needs a configuration with params")
        params, rates = config.system()
        generator = build_generator(params, rates, config.terms.to_terms(),
                                    jobs=args.jobs)
        write_generator(generator, args.dump_generator)
        with open(args.dump_generator + INFO_SUFFIX, 'w') as info_file:
            stats = generator_info(generator, params, rates,
                                   output=info_file)
        logger.info("dumped generator: dim=%d nnz=%d density=%.3e",
                    stats.dim, stats.nnz, stats.density)
    table = run_scenario(config, jobs=args.jobs)
    path = output_path(config, args.output_dir)
    write_table(table, path, fmt=config.output.format)
    logger.info("wrote %d rows to %s", len(table), path)
    stdout.write(path + '\n')
    return path


def exit_code(error):
    """maps an exception to the documented exit code, or None"""
    for classes, code in EXIT_CODES:
        if isinstance(error, classes):
            return code
    return None


def main(argv=None, stdout=None, stderr=None):
    """
    entry point of the ``superradiance`` application; returns the exit
    status.
    """
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(
        level=LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)],
        format='%(levelname)s %(name)s: %(message)s')

    try:
        if args.command == 'presets':
            for name in presets.names:
                stdout.write(name + '\n')
        elif args.command == 'preset':
            try:
                stdout.write(presets.get_text(args.name))
            except KeyError as error:
                stderr.write("superradiance: error: {}\n".format(
                    error.args[0]))
                return EXIT_CONFIG
        else:
            run_command(args, stdout=stdout)
    except Exception as error:
        code = exit_code(error)
        if code is None:
            raise
        stderr.write("superradiance: error: {}\n".format(error))
        return code
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

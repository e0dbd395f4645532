import argparse
import logging
import sys
from dataclasses import replace

from . import __version__
from .config import parse_config_file
from .exceptions import ConfigError, JCThermoError, SolverError
from .logs import LOG, configure
from .runner import (cmd_fcondition, cmd_negativity, cmd_populations, cmd_steady, cmd_table1, cmd_teff,
                     cmd_tracedist)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3

SWEEP_COMMANDS = {'negativity': cmd_negativity, 'fcondition': cmd_fcondition, 'populations': cmd_populations}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', action='append', dest='configs', metavar='PATH', default=[],
                        help='JSON experiment configuration (repeat for several tracedist series)')
    common.add_argument('--out', metavar='PATH', help='Output file (default: config output.path, else stdout)')
    common.add_argument('--format', choices=('csv', 'json'), help='Output format (default: config output.format)')
    common.add_argument('--truncation', type=int, metavar='N', help='Override the truncation excitation n_d')
    common.add_argument('-v', '--verbose', action='store_true', help='Debug logging on stderr')

    parser = argparse.ArgumentParser(prog='jcthermo', description='Open Jaynes-Cummings thermalization and '
                                                                  'thermal entanglement calculations.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True
    sub.add_parser('steady', parents=[common], help='Steady-state populations and verdict')
    sub.add_parser('teff', parents=[common], help='Effective temperature grid')
    sub.add_parser('tracedist', parents=[common], help='Trace distance to Gibbs states over T_ref')
    sub.add_parser('negativity', parents=[common], help='Logarithmic negativity sweep over g_r for each s')
    sub.add_parser('fcondition', parents=[common], help='Block condition F_n over g_r for several n')
    sub.add_parser('populations', parents=[common], help='Thermal eigenstate probabilities over g_r')
    sub.add_parser('table1', parents=[common], help='Crossover and truncation indices at s = 11')
    return parser


def _load_configs(options):
    configs = [parse_config_file(path) for path in options.configs]
    if options.truncation is not None:
        if options.truncation < 1:
            raise ConfigError('Truncation must be at least 1', field='--truncation')
        configs = [replace(config, truncation=options.truncation) for config in configs]
    return configs


def run(options):
    configs = _load_configs(options)
    command = options.command
    if command in ('steady', 'teff'):
        if len(configs) != 1:
            raise ConfigError('%s takes exactly one --config' % command, field='--config')
        table = (cmd_steady if command == 'steady' else cmd_teff)(configs[0])
    elif command == 'tracedist':
        if not configs:
            raise ConfigError('tracedist needs at least one --config', field='--config')
        table = cmd_tracedist(configs)
    elif command in SWEEP_COMMANDS:
        if len(configs) > 1:
            raise ConfigError('%s takes at most one --config' % command, field='--config')
        table = SWEEP_COMMANDS[command](configs[0] if configs else None)
    else:
        table = cmd_table1()

    output = configs[0].output if configs else None
    fmt = options.format or (output.format if output else 'csv')
    path = options.out or (output.path if output else None)
    if path:
        table.write(path, fmt)
        LOG.info('Wrote %d rows to %s', len(table), path)
    else:
        sys.stdout.write(table.render(fmt))
    return table


def main(argv=None):
    options = build_parser().parse_args(argv)
    handler = configure(options.verbose, sys.stderr)
    try:
        run(options)
    except ConfigError as exc:
        sys.stderr.write('jcthermo: configuration error: %s\n' % exc)
        return EXIT_CONFIG
    except SolverError as exc:
        sys.stderr.write('jcthermo: solver error: %s\n' % exc)
        return EXIT_SOLVER
    except JCThermoError as exc:
        sys.stderr.write('jcthermo: %s\n' % exc)
        return EXIT_CONFIG
    finally:
        LOG.removeHandler(handler)
        LOG.setLevel(logging.NOTSET)
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

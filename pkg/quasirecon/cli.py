"""Command line driver.

    quasirecon figure1 --out figure1.csv
    quasirecon schedule --config scenario.cfg
    quasirecon reconstruct --config scenario.cfg --engine oracle --out grid.csv
    quasirecon verify
    quasirecon qpd --s -1 --out husimi.csv

Exit codes: 0 success, 1 failure (bad input, failed check, numerical error),
2 protocol not applicable (no phi = pi crossing).
"""
import argparse
import json
import logging
import math
import sys

import numpy as np

from quasirecon.config import ScenarioConfig, load_config
from quasirecon.exceptions import NoCrossingError, QuasireconError
from quasirecon.output import write_table
from quasirecon.params import ModelParams
from quasirecon.protocol import CrossingVariant, Engine, crossing_function, \
    find_measurement_time, reconstruct_grid
from quasirecon.quasiprobability import QpdConvention, map_grid, qpd_direct
from quasirecon.verify import format_report, run_checks


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NO_CROSSING = 2

CURVE_STEP = 0.01
CURVE_RATES = (('g_gamma005', 0.05), ('g_gamma01', 0.1))


class CommandLineParser(argparse.ArgumentParser):
    """Usage errors exit with EXIT_FAILURE; 2 is reserved for a missing crossing."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAILURE, f'{self.prog}: error: {message}\n')


def build_parser():
    parser = CommandLineParser(
        prog='quasirecon',
        description='Reconstruct s-parametrized quasiprobabilities of a decaying cavity '
                    'field from the polarization of a dispersively coupled atom.',
    )
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    subcommands = parser.add_subparsers(dest='command', required=True)

    for name, aliases, help_text in (
        ('figure1', ['curves'], 'single-angle crossing function curves'),
        ('schedule', [], 'measurement time t*, mu, phi, s and prefactor'),
        ('reconstruct', [], 'F_hat and F_direct over the phase-space grid'),
        ('verify', [], 'run the acceptance checks'),
        ('qpd', [], 'direct quasiprobability of the configured field'),
    ):
        command = subcommands.add_parser(name, aliases=aliases, help=help_text)
        command.add_argument('--config', help='scenario file of key = value lines')
        command.add_argument('--engine', choices=[e.value for e in Engine])
        command.add_argument('--convention', choices=['half', 'paper', 'normalized'])
        command.add_argument('--out', help='output path (default from the scenario)')
        command.add_argument('--workers', type=int)
        if name == 'qpd':
            command.add_argument('--s', type=float, default=0.0,
                                 help='ordering parameter, strictly below 1')
    return parser


def resolve_config(args) -> ScenarioConfig:
    config = load_config(args.config) if args.config else ScenarioConfig()
    changes = {}
    if args.engine:
        changes['engine'] = Engine.from_name(args.engine)
    if args.convention:
        changes['convention'] = QpdConvention.from_name(args.convention)
    if args.out:
        changes['output_path'] = args.out
    if args.workers is not None:
        changes['workers'] = args.workers
    return config.with_updates(**changes)


def curve_rows(step=CURVE_STEP):
    chi_t = np.arange(int(round(4 * math.pi / step)) + 1) * step
    curves = [crossing_function(ModelParams(chi=1.0, gamma=gamma), chi_t,
                                CrossingVariant.SINGLE_ANGLE)
              for _, gamma in CURVE_RATES]
    return zip(chi_t, *curves)


def cmd_figure1(config, args):
    path = args.out or 'figure1.csv'
    write_table(path, ['chi_t'] + [column for column, _ in CURVE_RATES], curve_rows())
    return EXIT_OK


def cmd_schedule(config, args):
    schedule = find_measurement_time(config.model, convention=config.convention)
    record = {
        't_star': schedule.t_star,
        'mu': schedule.mu,
        'phi': schedule.phi,
        's': schedule.s,
        'prefactor': schedule.prefactor,
        'convention': schedule.convention.value,
    }
    print(json.dumps(record, sort_keys=True))
    return EXIT_OK


def cmd_reconstruct(config, args):
    field = config.field.build(config.model.dim)
    schedule = find_measurement_time(config.model, convention=config.convention)
    records = reconstruct_grid(config.model, field, config.grid, schedule, config.engine,
                               config.integrator, config.workers)
    rows = ([r.alpha.real, r.alpha.imag, r.sigma_x, r.f_hat, r.f_direct, r.abs_error]
            for r in records)
    footer = [
        ('t_star', schedule.t_star),
        ('s', schedule.s),
        ('convention', schedule.convention.value),
        ('engine', config.engine.value),
        ('max_abs_error', max(r.abs_error for r in records)),
    ]
    write_table(config.output_path,
                ['re_alpha', 'im_alpha', 'sigma_x', 'f_hat', 'f_direct', 'abs_error'],
                rows, footer)
    return EXIT_OK


def cmd_qpd(config, args):
    field = config.field.build(config.model.dim)
    values = map_grid(lambda alpha: qpd_direct(field, alpha, args.s, config.convention),
                      config.grid, config.workers)
    rows = ([alpha.real, alpha.imag, value]
            for (_, _, alpha), value in zip(config.grid.points(), values))
    write_table(config.output_path, ['re_alpha', 'im_alpha', 'f_direct'], rows,
                [('s', args.s), ('convention', config.convention.value)])
    return EXIT_OK


def cmd_verify(config, args):
    results = run_checks(config)
    print(format_report(results))
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILURE


COMMANDS = {
    'figure1': cmd_figure1,
    'curves': cmd_figure1,
    'schedule': cmd_schedule,
    'reconstruct': cmd_reconstruct,
    'verify': cmd_verify,
    'qpd': cmd_qpd,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        config = resolve_config(args)
        logger.debug('Resolved scenario: %s', config)
        return COMMANDS[args.command](config, args)
    except NoCrossingError as e:
        print(f'error: {e} (scanned horizon {e.horizon:.6g})', file=sys.stderr)
        return EXIT_NO_CROSSING
    except QuasireconError as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_FAILURE

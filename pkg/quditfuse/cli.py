# -*- coding: utf-8 -*-
"""
命令行入口::

    quditfuse fuse --config scenario.json --out results/
    quditfuse verify --d 3 4 --ancillae 0 1 --trials 200 --seed 7
    quditfuse optimize --config run.json --format csv
    quditfuse haar-scan --config scenario.json --trials 1000
    quditfuse fuse --config scenario.json --lab-config lab.json

退出码：0 成功，1 定理被违反，2 配置错误，3 数值错误。
"""
from __future__ import absolute_import, unicode_literals

import argparse
import sys

from quditfuse import __version__
from quditfuse.exceptions import (
    ConfigError, DimensionError, NumericError, TheoremViolation
)
from quditfuse.lab import FORMATS, QuditLab
from quditfuse.logger import enable_pretty_logging, timed
from quditfuse.parser import (
    load_document, parse_run, parse_scan, parse_scenario, parse_verify
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog='quditfuse',
        description='Simulate and optimize generalized type-II fusion of qudit cluster states.'
    )
    parser.add_argument('--version', action='version', version=__version__)
    commands = parser.add_subparsers(dest='command')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='scenario / run JSON, or an earlier report')
    common.add_argument('--seed', type=int, help='override the seed of the config')
    common.add_argument('--out', help='directory for the report files')
    common.add_argument('--format', choices=FORMATS, default='both')
    common.add_argument(
        '--entropy-base', type=float, default=None,
        help='show entropies in this base (display only)'
    )
    common.add_argument(
        '--lab-config', help='JSON object of lab settings, e.g. {"threads": 4}'
    )
    common.add_argument('--verbose', action='store_true')

    commands.add_parser('fuse', parents=[common], help='fuse one scenario')

    verify = commands.add_parser(
        'verify', parents=[common], help='check the rank bounds on Haar unitaries'
    )
    verify.add_argument('--d', type=int, nargs='+', dest='dims')
    verify.add_argument('--ancillae', type=int, nargs='+')
    verify.add_argument('--trials', type=int)
    verify.add_argument('--vacuum-pads', type=int)

    run = commands.add_parser('optimize', parents=[common], help='search unitaries')
    run.add_argument('--budget', type=int)
    run.add_argument('--restarts', type=int)
    run.add_argument('--thresholds', type=float, nargs='+')

    scan = commands.add_parser(
        'haar-scan', parents=[common], help='success statistics over Haar unitaries'
    )
    scan.add_argument('--trials', type=int)
    return parser


def _document(args, required=True):
    if args.config is None:
        if required:
            raise ConfigError("--config is required for {}".format(args.command))
        return {}, None
    return load_document(args.config)


def _override(document, **values):
    document = dict(document)
    for key, value in values.items():
        if value is not None:
            document[key] = value
    return document


def cmd_fuse(lab, args):
    document, base_dir = _document(args)
    return lab.fuse(parse_scenario(_override(document, seed=args.seed), base_dir))


def cmd_verify(lab, args):
    document, _ = _document(args, required=False)
    return lab.verify(parse_verify(_override(
        document, d=args.dims, ancillae=args.ancillae, trials=args.trials,
        seed=args.seed, vacuum_pads=args.vacuum_pads
    )))


def _wrap_scenario(document):
    if 'scenario' not in document and 'd' in document:
        return {'scenario': document}
    return document


def cmd_optimize(lab, args):
    document, base_dir = _document(args)
    document = _override(
        _wrap_scenario(document), seed=args.seed, budget=args.budget,
        restarts=args.restarts, thresholds=args.thresholds
    )
    return lab.optimize(parse_run(document, base_dir))


def cmd_haar_scan(lab, args):
    document, base_dir = _document(args)
    document = _override(_wrap_scenario(document), seed=args.seed, trials=args.trials)
    return lab.haar_scan(parse_scan(document, base_dir))


COMMANDS = {
    'fuse': cmd_fuse,
    'verify': cmd_verify,
    'optimize': cmd_optimize,
    'haar-scan': cmd_haar_scan,
}


def _emit(lab, report, args):
    if args.out:
        lab.save(report, args.out, args.format, args.entropy_base)
    elif args.format == 'csv':
        sys.stdout.write(report.render_csv(entropy_base=args.entropy_base))
    else:
        sys.stdout.write(report.render_json(args.entropy_base))


def main(argv=None, lab=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG

    lab = lab or QuditLab()
    logger = lab.logger
    try:
        if args.lab_config:
            lab.config.from_json(args.lab_config)
    except ConfigError as e:
        enable_pretty_logging(logger, 'debug' if args.verbose else 'info')
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    enable_pretty_logging(logger, 'debug' if args.verbose else lab.config["LOG_LEVEL"])

    try:
        with timed(logger, args.command):
            report = COMMANDS[args.command](lab, args)
        _emit(lab, report, args)
    except TheoremViolation as e:
        logger.error("%s", e)
        for record in e.records:
            logger.error("violation: %s", record)
        return EXIT_VIOLATION
    except (ConfigError, DimensionError) as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except NumericError as e:
        logger.error("numeric error: %s", e)
        return EXIT_NUMERIC

    if report.violations:
        for v in report.violations:
            logger.error("violation: %s", v)
        return EXIT_VIOLATION
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

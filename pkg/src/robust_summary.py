# NOTICE
# Robust Summary Toolkit.
# See README.md for usage and CHANGELOG.md for release history.

'''
Toolkit main program

Invocation:
    robust-summary run     [--config FILE] [--algorithm A[,B]] [--d D[,D]] [--eps E | --eps-sweep]
                           [--trials T] [--seed S] [--out FILE] [--format json|csv]
                           [--dump-summaries DIR]
    robust-summary verify  [--suite axioms|lemmas|ratios|all] [--scale X] [--seed S]
    robust-summary gen     KIND [--param key=value ...] [--seed S] [--out FILE] [--bundle FILE]
    robust-summary replay  REPORT [--row I]

Exit codes:
    0   success
    1   a check failed (verify, replay)
    2   invalid configuration or malformed input
'''
import argparse
import copy
import json
import logging
import os
import sys

import yaml

from config import EPS_SWEEP, ExperimentConfig, apply_overrides, load_config, validate_config
from datasets import write_dataset
from experiment import (ExperimentReport, replay, rows_match, run_experiment, write_csv, write_json,
                        write_summaries)
from message import InvalidConfiguration, ToolkitError
from serializer import write_bundle
from synth import SYNTH_KINDS, synth_instance
from verify import SUITES, verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2


def parse_args(args):
    '''
    Arguments:
        args   argument list, usually sys.argv[1:]

    Return:
        Namespace with a `command` attribute and the options of that command
    '''
    parser = argparse.ArgumentParser(
        prog='robust-summary',
        description='Deletion-robust submodular maximization under matroid constraints.')
    parser.add_argument('--verbose', '-v', action='store_true', help='Log debug records to stderr.')
    commands = parser.add_subparsers(dest='command', required=True)

    # RUN
    run = commands.add_parser('run', help='Run an experiment and write a report.')
    run.add_argument('--config', type=str, help='YAML experiment file.')
    run.add_argument('--algorithm', type=str, help='Algorithm id, or a comma-separated list.')
    run.add_argument('--d', type=str, action='append', help='Deletion budget; repeatable or comma-separated.')
    run.add_argument('--eps', type=float, help='Threshold granularity, in (0, 1).')
    run.add_argument('--eps-sweep', action='store_true',
                     help='Run every eps of {}.'.format(', '.join(str(e) for e in EPS_SWEEP)))
    run.add_argument('--trials', type=int, help='Number of Phase-I seeds per cell.')
    run.add_argument('--seed', type=int, help='Base seed.')
    run.add_argument('--out', type=str, help='Report file; a table is printed to stdout when omitted.')
    run.add_argument('--format', choices=('json', 'csv'), default='json', help='Report format.')
    run.add_argument('--dump-summaries', type=str, metavar='DIR',
                     help='Write every Phase-I summary and the deletion plans as JSON into DIR.')

    # VERIFY
    check = commands.add_parser('verify', help='Run the property suites.')
    check.add_argument('--suite', choices=tuple(SUITES) + ('all',), default='all')
    check.add_argument('--scale', type=float, default=1.0, help='Multiplier on the number of randomized runs.')
    check.add_argument('--seed', type=int, default=0)

    # GEN
    gen = commands.add_parser('gen', help='Generate a synthetic instance.')
    gen.add_argument(type=str, dest='kind', choices=SYNTH_KINDS)
    gen.add_argument('--param', type=str, action='append', default=[], metavar='KEY=VALUE',
                     help='Generator parameter, e.g. n=200; repeatable.')
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--out', type=str, help='Write the instance as a dataset file.')
    gen.add_argument('--bundle', type=str, help='Write the instance as a binary bundle.')
    gen.add_argument('--comment', type=str, default='', help='Description stored in the bundle.')

    # REPLAY
    again = commands.add_parser('replay', help='Re-run one row of a JSON report.')
    again.add_argument(type=str, dest='report', help='JSON report written by run.')
    again.add_argument('--row', type=int, default=0, help='Row index.')

    return parser.parse_args(args)


def parse_params(items):
    '''
    Arguments:
        items   list of KEY=VALUE strings

    Return:
        dict with YAML-typed values (n=200 gives an int)
    '''
    params = {}
    for item in items:
        key, sep, value = item.partition('=')
        if not sep or not key:
            raise InvalidConfiguration('parameter {!r} is not KEY=VALUE'.format(item))
        params[key.strip()] = yaml.safe_load(value)
    return params


def build_config(args):
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if not args.config:
        errmsgs = validate_config(cfg)
        if errmsgs:
            raise InvalidConfiguration(errmsgs)
    return apply_overrides(cfg, algorithm=args.algorithm, d=args.d, eps=args.eps,
                           trials=args.trials, seed=args.seed)


def report_lines(report):
    lines = ['{:<26} {:>4} {:>5} {:>14} {:>8} {:>8} {:>10}'.format(
        'algorithm', 'd', 'trial', 'value', 'size', 'memory', 'calls')]
    for row in report.rows:
        lines.append('{:<26} {:>4} {:>5} {:>14.6g} {:>8} {:>8} {:>10}'.format(
            row.algorithm, row.d, row.trial, row.value, row.summary_size, row.peak_memory, row.oracle_calls))
    lines.append('')
    for cell in report.aggregates():
        lines.append('{algorithm:<26} {d:>4} mean value {value_mean:.6g} (sd {value_std:.3g}), '
                     'mean size {summary_size_mean:.1f}'.format(**cell))
    return lines


def command_run(args):
    cfg = build_config(args)
    if not cfg.theoretical_regime:
        logger.warning('eps=%s lies outside the regime eps < 1/3 where the approximation bounds hold', cfg.eps)
    summaries = {} if args.dump_summaries else None

    if args.eps_sweep:
        reports = []
        for eps in EPS_SWEEP:
            swept = copy.deepcopy(cfg)
            swept.eps = eps
            reports.append(run_experiment(swept, summaries=summaries))
        report = ExperimentReport(
            config=cfg.to_dict(), rows=[row for r in reports for row in r.rows],
            plans=reports[0].plans, bounds={repr(eps): r.bounds for eps, r in zip(EPS_SWEEP, reports)})
    else:
        report = run_experiment(cfg, summaries=summaries)

    if summaries is not None:
        write_summaries(summaries, args.dump_summaries)
        with open(os.path.join(args.dump_summaries, 'plans.json'), 'w') as outfile:
            json.dump(report.plans, outfile, indent=2, sort_keys=True)

    if args.out:
        if args.format == 'csv':
            write_csv(report, args.out)
        else:
            write_json(report, args.out)
        print('wrote {} rows to {}'.format(len(report.rows), args.out))
    else:
        for line in report_lines(report):
            print(line)
    return EXIT_OK


def command_verify(args):
    result = verify(args.suite, args.scale, args.seed)
    for line in result.lines():
        print(line)
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


def command_gen(args):
    if not args.out and not args.bundle:
        raise InvalidConfiguration('gen needs --out, --bundle or both')
    params = parse_params(args.param)
    data = synth_instance(args.kind, params, args.seed)
    if args.out:
        key = write_dataset(data, args.out)
        print('wrote {} file {}'.format(key, args.out))
    if args.bundle:
        write_bundle(data, args.bundle, args.kind, data.params, args.comment)
        print('wrote bundle {}'.format(args.bundle))
    return EXIT_OK


def command_replay(args):
    try:
        with open(args.report) as infile:
            report = json.load(infile)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidConfiguration('cannot read report {}: {}'.format(args.report, exc))
    recorded, replayed = replay(report, args.row)
    print('recorded: value {!r} size {} calls {}'.format(recorded.value, recorded.summary_size, recorded.oracle_calls))
    print('replayed: value {!r} size {} calls {}'.format(replayed.value, replayed.summary_size, replayed.oracle_calls))
    if rows_match(recorded, replayed):
        print('match')
        return EXIT_OK
    print('MISMATCH')
    return EXIT_CHECK_FAILED


COMMANDS = {
    'run': command_run,
    'verify': command_verify,
    'gen': command_gen,
    'replay': command_replay,
}


def main(argv=None):
    '''
    Toolkit main program
    '''
    args = parse_args(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        code = COMMANDS[args.command](args)
    except ToolkitError as exc:
        for errmsg in exc.error_messages:
            print(errmsg.format())
        code = EXIT_BAD_INPUT
    except OSError as exc:
        print(exc)
        code = EXIT_BAD_INPUT
    sys.exit(code)


if __name__ == '__main__':
    main()

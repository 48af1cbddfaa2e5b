#!/usr/bin/env python
# -*- coding: utf-8 -*-
import argparse
import logging
import os.path
import sys

import numpy as np

from libs import __version__
from libs.analysis import analyze_projection
from libs.catalog import default_gap_factor_for
from libs.constants import *
from libs.data_io import load_alpha, load_initial_data
from libs.eulerian import validate_initial_data
from libs.evolution import NonContractionError, solve
from libs.exact import exact_ex41, exact_lagrangian_ex41
from libs.harness import BoundViolationError, ExperimentConfig, run_convergence
from libs.lagrangian import check_lagrangian_invariants, exact_grid, lagrangian_error_report, to_lagrangian_grid
from libs.projection import project, projection_error_report
from libs.settings import Settings
from libs.solution_io import AnalysisWriter, LagrangianWriter, ProjectionWriter, SolutionWriter
from libs.utils import HSError, parse_times

__appname__ = 'alphaHS'

logger = logging.getLogger(__appname__)


def _print_report(title, report):
    print(title)
    for name in sorted(report.norms):
        bound = report.bounds.get(name)
        mark = '' if bound is None else ('  <= {0:.6g}{1}'.format(bound, '' if report.norms[name] <= bound
                                                                   else '  VIOLATED'))
        print('  {0:<12} {1:.6g}{2}'.format(name, report.norms[name], mark))


def _print_checks(title, report):
    print(title)
    for check in report.checks:
        print('  {0:<24} {1}  {2:.3g} {3}'.format(check.name, 'ok  ' if check.passed else 'FAIL',
                                                  check.violation, check.detail))


def cmd_project(args, settings):
    data = load_initial_data(args.data)
    proj = project(data, args.dx)
    grid = to_lagrangian_grid(proj)
    print('{0} double cells on [{1:g}, {2:g}], energy {3:.12g}'.format(
        proj.cells, proj.x_even[0], proj.x_even[-1], proj.total_energy))
    if args.report:
        _print_report('projection errors', projection_error_report(data, proj))
        _print_report('Lagrangian errors', lagrangian_error_report(data, grid))
        _print_checks('Lagrangian invariants', check_lagrangian_invariants(grid))
    if args.out:
        ProjectionWriter(proj, args.out).save()
        if args.dump_lagrangian:
            LagrangianWriter(grid, args.out + '_lagrangian').save()
    return EXIT_OK


def cmd_solve(args, settings):
    data = load_initial_data(args.data)
    alpha = load_alpha(args.alpha)
    if args.exact_grid:
        grid = exact_grid(data)
    else:
        grid = to_lagrangian_grid(project(data, args.dx))
    gap_factor = settings.resolve(SETTING_MERGE_GAP, args.gap_factor, default_gap_factor_for(args.data))
    times = parse_times(args.times)
    trajectory = solve(grid, alpha, args.T, output_times=times, gap_factor=gap_factor, max_step=args.max_step)
    print('breaking times: ' + ', '.join('{0:.12g}'.format(t) for t in trajectory.breaking_times))
    print('intervals: {0}, max beta passes: {1}, energy {2:.12g} -> {3:.12g}'.format(
        len(trajectory.intervals), trajectory.max_iterations, grid.energy, trajectory.energy_at(args.T)))
    if args.out:
        for t in sorted(set(times) | {args.T}):
            stem = '{0}_t{1:g}'.format(args.out, t)
            SolutionWriter(trajectory.eulerian_at(t), stem).save()
            if args.dump_lagrangian:
                LagrangianWriter(trajectory.state_at(t), stem + '_lagrangian').save()
        settings[SETTING_LAST_OUT_DIR] = os.path.dirname(os.path.abspath(args.out))
    return EXIT_OK


def cmd_exact(args, settings):
    if args.example != BUILTIN_EX41:
        raise HSError('closed form solution only for {0}'.format(BUILTIN_EX41))
    if args.xi is not None:
        xi = np.asarray(parse_times(args.xi))
        y, U, V = exact_lagrangian_ex41(args.t, xi)
        for row in zip(xi, y, U, V):
            print('xi={0:.12g} y={1:.17g} U={2:.17g} V={3:.17g}'.format(*row))
        return EXIT_OK
    x = np.asarray(parse_times(args.x)) if args.x else np.linspace(-1.0, 9.0, 41)
    u, F = exact_ex41(args.t, x)
    for row in zip(x, u, F):
        print('x={0:.12g} u={1:.17g} F={2:.17g}'.format(*row))
    return EXIT_OK


def cmd_analyze(args, settings):
    data = load_initial_data(args.data)
    pair, lengths = analyze_projection(data, args.dx, samples=args.samples)
    for row in lengths.rows:
        print('j={0:<4d} x={1:<10.6g} meas B={2:.12g} meas B_dx={3:.12g} nu_sing/2={4:.12g} {5}'.format(
            row.index, row.x_left, row.measure_B, row.measure_B_dx, row.half_singular,
            'ok' if row.passed else 'FAIL'))
    if args.out:
        AnalysisWriter(pair, args.out, lengths=lengths).save()
    return EXIT_OK if lengths.passed else EXIT_VALIDATION


def cmd_validate(args, settings):
    data = load_initial_data(args.data)
    alpha = load_alpha(args.alpha)
    report = validate_initial_data(data, alpha)
    _print_checks('initial data, total energy {0:.12g}'.format(report.total_energy), report)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_convergence(args, settings):
    config = ExperimentConfig(
        example=args.example, alpha=args.alpha, kmin=args.kmin, kmax=args.kmax, T=args.T,
        reference=args.reference, dx_ref=args.dx_ref,
        samples_per_unit=settings.resolve(SETTING_SAMPLES_PER_UNIT, args.samples_per_unit, DEFAULT_SAMPLES_PER_UNIT),
        out_dir=args.out, fast=args.fast,
        workers=settings.resolve(SETTING_WORKERS, args.workers, 1),
        gap_factor=settings.resolve(SETTING_MERGE_GAP, args.gap_factor, None),
        enforce_bounds=args.enforce_bounds, timings=not args.no_timings, numeric_events=args.numeric_events)
    try:
        report = run_convergence(config)
    except BoundViolationError as e:
        if e.report is not None:
            _print_convergence(e.report)
        raise
    _print_convergence(report)
    if args.out:
        settings[SETTING_LAST_OUT_DIR] = os.path.abspath(args.out)
    return EXIT_OK


def _print_convergence(report):
    print('{0:>3} {1:>12} {2:>12} {3:>8} {4:>10}'.format(*REPORT_COLUMNS))
    for row in report.rows:
        print('{0:>3d} {1:>12.6g} {2:>12.4g} {3:>8.3f} {4:>10.0f}{5}'.format(
            row.k, row.dx, row.err, row.eoc, row.wall_ms, '  ' + row.message if row.failed else ''))
    print('LS slope {0:.4f}, reference {1}'.format(report.slope, report.reference))


def cmd_settings(args, settings):
    if args.reset:
        settings.reset()
    for item in args.set or []:
        settings.assign(item)
    for key, value in settings.items():
        print('{0} = {1}'.format(key, '' if value is None else value))
    return EXIT_OK


def build_parser():
    argparser = argparse.ArgumentParser(prog=__appname__, description='alpha-dissipative Hunter-Saxton solver')
    argparser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    argparser.add_argument('-v', '--verbose', action='store_true')
    argparser.add_argument('-q', '--quiet', action='store_true')
    argparser.add_argument('--settings-file', default=None)
    sub = argparser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('project', help='project initial data onto a mesh')
    p.add_argument('--data', '--example', '--input', dest='data', default=BUILTIN_EX41,
                   help='builtin example name or initial data file')
    p.add_argument('--dx', type=float, required=True)
    p.add_argument('--report', action='store_true', help='print the projection error bounds')
    p.add_argument('--out', default=None)
    p.add_argument('--dump-lagrangian', action='store_true')
    p.set_defaults(func=cmd_project)

    p = sub.add_parser('solve', help='solve up to time T')
    p.add_argument('--data', '--example', '--input', dest='data', default=BUILTIN_EX41,
                   help='builtin example name or initial data file')
    p.add_argument('--alpha', default=BUILTIN_ALPHA1)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--dx', type=float)
    group.add_argument('--exact-grid', action='store_true')
    p.add_argument('--T', type=float, default=DEFAULT_T)
    p.add_argument('--times', default='', help='comma separated output times')
    p.add_argument('--gap-factor', type=float, default=None)
    p.add_argument('--max-step', type=float, default=None)
    p.add_argument('--out', default=None)
    p.add_argument('--dump-lagrangian', action='store_true')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('exact', help='closed form solution')
    p.add_argument('--example', default=BUILTIN_EX41)
    p.add_argument('--t', type=float, required=True)
    p.add_argument('--x', default=None, help='comma separated positions')
    p.add_argument('--xi', default=None, help='comma separated labels (Lagrangian output)')
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser('analyze', help='rescaling pair and breaking set lengths')
    p.add_argument('--data', '--example', '--input', dest='data', default=BUILTIN_EX41,
                   help='builtin example name or initial data file')
    p.add_argument('--dx', type=float, required=True)
    p.add_argument('--samples', type=int, default=64)
    p.add_argument('--out', default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser('validate', help='check initial data and alpha')
    p.add_argument('--data', '--example', '--input', dest='data', default=BUILTIN_EX41,
                   help='builtin example name or initial data file')
    p.add_argument('--alpha', default=BUILTIN_ALPHA1)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('convergence', help='convergence study over dx = 4^-k')
    p.add_argument('--example', default=BUILTIN_EX42)
    p.add_argument('--alpha', default=None)
    p.add_argument('--kmin', type=int, default=DEFAULT_KMIN)
    p.add_argument('--kmax', type=int, default=DEFAULT_KMAX)
    p.add_argument('--T', type=float, default=DEFAULT_T)
    p.add_argument('--reference', choices=(REFERENCE_EXACT, REFERENCE_FINE), default=None)
    p.add_argument('--dx-ref', type=float, default=None)
    p.add_argument('--samples-per-unit', type=int, default=None)
    p.add_argument('--out', default=None)
    p.add_argument('--fast', action='store_true')
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--gap-factor', type=float, default=None)
    p.add_argument('--enforce-bounds', action='store_true')
    p.add_argument('--no-timings', action='store_true', help='leave wall_ms empty for reproducible files')
    p.add_argument('--numeric-events', action='store_true',
                   help='also sample the error at the time steps of each numerical run')
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser('settings', help='show or edit stored defaults')
    p.add_argument('--set', action='append', metavar='KEY=VALUE')
    p.add_argument('--reset', action='store_true')
    p.set_defaults(func=cmd_settings)
    return argparser


def main(argv=None):
    args = build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    settings = Settings(args.settings_file)
    settings.load()
    try:
        status = args.func(args, settings)
        settings.save()
    except NonContractionError as e:
        logger.error('%s', e)
        return EXIT_NON_CONTRACTION
    except BoundViolationError as e:
        logger.error('%s', e)
        return EXIT_BOUND_VIOLATION
    except HSError as e:
        logger.error('%s: %s', type(e).__name__, e)
        return EXIT_VALIDATION
    except Exception:
        logger.exception('unexpected failure')
        return EXIT_FAILURE
    return status


if __name__ == '__main__':
    sys.exit(main())

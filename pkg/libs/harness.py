#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Convergence experiments on the meshes dx_k = 4^-k.

Every row projects the initial data, evolves the Lagrangian grid up to T and
compares u with a reference solution in the relative sup norm over [0, T].
"""

import logging
import math
import multiprocessing
import os
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from libs import catalog
from libs.constants import (BUILTIN_CUSP, BUILTIN_EX41, BUILTIN_EX42, CUSP_DX_REF, CUSP_DX_REF_FAST,
                            DEFAULT_KMAX, DEFAULT_KMIN, DEFAULT_SAMPLES_PER_UNIT, DEFAULT_T,
                            FLOOR_MARGIN, MAX_EVENT_SAMPLES, REFERENCE_EXACT, REFERENCE_FINE)
from libs.data_io import load_alpha, load_initial_data
from libs.eulerian import ParameterError
from libs.evolution import solve
from libs.exact import ExactEx41Reference, check_ex41_alpha
from libs.lagrangian import exact_grid, lagrangian_error_report, to_lagrangian_grid
from libs.projection import project, projection_error_report
from libs.report_io import ReportWriter
from libs.solution_io import SolutionWriter
from libs.utils import HSError, least_squares_line, thin_evenly

logger = logging.getLogger(__name__)

# Regularity beta of u_x in B_2^beta, used for the guaranteed rate
EXAMPLE_REGULARITY = {BUILTIN_EX42: 0.5, BUILTIN_CUSP: 1.0 / 6.0}
ITERATION_BOUND = 3


class DegenerateReferenceError(HSError):
    pass


class BoundViolationError(HSError):

    def __init__(self, violations, report=None):
        super(BoundViolationError, self).__init__('acceptance bounds violated: ' + '; '.join(violations))
        self.violations = list(violations)
        self.report = report


@dataclass
class ExperimentConfig:
    example: str = BUILTIN_EX42
    alpha: Optional[str] = None
    kmin: int = DEFAULT_KMIN
    kmax: int = DEFAULT_KMAX
    T: float = DEFAULT_T
    reference: Optional[str] = None
    dx_ref: Optional[float] = None
    samples_per_unit: int = DEFAULT_SAMPLES_PER_UNIT
    out_dir: Optional[str] = None
    fast: bool = False
    workers: int = 1
    gap_factor: Optional[float] = None
    enforce_bounds: bool = False
    timings: bool = True
    numeric_events: bool = False

    def __post_init__(self):
        if self.alpha is None:
            self.alpha = catalog.default_alpha_for(self.example)
        if self.reference is None:
            self.reference = REFERENCE_EXACT if self.example in (BUILTIN_EX41, BUILTIN_EX42) else REFERENCE_FINE
        if self.gap_factor is None:
            self.gap_factor = catalog.default_gap_factor_for(self.example)

    def validate(self):
        if self.kmin > self.kmax:
            raise ParameterError('empty k range {0}..{1}'.format(self.kmin, self.kmax))
        if self.kmin < 0:
            raise ParameterError('k must be nonnegative')
        if not self.T > 0.0:
            raise ParameterError('final time must be positive, got {0}'.format(self.T))
        if self.reference not in (REFERENCE_EXACT, REFERENCE_FINE):
            raise ParameterError('reference must be {0!r} or {1!r}'.format(REFERENCE_EXACT, REFERENCE_FINE))
        if self.reference == REFERENCE_EXACT and self.example not in (BUILTIN_EX41, BUILTIN_EX42):
            raise ParameterError('no exact reference for {0!r}, use the fine grid reference'.format(self.example))
        if self.dx_ref is not None and not self.dx_ref > 0.0:
            raise ParameterError('reference dx must be positive')
        if self.samples_per_unit < 1:
            raise ParameterError('at least one time sample per unit time is needed')
        if self.workers < 1:
            raise ParameterError('workers must be at least 1')
        if self.gap_factor < 0.0:
            raise ParameterError('gap factor must be nonnegative')
        return self

    @property
    def ks(self):
        return list(range(self.kmin, self.kmax + 1))

    def dx_values(self):
        return [4.0 ** -k for k in self.ks]

    @property
    def reference_dx(self):
        if self.dx_ref is not None:
            return float(self.dx_ref)
        return CUSP_DX_REF_FAST if self.fast else CUSP_DX_REF

    def resolve_data(self):
        return load_initial_data(self.example)

    def resolve_alpha(self):
        return load_alpha(self.alpha)


class TrajectoryReference(object):
    """A computed trajectory used as reference solution."""

    def __init__(self, trajectory, breaking_times=None, label='fine'):
        self.trajectory = trajectory
        self.label = label
        if breaking_times is None:
            breaking_times = trajectory.breaking_times
        self.breaking_times = tuple(float(t) for t in breaking_times)

    def eulerian_at(self, t, cache=False):
        return self.trajectory.eulerian_at(t, cache=cache)


def build_reference(config, data, alpha):
    T = config.T
    if config.reference == REFERENCE_EXACT and config.example == BUILTIN_EX41:
        check_ex41_alpha(alpha)
        logger.info('reference: closed form solution')
        return ExactEx41Reference()
    if config.reference == REFERENCE_EXACT:
        logger.info('reference: exact grid of the multipeakon')
        trajectory = solve(exact_grid(data), alpha, T)
        events = [t for t in catalog.exact_breaking_times(config.example) if t <= T]
        return TrajectoryReference(trajectory, breaking_times=events, label='semi-exact')
    dx_ref = config.reference_dx
    logger.info('reference: fine grid with dx=%g', dx_ref)
    grid = to_lagrangian_grid(project(data, dx_ref))
    trajectory = solve(grid, alpha, T, gap_factor=config.gap_factor)
    return TrajectoryReference(trajectory, label='fine dx={0:g}'.format(dx_ref))


def sample_times(T, samples_per_unit, *event_lists):
    """Uniform times on [0, T] together with the event times of each list."""
    uniform = np.linspace(0.0, T, int(math.ceil(samples_per_unit * T)) + 1)
    parts = [uniform]
    for events in event_lists:
        events = np.asarray(events, dtype=float)
        events = events[(events >= 0.0) & (events <= T)]
        if events.size > MAX_EVENT_SAMPLES:
            logger.warning('%d event times thinned to %d samples', events.size, MAX_EVENT_SAMPLES)
        parts.append(thin_evenly(np.unique(events), MAX_EVENT_SAMPLES))
    return np.unique(np.concatenate(parts))


def relative_error(reference, numeric, T, samples_per_unit=DEFAULT_SAMPLES_PER_UNIT, numeric_events=False):
    """max_t ||u(t) - u_dx(t)||_inf / ||u(t)||_inf with u taken from the reference.

    Time samples are the uniform grid and the reference breaking times, plus
    the schedule of the numerical run if numeric_events is set. Both solutions
    are piecewise linear in x, so the sup is attained on the union of their
    breakpoints.
    """
    events = [reference.breaking_times]
    if numeric_events:
        events.append(numeric.times)
    times = sample_times(T, samples_per_unit, *events)
    worst = 0.0
    for t in times:
        ref = reference.eulerian_at(t, cache=False)
        num = numeric.eulerian_at(t, cache=False)
        norm = ref.u.sup_norm()
        if norm == 0.0:
            raise DegenerateReferenceError('reference solution vanishes at t={0:g}'.format(t))
        xs = np.union1d(ref.u.x, num.u.x)
        gap = float(np.max(np.abs(ref.u(xs) - num.u(xs))))
        worst = max(worst, gap / norm)
    return worst


@dataclass
class ConvergenceRow:
    k: int
    dx: float
    err: float
    eoc: float = float('nan')
    wall_ms: float = float('nan')
    iterations: int = 0
    failed: bool = False
    message: str = ''


@dataclass
class ConvergenceReport:
    rows: List[ConvergenceRow] = field(default_factory=list)
    slope: float = float('nan')
    intercept: float = float('nan')
    config: dict = field(default_factory=dict)
    reference: str = ''
    floor: Optional[float] = None

    @property
    def errors(self):
        return np.array([r.err for r in self.rows])

    @property
    def dx(self):
        return np.array([r.dx for r in self.rows])

    @property
    def failed_rows(self):
        return [r for r in self.rows if r.failed]

    @property
    def wall_ms(self):
        return float(sum(r.wall_ms for r in self.rows if math.isfinite(r.wall_ms)))

    @property
    def max_iterations(self):
        return max((r.iterations for r in self.rows), default=0)

    @property
    def floor_passed(self):
        if self.floor is None or not math.isfinite(self.slope):
            return True
        return self.slope >= self.floor

    def to_dict(self):
        out = {
            'rows': [asdict(r) for r in self.rows],
            'slope': self.slope,
            'intercept': self.intercept,
            'config': self.config,
            'reference': self.reference,
            'floor': self.floor,
        }
        return out


def _eoc(prev, row):
    if prev.err > 0.0 and row.err > 0.0 and math.isfinite(prev.err) and math.isfinite(row.err):
        return math.log(prev.err / row.err) / math.log(prev.dx / row.dx)
    return float('nan')


def eoc_table(errors, ks=None):
    """ConvergenceReport from (dx, err) pairs or ConvergenceRows, coarsest first."""
    if not len(errors):
        raise ParameterError('no convergence rows')
    rows = []
    for i, entry in enumerate(errors):
        if isinstance(entry, ConvergenceRow):
            rows.append(entry)
            continue
        dx, err = entry
        k = ks[i] if ks is not None else int(round(-math.log(dx, 4.0)))
        rows.append(ConvergenceRow(k=k, dx=float(dx), err=float(err)))
    rows[0].eoc = float('nan')
    for prev, row in zip(rows[:-1], rows[1:]):
        row.eoc = _eoc(prev, row)
    usable = [r for r in rows if not r.failed and r.err > 0.0 and math.isfinite(r.err)]
    slope, intercept = least_squares_line([math.log(r.dx) for r in usable],
                                          [math.log(r.err) for r in usable])
    return ConvergenceReport(rows=rows, slope=slope, intercept=intercept)


def theoretical_floor(beta):
    """Lowest acceptable observed rate for u_x in B_2^beta."""
    return min(0.125, 0.25 * beta) - FLOOR_MARGIN


def check_floor(report, beta):
    report.floor = theoretical_floor(beta)
    return report.floor_passed


@dataclass
class RowResult:
    k: int
    dx: float
    trajectory: object = None
    wall_ms: float = float('nan')
    message: str = ''
    violations: List[str] = field(default_factory=list)


def _bound_violations(config, data, proj, grid, trajectory):
    violations = []
    dx = proj.dx
    for name in projection_error_report(data, proj).violations:
        violations.append('projection {0} at dx={1:g}'.format(name, dx))
    for name in lagrangian_error_report(data, grid).violations:
        violations.append('Lagrangian {0} at dx={1:g}'.format(name, dx))
    if config.example in (BUILTIN_EX41, BUILTIN_EX42) and trajectory.max_iterations > ITERATION_BOUND:
        violations.append('{0} beta passes at dx={1:g}'.format(trajectory.max_iterations, dx))
    return violations


def solve_row(config, k):
    """Numerical trajectory of one mesh level; solver errors end up in the message."""
    dx = 4.0 ** -k
    row = RowResult(k=k, dx=dx)
    started = time.perf_counter()
    try:
        data = config.resolve_data()
        alpha = config.resolve_alpha()
        proj = project(data, dx)
        grid = to_lagrangian_grid(proj)
        row.trajectory = solve(grid, alpha, config.T, gap_factor=config.gap_factor)
        if config.enforce_bounds:
            row.violations = _bound_violations(config, data, proj, grid, row.trajectory)
    except HSError as e:
        row.message = '{0}: {1}'.format(type(e).__name__, e)
        logger.warning('row k=%d failed: %s', k, row.message)
    row.wall_ms = 1000.0 * (time.perf_counter() - started)
    return row


def _solve_task(task):
    return solve_row(*task)


def _solve_rows(config):
    tasks = [(config, k) for k in config.ks]
    if config.workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(processes=min(config.workers, len(tasks))) as pool:
            return pool.map(_solve_task, tasks)
    return [_solve_task(task) for task in tasks]


def run_convergence(config):
    """Run every mesh level of the config and write the report files.

    Returns the ConvergenceReport. Raises BoundViolationError after writing
    the files if enforce_bounds is set and a bound failed.
    """
    config.validate()
    data = config.resolve_data()
    alpha = config.resolve_alpha()
    reference = build_reference(config, data, alpha)
    label = getattr(reference, 'label', 'exact')

    rows, violations, trajectories = [], [], {}
    for result in _solve_rows(config):
        row = ConvergenceRow(k=result.k, dx=result.dx, err=float('nan'), wall_ms=result.wall_ms)
        violations.extend(result.violations)
        if result.trajectory is None:
            row.failed, row.message = True, result.message
        else:
            row.iterations = result.trajectory.max_iterations
            try:
                row.err = relative_error(reference, result.trajectory, config.T, config.samples_per_unit,
                                         numeric_events=config.numeric_events)
            except HSError as e:
                row.failed, row.message = True, '{0}: {1}'.format(type(e).__name__, e)
            trajectories[result.k] = result.trajectory
        logger.info('k=%d dx=%g err=%.6g (%d passes, %.0f ms)%s', row.k, row.dx, row.err,
                    row.iterations, row.wall_ms, ' FAILED' if row.failed else '')
        rows.append(row)

    report = eoc_table(rows)
    report.config = asdict(config)
    report.reference = label
    beta = EXAMPLE_REGULARITY.get(config.example)
    if beta is not None and not check_floor(report, beta):
        if config.enforce_bounds:
            violations.append('LS slope {0:.3g} below {1:.3g}'.format(report.slope, report.floor))
    logger.info('LS slope %.4g over %d rows', report.slope, len(rows))

    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        ReportWriter(config.out_dir, timings=config.timings).save(report)
        for k, trajectory in sorted(trajectories.items()):
            path = os.path.join(config.out_dir, 'solution_k{0}'.format(k))
            SolutionWriter(trajectory.eulerian_at(config.T), path).save()
    if violations:
        raise BoundViolationError(violations, report)
    return report

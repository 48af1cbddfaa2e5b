#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Numerical solution operator on a Lagrangian grid.

Between breaking times every cell evolves by a quadratic polynomial in time.
A cell c that breaks at tau_c loses delta_c = beta_c * (V_c+1 - V_c) of its
energy at that instant, so the whole trajectory is determined by the initial
grid together with the per-cell drops:

    zeta_j(t) = zeta_j + U_j t + (V_j / 4 - V_inf / 8) t^2 + (W(t) - 2 P_j(t)) / 8
    U_j(t)    = U_j + (V_j / 2 - V_inf / 4) t + (S(t) - 2 Q_j(t)) / 4
    V_j(t)    = V_j - sum_{c < j, tau_c <= t} delta_c

with P_j, Q_j the sums of delta_c (t - tau_c)^2 and delta_c (t - tau_c) over the
broken cells left of node j, and W, S their totals. The dissipation factors
beta are fixed interval by interval with the beta iteration.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from libs.constants import DEFAULT_GAP_FACTOR, MAX_ITERATIONS, TIME_MERGE_TOL
from libs.eulerian import ParameterError
from libs.lagrangian import CorruptedStateError, LagrangianGrid, to_eulerian
from libs.utils import HSError, merge_close

logger = logging.getLogger(__name__)

# Stopping threshold of the beta iteration on grids without a mesh width
EXACT_TOLERANCE = 1e-14


class NonContractionError(HSError):

    def __init__(self, start, end, iterations, residuals):
        super(NonContractionError, self).__init__(
            'beta iteration on ({0:.12g}, {1:.12g}] did not settle after {2} passes '
            '(last residuals {3})'.format(start, end, iterations,
                                          ', '.join('{0:.3g}'.format(r) for r in residuals[-3:])))
        self.start = start
        self.end = end
        self.iterations = iterations
        self.residuals = list(residuals)


@dataclass(frozen=True)
class BreakingSchedule:
    """Times at which the evolution is restarted.

    breaking_times holds 0, the accepted numerical breaking times and T;
    times adds the subdivision points. cell_tau is the breaking time of every
    cell after merging, inf for cells that do not break in (0, T].
    """
    breaking_times: np.ndarray
    times: np.ndarray
    cell_tau: np.ndarray
    dropped: np.ndarray
    step_cap: float = math.inf
    order: np.ndarray = field(default=None, repr=False)
    sorted_tau: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.order is None:
            object.__setattr__(self, 'order', np.argsort(self.cell_tau, kind='stable'))
        object.__setattr__(self, 'sorted_tau', self.cell_tau[self.order])

    def cells_between(self, start, end):
        """Cells with start < tau <= end, in index order."""
        lo, hi = np.searchsorted(self.sorted_tau, [start, end], side='right')
        return np.sort(self.order[lo:hi])

    @property
    def intervals(self):
        return list(zip(self.times[:-1], self.times[1:]))

    @property
    def final_time(self):
        return float(self.times[-1])


def _subdivide(times, cap):
    if not math.isfinite(cap) or cap <= 0.0:
        return times
    out = [times[0]]
    for a, b in zip(times[:-1], times[1:]):
        pieces = int(math.ceil((b - a) / cap - 1e-12))
        if pieces > 1:
            out.extend(a + (b - a) * np.arange(1, pieces) / pieces)
        out.append(b)
    return np.asarray(out, dtype=float)


def extract_breaking_times(grid, T, alpha, gap_factor=DEFAULT_GAP_FACTOR, max_step=None,
                           merge_tol=TIME_MERGE_TOL, dx=None):
    """Breaking schedule on (0, T] for a grid at t = 0."""
    if not T > 0.0:
        raise ParameterError('final time must be positive, got {0}'.format(T))
    if gap_factor < 0.0:
        raise ParameterError('gap factor must be nonnegative')
    tau = np.array(grid.tau, dtype=float)
    inside = (tau > 0.0) & (tau <= T)
    reps, groups = merge_close(tau[inside], merge_tol)
    reps = np.minimum(reps, T)
    cell_tau = np.where(tau > T, np.inf, tau)
    cell_tau[inside] = reps[groups]
    if reps.size:
        logger.debug('%d breaking cells merged into %d times', int(inside.sum()), reps.size)

    accepted, dropped = [], []
    mesh = grid.dx if dx is None else dx
    gap = gap_factor * float(np.max(np.abs(grid.U))) * mesh
    last = 0.0
    for r in reps:
        if gap > 0.0 and r - last < gap and r < T:
            dropped.append(r)
            continue
        accepted.append(r)
        last = r
    breaking = np.unique(np.concatenate(([0.0], accepted, [T])))

    cap = math.inf
    if alpha.lipschitz > 0.0:
        sup_u = float(np.max(np.abs(grid.U)))
        cap = 1.0 / (1.0 + alpha.lipschitz * (sup_u + 0.25 * T * grid.energy))
    times = _subdivide(breaking, cap)
    if max_step is not None:
        if not max_step > 0.0:
            raise ParameterError('max_step must be positive')
        times = _subdivide(times, max_step)
    if dropped:
        logger.info('breaking times %s closer than %.3g to their predecessor are not restart times',
                    ', '.join('{0:.6g}'.format(d) for d in dropped), gap)
    return BreakingSchedule(breaking_times=breaking, times=times, cell_tau=cell_tau,
                            dropped=np.asarray(dropped, dtype=float), step_cap=cap)


def evolve_half_cell(derivs, beta, tau, s, t):
    """Cell derivatives (y_xi, U_xi, V_xi, H_xi) at time s carried to time t.

    The fraction beta of V_xi is removed if the cell breaks in (s, t].
    Works on scalars and on arrays of cells alike.
    """
    yx, Ux, Vx, Hx = derivs
    tau = np.asarray(tau, dtype=float)
    b = np.where((s < tau) & (tau <= t), beta, 0.0)
    h = t - s
    w = np.where(b > 0.0, t - tau, 0.0)
    yx_t = yx + Ux * h + 0.25 * Vx * h * h - 0.25 * b * Vx * w * w
    Ux_t = Ux + 0.5 * Vx * h - 0.5 * b * Vx * w
    Vx_t = (1.0 - b) * Vx
    if np.ndim(yx_t) == 0:
        return float(yx_t), float(Ux_t), float(Vx_t), float(Hx)
    return yx_t, Ux_t, Vx_t, np.array(Hx, dtype=float, copy=True)


class DissipationLedger(object):
    """Binary indexed sums of delta, delta * tau and delta * tau^2 by cell.

    Answers the prefix sums over the cells left of a set of nodes in
    O(log N) each, which keeps the cost of an interval proportional to the
    number of cells breaking in it.
    """

    def __init__(self, cells):
        self.cells = int(cells)
        self.tree = np.zeros((3, self.cells + 1))
        self.totals = np.zeros(3)

    def add(self, cells, delta, tau):
        cells = np.asarray(cells, dtype=np.intp)
        if cells.size == 0:
            return
        delta = np.asarray(delta, dtype=float)
        tau = np.asarray(tau, dtype=float)
        values = np.vstack((delta, delta * tau, delta * tau * tau))
        self.totals += values.sum(axis=1)
        index = cells + 1
        while index.size:
            for row in range(3):
                np.add.at(self.tree[row], index, values[row])
            index = index + (index & -index)
            keep = index <= self.cells
            index = index[keep]
            values = values[:, keep]

    def prefix(self, nodes):
        """Sums over the cells c < j for every node j."""
        index = np.array(nodes, dtype=np.intp, ndmin=1)
        out = np.zeros((3, index.size))
        index = np.minimum(index, self.cells)
        while np.any(index > 0):
            live = index > 0
            out[:, live] += self.tree[:, index[live]]
            index = np.where(live, index - (index & -index), 0)
        return out

    @staticmethod
    def moments(sums, t):
        """(sum delta (t - tau)^2, sum delta (t - tau)) from the three sums."""
        a, b, c = sums
        return t * t * a - 2.0 * t * b + c, t * a - b

    @property
    def total_delta(self):
        return float(self.totals[0])


class EvolutionState(object):
    """Solver state at a restart time.

    The ledger and the per-cell arrays are shared with the state produced by
    commit(), which takes them over; the committed state is stale from then on.
    """

    def __init__(self, grid, schedule, ledger=None, beta=None, delta=None, time=0.0, index=0,
                 cell_energy=None):
        self.grid = grid
        self.schedule = schedule
        self.ledger = ledger if ledger is not None else DissipationLedger(grid.cells)
        self.beta = beta if beta is not None else np.zeros(grid.cells)
        self.delta = delta if delta is not None else np.zeros(grid.cells)
        self.time = float(time)
        self.index = int(index)
        self.stale = False
        self._dV = np.diff(grid.V) if cell_energy is None else cell_energy

    @classmethod
    def initial(cls, grid, schedule):
        if grid.time != 0.0:
            raise ParameterError('evolution starts from a grid at t = 0')
        return cls(grid, schedule)

    def _check(self):
        if self.stale:
            raise CorruptedStateError('evolution state at t={0:g} was already advanced'.format(self.time))

    @property
    def tau(self):
        return self.schedule.cell_tau

    @property
    def energy(self):
        self._check()
        return float(self.grid.V[-1] - self.ledger.total_delta)

    @property
    def cell_energy(self):
        return self._dV

    def node_values(self, nodes, t):
        """(y, U) at the given nodes at time t >= self.time, from committed drops only."""
        self._check()
        g = self.grid
        nodes = np.array(nodes, dtype=np.intp, ndmin=1)
        v_inf = g.V[-1]
        square, linear = self.ledger.moments(self.ledger.totals, t)
        p_square, p_linear = self.ledger.moments(self.ledger.prefix(nodes), t)
        y = (g.y[nodes] + g.U[nodes] * t + (0.25 * g.V[nodes] - 0.125 * v_inf) * t * t
             + 0.125 * (square - 2.0 * p_square))
        U = g.U[nodes] + (0.5 * g.V[nodes] - 0.25 * v_inf) * t + 0.25 * (linear - 2.0 * p_linear)
        return y, U

    def commit(self, result):
        self._check()
        if abs(result.start - self.time) > TIME_MERGE_TOL:
            raise CorruptedStateError('interval starts at {0:g}, state is at {1:g}'.format(
                result.start, self.time))
        self.ledger.add(result.cells, result.delta, self.tau[result.cells])
        self.beta[result.cells] = result.beta
        self.delta[result.cells] = result.delta
        nxt = EvolutionState(self.grid, self.schedule, self.ledger, self.beta, self.delta,
                             time=result.end, index=self.index + 1, cell_energy=self._dV)
        self.stale = True
        return nxt


@dataclass
class IntervalResult:
    start: float
    end: float
    cells: np.ndarray
    beta: np.ndarray
    delta: np.ndarray
    iterations: int
    residuals: List[float] = field(default_factory=list)
    energy_before: float = 0.0
    energy_after: float = 0.0


def _prefix_shift(weights):
    """(total - 2 * prefix) over cells sorted by index, prefix excluding the cell."""
    prefix = np.concatenate(([0.0], np.cumsum(weights)[:-1]))
    return weights.sum() - 2.0 * prefix


def _residual(d, tau, events):
    worst = 0.0
    for s in events:
        w = d * np.clip(s - tau, 0.0, None) ** 2
        prefix = np.concatenate(([0.0], np.cumsum(w)))
        worst = max(worst, float(np.max(np.abs(prefix[-1] - 2.0 * prefix))) / 8.0)
    return worst


def iterate_interval(state, end, alpha, dx=None, tolerance=None, max_iterations=MAX_ITERATIONS):
    """Dissipation factors of the cells breaking in (state.time, end]."""
    start = state.time
    tau = state.tau
    cells = state.schedule.cells_between(start, end)
    energy_before = state.energy
    dV = state.cell_energy[cells]
    residuals = []
    if cells.size == 0:
        beta = np.zeros(0)
        iterations = 1
    elif alpha.is_constant:
        beta = np.full(cells.size, alpha.value)
        iterations = 1
    else:
        dx = state.grid.dx if dx is None else dx
        if tolerance is None:
            tolerance = dx * dx / alpha.lipschitz if dx > 0.0 else EXACT_TOLERANCE
        tau_c = tau[cells]
        events = np.unique(np.append(tau_c, end))
        base_y, _ = state.node_values(cells, end)
        beta = np.zeros(cells.size)
        iterations = 1
        while True:
            iterations += 1
            if iterations > max_iterations:
                raise NonContractionError(start, end, iterations - 1, residuals)
            y = base_y + 0.125 * _prefix_shift(beta * dV * (end - tau_c) ** 2)
            update = np.asarray(alpha(y), dtype=float)
            residuals.append(_residual((update - beta) * dV, tau_c, events))
            beta = update
            if residuals[-1] <= tolerance:
                break
    delta = beta * dV
    result = IntervalResult(start=start, end=float(end), cells=cells, beta=beta, delta=delta,
                            iterations=iterations, residuals=residuals,
                            energy_before=energy_before,
                            energy_after=energy_before - float(delta.sum()))
    if cells.size:
        logger.debug('interval (%.6g, %.6g]: %d breaking cells, %d passes, energy %.6g -> %.6g',
                     start, end, cells.size, iterations, result.energy_before, result.energy_after)
    return result


def update_asymptotes(state, t, cells=(), betas=()):
    """Left asymptotes (U, zeta) at t in (state.time, next restart] given the
    dissipation factors of the cells breaking in between."""
    t0 = state.time
    h = t - t0
    y0, U0 = state.node_values([0], t0)
    zeta0 = float(y0[0] - state.grid.xi[0])
    U0 = float(U0[0])
    v_inf = state.energy
    cells = np.asarray(cells, dtype=np.intp)
    lost = np.asarray(betas, dtype=float) * state.cell_energy[cells]
    lag = np.clip(t - state.tau[cells], 0.0, None)
    U_left = U0 - 0.25 * v_inf * h + 0.25 * float(np.sum(lost * lag))
    zeta_left = zeta0 + U0 * h - 0.125 * v_inf * h * h + 0.125 * float(np.sum(lost * lag * lag))
    return U_left, zeta_left


class Trajectory(object):
    """Solution on [0, T], evaluated in closed form from the initial grid and
    the per-cell energy drops. Grids are built on request and cached."""

    def __init__(self, grid, schedule, beta, delta, intervals, output_times=(), alpha_name=None):
        self.grid = grid
        self.schedule = schedule
        self.beta = np.asarray(beta, dtype=float)
        self.delta = np.asarray(delta, dtype=float)
        self.intervals = list(intervals)
        self.output_times = tuple(sorted(float(t) for t in output_times))
        self.alpha_name = alpha_name
        self._grids = {}
        self._eulerian = {}

    @property
    def final_time(self):
        return self.schedule.final_time

    @property
    def breaking_times(self):
        return self.schedule.breaking_times

    @property
    def times(self):
        return self.schedule.times

    @property
    def tau(self):
        return self.schedule.cell_tau

    @property
    def iterations(self):
        return [r.iterations for r in self.intervals]

    @property
    def max_iterations(self):
        return max(self.iterations, default=0)

    def _check_time(self, t):
        t = float(t)
        if not -TIME_MERGE_TOL <= t <= self.final_time + TIME_MERGE_TOL:
            raise ParameterError('t={0:g} outside [0, {1:g}]'.format(t, self.final_time))
        return min(max(t, 0.0), self.final_time)

    def _broken(self, t):
        tau = self.tau
        return (tau > 0.0) & (tau <= t)

    def energy_at(self, t):
        t = self._check_time(t)
        return float(self.grid.V[-1] - self.delta[self._broken(t)].sum())

    def state_at(self, t, cache=True):
        t = self._check_time(t)
        cached = self._grids.get(t)
        if cached is not None:
            return cached
        g = self.grid
        tau = self.tau
        broken = self._broken(t)
        drop = np.where(broken, self.delta, 0.0)
        lag = np.where(broken, t - tau, 0.0)
        P = np.concatenate(([0.0], np.cumsum(drop * lag * lag)))
        Q = np.concatenate(([0.0], np.cumsum(drop * lag)))
        v_inf = g.V[-1]
        y = g.y + g.U * t + (0.25 * g.V - 0.125 * v_inf) * t * t + 0.125 * (P[-1] - 2.0 * P)
        U = g.U + (0.5 * g.V - 0.25 * v_inf) * t + 0.25 * (Q[-1] - 2.0 * Q)
        V = g.V - np.concatenate(([0.0], np.cumsum(drop)))
        yx, Ux, Vx, Hx = evolve_half_cell((g.yx, g.Ux, g.Vx, g.Hx), self.beta, tau, 0.0, t)
        grid = LagrangianGrid(time=t, xi=g.xi, y=y, U=U, V=V, H=g.H, yx=yx, Ux=Ux, Vx=Vx, Hx=Hx,
                              tau=tau, dx=g.dx, layout=g.layout)
        if cache:
            self._grids[t] = grid
        return grid

    def eulerian_at(self, t, cache=True):
        t = self._check_time(t)
        cached = self._eulerian.get(t)
        if cached is None:
            cached = to_eulerian(self.state_at(t, cache=cache))
            if cache:
                self._eulerian[t] = cached
        return cached

    def snapshot_times(self):
        return np.unique(np.concatenate((self.breaking_times, self.output_times)))

    def __getstate__(self):
        state = dict(self.__dict__)
        state['_grids'] = {}
        state['_eulerian'] = {}
        return state


def solve(grid, alpha, T, output_times=(), gap_factor=DEFAULT_GAP_FACTOR, max_step=None,
          tolerance=None, max_iterations=MAX_ITERATIONS):
    """Evolve a t = 0 grid up to T."""
    schedule = extract_breaking_times(grid, T, alpha, gap_factor=gap_factor, max_step=max_step)
    for t in output_times:
        if not 0.0 <= t <= T:
            raise ParameterError('output time {0:g} outside [0, {1:g}]'.format(t, T))
    state = EvolutionState.initial(grid, schedule)
    records = []
    for _, end in schedule.intervals:
        result = iterate_interval(state, end, alpha, tolerance=tolerance, max_iterations=max_iterations)
        records.append(result)
        state = state.commit(result)
    logger.debug('solved %d intervals up to T=%g, max %d passes, energy %.6g -> %.6g',
                 len(records), T, max((r.iterations for r in records), default=0),
                 grid.energy, state.energy)
    return Trajectory(grid, schedule, state.beta.copy(), state.delta.copy(), records,
                      output_times=output_times, alpha_name=getattr(alpha, 'name', None))

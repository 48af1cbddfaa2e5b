#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Lagrangian coordinates (y, U, V, H) of Eulerian data and the way back.

A LagrangianGrid stores node values on a nondecreasing xi grid together with
constant derivatives on every cell between consecutive nodes. Grids built from
projected data use the triple layout xi_3j, xi_3j+1, xi_3j+2 per double cell;
the exact grid of piecewise linear data has one node per breakpoint and two
per atom. Everything downstream only relies on the node/cell structure.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field, replace

import numpy as np

from libs.constants import MONOTONE_TOL, NODE_MERGE_TOL, SLOPE_TOL
from libs.eulerian import CheckResult, ValidationReport
from libs.piecewise import PiecewiseLinearFn, StructureError, bisect_sup
from libs.projection import ErrorReport
from libs.utils import HSError

logger = logging.getLogger(__name__)

Asymptotes = namedtuple('Asymptotes', ['U_left', 'zeta_left', 'U_right', 'zeta_right', 'V_inf', 'H_inf'])


class CorruptedStateError(HSError):
    pass


def _readonly(values):
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class LagrangianGrid:
    time: float
    xi: np.ndarray
    y: np.ndarray
    U: np.ndarray
    V: np.ndarray
    H: np.ndarray
    yx: np.ndarray
    Ux: np.ndarray
    Vx: np.ndarray
    Hx: np.ndarray
    tau: np.ndarray
    dx: float = 0.0
    layout: str = field(default='triple')

    def __post_init__(self):
        for name in ('xi', 'y', 'U', 'V', 'H', 'yx', 'Ux', 'Vx', 'Hx', 'tau'):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        nodes = self.xi.size
        if nodes < 2:
            raise StructureError('a Lagrangian grid needs at least two nodes')
        for name in ('y', 'U', 'V', 'H'):
            if getattr(self, name).size != nodes:
                raise StructureError('node array {0} has the wrong length'.format(name))
        for name in ('yx', 'Ux', 'Vx', 'Hx', 'tau'):
            if getattr(self, name).size != nodes - 1:
                raise StructureError('cell array {0} has the wrong length'.format(name))

    @property
    def nodes(self):
        return self.xi.size

    @property
    def cells(self):
        return self.xi.size - 1

    @property
    def lengths(self):
        return np.diff(self.xi)

    @property
    def zeta(self):
        return self.y - self.xi

    @property
    def asymptotes(self):
        return Asymptotes(U_left=float(self.U[0]), zeta_left=float(self.y[0] - self.xi[0]),
                          U_right=float(self.U[-1]), zeta_right=float(self.y[-1] - self.xi[-1]),
                          V_inf=float(self.V[-1]), H_inf=float(self.H[-1]))

    @property
    def energy(self):
        return float(self.V[-1])

    def with_time(self, time, **changes):
        return replace(self, time=float(time), **changes)

    def _distinct(self):
        _, first = np.unique(self.xi, return_index=True)
        return first

    def _node_fn(self, values, tail_slope=0.0):
        keep = self._distinct()
        return PiecewiseLinearFn(self.xi[keep], values[keep], left_slope=tail_slope,
                                 right_slope=tail_slope)

    def y_fn(self):
        return self._node_fn(self.y, tail_slope=1.0)

    def U_fn(self):
        return self._node_fn(self.U)

    def V_fn(self):
        return self._node_fn(self.V)

    def H_fn(self):
        return self._node_fn(self.H)

    def double_cell_nodes(self):
        """xi_3j for every double cell boundary of a projected grid."""
        if self.layout != 'triple':
            raise StructureError('grid has no double cell layout')
        return self.xi[0::3]


def _slope_derivatives(slope):
    w = 1.0 / (1.0 + slope ** 2)
    return w, slope * w, slope ** 2 * w, slope ** 2 * w


def _tau(yx, Ux, time=0.0):
    yx = np.asarray(yx, dtype=float)
    Ux = np.asarray(Ux, dtype=float)
    tol = SLOPE_TOL * (1.0 + float(np.max(np.abs(Ux), initial=0.0)))
    tau = np.full(yx.shape, np.inf)
    with np.errstate(divide='ignore', invalid='ignore'):
        tau = np.where(Ux < -tol, time - 2.0 * yx / Ux, tau)
    tau = np.where((yx == 0.0) & (np.abs(Ux) <= tol), time, tau)
    return tau


def to_lagrangian_grid(proj):
    """L applied to projected data, on the triple-per-double-cell xi grid."""
    n = proj.cells
    dx = proj.dx
    a = proj.x_even
    m = proj.x_odd
    fsing_left = proj.fsing_even
    nodes = 3 * n + 1

    xi = np.empty(nodes)
    y = np.empty(nodes)
    U = np.empty(nodes)
    xi[0:-1:3] = a[:-1] + proj.fac[:-1] + fsing_left[:-1]
    xi[1::3] = a[:-1] + proj.fac[:-1] + proj.fsing
    xi[2::3] = m + proj.fac_mid + proj.fsing
    xi[-1] = a[-1] + proj.fac[-1] + fsing_left[-1]
    y[0:-1:3] = a[:-1]
    y[1::3] = a[:-1]
    y[2::3] = m
    y[-1] = a[-1]
    U[0:-1:3] = proj.u[:-1]
    U[1::3] = proj.u[:-1]
    U[2::3] = proj.u_mid
    U[-1] = proj.u[-1]
    H = xi - y

    yx = np.empty(3 * n)
    Ux = np.empty(3 * n)
    Vx = np.empty(3 * n)
    yx[0::3], Ux[0::3], Vx[0::3] = 0.0, 0.0, 1.0
    yx[1::3], Ux[1::3], Vx[1::3], _ = _slope_derivatives(proj.first_slope)
    yx[2::3], Ux[2::3], Vx[2::3], _ = _slope_derivatives(proj.second_slope)
    tau = _tau(yx, Ux)
    logger.debug('Lagrangian grid with %d nodes, %d breaking cells', nodes,
                 int(np.count_nonzero(np.isfinite(tau) & (tau > 0.0))))
    return LagrangianGrid(time=0.0, xi=xi, y=y, U=U, V=H, H=H, yx=yx, Ux=Ux, Vx=Vx, Hx=Vx.copy(),
                          tau=tau, dx=dx, layout='triple')


def _require_piecewise_linear(data):
    if not data.is_piecewise_linear:
        raise StructureError('exact Lagrangian data needs a piecewise linear profile and measure')


def _graph_nodes(data):
    """Breakpoints of x + G(x) with both one-sided values."""
    G = data.measure.as_piecewise_linear()
    xs = np.union1d(G.x, np.asarray(data.u.breakpoints, dtype=float))
    return xs, xs + G(xs), xs + G.right_limit(xs)


def ybar_fn(data):
    """y at t = 0 as a function of xi, exact for piecewise linear data."""
    _require_piecewise_linear(data)
    xs, lo, hi = _graph_nodes(data)
    xi = np.column_stack((lo, hi)).ravel()
    y = np.repeat(xs, 2)
    keep = np.concatenate(([True], np.diff(xi) > 0.0))
    return PiecewiseLinearFn(xi[keep], y[keep], left_slope=1.0, right_slope=1.0)


def exact_grid(data):
    """L of piecewise linear data with atoms, with nodes at every breakpoint.

    Each atom contributes a zero-length y cell whose xi length is its mass.
    """
    _require_piecewise_linear(data)
    if data.measure.sc is not None:
        raise StructureError('exact grids do not support singular continuous parts')
    xs, lo, hi = _graph_nodes(data)
    xi = np.column_stack((lo, hi)).ravel()
    y = np.repeat(xs, 2)
    keep = np.ones(xi.size, dtype=bool)
    keep[1::2] = hi > lo
    xi, y = xi[keep], y[keep]
    if xi.size < 2:
        xi = np.append(xi, xi[-1] + 1.0)
        y = np.append(y, y[-1] + 1.0)
    U = np.asarray(data.u(y), dtype=float)
    H = xi - y

    dy = np.diff(y)
    atom_cell = dy == 0.0
    with np.errstate(divide='ignore', invalid='ignore'):
        slope = np.where(atom_cell, 0.0, np.diff(U) / np.where(atom_cell, 1.0, dy))
    yx, Ux, Vx, _ = _slope_derivatives(slope)
    yx = np.where(atom_cell, 0.0, yx)
    Vx = np.where(atom_cell, 1.0, Vx)
    tau = _tau(yx, Ux)
    return LagrangianGrid(time=0.0, xi=xi, y=y, U=U, V=H, H=H, yx=yx, Ux=Ux, Vx=Vx, Hx=Vx.copy(),
                          tau=tau, dx=0.0, layout='exact')


def lagrangian_at(data, xi):
    """(y, U, V, H) of L(u, mu, mu) at the labels xi."""
    targets = np.asarray(xi, dtype=float)
    measure = data.measure
    if data.is_piecewise_linear:
        graph = measure.as_piecewise_linear().shifted_identity()
        y = np.asarray(graph.sup_inverse(targets), dtype=float)
    else:
        flat = np.atleast_1d(targets).ravel()

        def graph(x):
            return x + measure.cumulative(x)[0]

        y = bisect_sup(graph, flat, flat - measure.total - 1.0, flat + 1.0,
                       snap_points=measure.atom_x).reshape(targets.shape)
    U = np.asarray(data.u(y), dtype=float)
    H = targets - y
    if targets.ndim == 0:
        return float(y), float(U), float(H), float(H)
    return y, U, H, H.copy()


def breaking_times(grid):
    """Absolute breaking time of every cell of the grid."""
    return _tau(grid.yx, grid.Ux, grid.time)


@dataclass(frozen=True)
class EulerianSolution:
    t: float
    u: PiecewiseLinearFn
    F: PiecewiseLinearFn
    G: PiecewiseLinearFn

    @property
    def energy(self):
        return self.F.right_tail

    def breakpoints(self):
        return self.u.x


def eulerian_from_nodes(t, y, U, V, H):
    """M on node data: push (U, V, H) forward along y, merging coincident nodes."""
    y = np.asarray(y, dtype=float)
    scale = 1.0 + np.abs(y[:-1])
    back = np.flatnonzero(np.diff(y) < -MONOTONE_TOL * scale)
    if back.size:
        i = int(back[0])
        raise CorruptedStateError('y decreases between nodes {0} and {1} at t={2:g} ({3:.3g})'.format(
            i, i + 1, t, y[i + 1] - y[i]))
    y = np.maximum.accumulate(y)
    starts = np.concatenate(([True], np.diff(y) > NODE_MERGE_TOL * scale))
    first = np.flatnonzero(starts)
    last = np.concatenate((first[1:] - 1, [y.size - 1]))
    xs = y[first]
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    H = np.asarray(H, dtype=float)
    return EulerianSolution(t=float(t), u=PiecewiseLinearFn(xs, U[first]),
                            F=PiecewiseLinearFn(xs, V[first], V[last]),
                            G=PiecewiseLinearFn(xs, H[first], H[last]))


def to_eulerian(grid, t=None):
    """M applied to a grid: the Eulerian solution (u, F, G) at the grid time."""
    return eulerian_from_nodes(grid.time if t is None else t, grid.y, grid.U, grid.V, grid.H)


def _worst(name, violation, tol, cells=None):
    violation = np.asarray(violation, dtype=float)
    if violation.size == 0:
        return CheckResult(name, True)
    i = int(np.argmax(violation))
    worst = float(max(violation[i], 0.0))
    passed = worst <= tol
    detail = '' if passed else 'cell {0}: {1:.3g}'.format(i if cells is None else cells[i], worst)
    return CheckResult(name, passed, worst, detail)


def check_lagrangian_invariants(grid, tol=1e-12):
    """Check the node and per-cell invariants of a grid; report the worst cell of each."""
    report = ValidationReport(total_energy=grid.energy)
    length = grid.lengths
    scale = 1.0 + np.abs(grid.xi)
    report.checks.append(_worst('xi_nondecreasing', -length, tol))
    report.checks.append(_worst('y_nondecreasing', -np.diff(grid.y) / scale[:-1], tol))
    if grid.time == 0.0:
        report.checks.append(_worst('y_plus_H_identity', np.abs(grid.y + grid.H - grid.xi) / scale, tol))
        report.checks.append(_worst('V_equals_H', np.abs(grid.V - grid.H) / scale, tol))
    cell_scale = 1.0 + grid.Ux ** 2 + np.abs(grid.yx * grid.Vx)
    report.checks.append(_worst('yV_equals_U2', np.abs(grid.yx * grid.Vx - grid.Ux ** 2) / cell_scale, tol))
    report.checks.append(_worst('V_between_0_and_H', np.maximum(-grid.Vx, grid.Vx - grid.Hx), tol))
    report.checks.append(_worst('y_H_nonnegative', np.maximum(-grid.yx, -grid.Hx), tol))
    increments = np.maximum.reduce([
        np.abs(np.diff(grid.y) - grid.yx * length),
        np.abs(np.diff(grid.U) - grid.Ux * length),
        np.abs(np.diff(grid.V) - grid.Vx * length),
        np.abs(np.diff(grid.H) - grid.Hx * length),
    ]) / scale[:-1]
    report.checks.append(_worst('cell_increments', increments, tol * 10.0))
    for failed in report.failures():
        logger.debug('Lagrangian check %s failed: %s', failed.name, failed.detail)
    return report


def lagrangian_error_report(data, grid, samples=8):
    """Distance between L of the data and a projected grid at t = 0."""
    dx = grid.dx
    xi = np.unique(grid.xi)
    inner = np.linspace(0.0, 1.0, samples + 2)[1:-1]
    at = np.concatenate((xi, (xi[:-1, None] + np.diff(xi)[:, None] * inner).ravel()))
    if data.is_piecewise_linear:
        graph_xi = _graph_nodes(data)
        at = np.union1d(at, np.concatenate(graph_xi[1:]))
    y, U, V, _ = lagrangian_at(data, at)
    report = ErrorReport()
    report.norms.update(
        y_inf=float(np.max(np.abs(y - grid.y_fn()(at)))),
        U_inf=float(np.max(np.abs(U - grid.U_fn()(at)))),
        V_inf=float(np.max(np.abs(V - grid.V_fn()(at)))),
        H_inf=float(np.max(np.abs(V - grid.H_fn()(at)))),
    )
    root = math.sqrt(data.measure.ac_total * dx)
    slack = 1e-12 * (1.0 + data.measure.total)
    report.bounds.update(y_inf=2.0 * dx + slack, V_inf=2.0 * dx + slack, H_inf=2.0 * dx + slack,
                         U_inf=(1.0 + 2.0 * math.sqrt(2.0)) * root + slack)
    if report.violations:
        logger.warning('Lagrangian bounds violated at dx=%g: %s', dx, ', '.join(report.violations))
    return report

#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Rescaling pair (phi, psi) aligning the exact and the projected characteristics.

With H = (G + G_dx) / 2 and Y(r) = sup{x : x + H(x) < r} both phi and psi
stay inside the level sets of ybar and ybar_dx at height Y(r):

    phi(r) = max(Y + G(Y), 2r - Y - G_dx(Y+)),    psi(r) = 2r - phi(r)

so that phi + psi = 2r and ybar(phi(r)) = ybar_dx(psi(r)) = Y(r). On every
double cell the labels where phi stands still (the projected atom at x_2j)
and the labels where psi stands still (the singular part of the exact data)
both have measure nu_sing([x_2j, x_2j+2)) / 2.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from libs.constants import ATOM_LENGTH_TOL, BOUNDARY_TOL, DERIVATIVE_STEP, DERIVATIVE_THRESHOLD, SC_LENGTH_TOL
from libs.lagrangian import lagrangian_at, to_lagrangian_grid, ybar_fn
from libs.piecewise import PiecewiseLinearFn, bisect_sup
from libs.projection import project
from libs.utils import HSError

logger = logging.getLogger(__name__)


class PreconditionError(HSError):
    pass


def _left(G, x):
    if hasattr(G, 'cumulative'):
        return G.cumulative(x)[0]
    return G(x)


def _right(G, x):
    if hasattr(G, 'cumulative'):
        return G.cumulative(x)[1]
    return G.right_limit(x)


def _total(G):
    if isinstance(G, PiecewiseLinearFn):
        return G.right_tail
    return float(G.total)


def _jump_points(G):
    if isinstance(G, PiecewiseLinearFn):
        return G.x[G.jumps > 0.0]
    return np.asarray(getattr(G, 'atom_x', ()), dtype=float)


def _combined_graph(G, G_dx):
    if isinstance(G, PiecewiseLinearFn) and isinstance(G_dx, PiecewiseLinearFn):
        return G.combine(G_dx, 0.5, 0.5).shifted_identity()
    return None


def combined_Y(G, G_dx, r):
    """sup{x : x + (G + G_dx)(x) / 2 < r} for increasing left-continuous G, G_dx."""
    graph = _combined_graph(G, G_dx)
    if graph is not None:
        return graph.sup_inverse(r)
    targets = np.asarray(r, dtype=float)
    flat = np.atleast_1d(targets).ravel()
    total = max(_total(G), _total(G_dx))
    snap = np.union1d(_jump_points(G), _jump_points(G_dx))

    def fn(x):
        return x + 0.5 * (_left(G, x) + _left(G_dx, x))

    out = bisect_sup(fn, flat, flat - total - 1.0, flat + 1.0, snap_points=snap)
    return out.reshape(targets.shape) if targets.ndim else float(out[0])


@dataclass
class CellBreaking:
    """Breaking sets of one double cell, as label intervals."""
    index: int
    x_left: float
    xi_left: float
    xi_right: float
    B_dx: Tuple[float, float]
    B: List[Tuple[float, float]] = field(default_factory=list)
    measure_B: float = 0.0

    @property
    def measure_B_dx(self):
        return self.B_dx[1] - self.B_dx[0]


def _merge_intervals(pieces):
    merged = []
    for a, b in sorted(pieces):
        if merged and a <= merged[-1][1] + 1e-15 * (1.0 + abs(a)):
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


class RescalingPair(object):

    def __init__(self, G, G_dx, xi_nodes, ybar=None, ybar_dx=None, samples=64):
        self.G = G
        self.G_dx = G_dx
        self.xi_nodes = np.asarray(xi_nodes, dtype=float)
        self.ybar = ybar
        self.ybar_dx = ybar_dx
        self.samples = int(samples)
        self._graph = _combined_graph(G, G_dx)
        self.cells = self._breaking_cells()

    @property
    def exact(self):
        return self._graph is not None

    def Y(self, r):
        if self._graph is not None:
            return self._graph.sup_inverse(r)
        return combined_Y(self.G, self.G_dx, r)

    def phi(self, r):
        r = np.asarray(r, dtype=float)
        Y = np.asarray(self.Y(r), dtype=float)
        out = np.maximum(Y + _left(self.G, Y), 2.0 * r - Y - _right(self.G_dx, Y))
        return float(out) if out.ndim == 0 else out

    def psi(self, r):
        r = np.asarray(r, dtype=float)
        out = 2.0 * r - np.asarray(self.phi(r), dtype=float)
        return float(out) if out.ndim == 0 else out

    def __call__(self, r):
        return self.phi(r), self.psi(r)

    def _breaking_cells(self):
        nodes = self.xi_nodes
        cells = []
        if nodes.size < 2:
            return cells
        x_nodes = np.atleast_1d(self.Y(nodes))
        for j in range(nodes.size - 1):
            # projected atom of the cell sits at x_2j and spans [xi_3j, xi_3j+1] in xi
            atom = float(_right(self.G_dx, x_nodes[j]) - _left(self.G_dx, x_nodes[j]))
            start = nodes[j]
            mid = start + 0.5 * atom
            cell = CellBreaking(index=j, x_left=float(x_nodes[j]), xi_left=float(start),
                                xi_right=float(nodes[j + 1]), B_dx=(float(start), float(mid)))
            if self.exact:
                pieces, weight = self._exact_B(mid, nodes[j + 1])
            else:
                pieces, weight = self._sampled_B(mid, nodes[j + 1])
            cell.B = _merge_intervals(pieces)
            cell.measure_B = weight
            cells.append(cell)
        return cells

    def _exact_B(self, lo, hi):
        """Pieces of [lo, hi) where psi is flat, weighted by the growth of H.

        On a plateau of Y the weight is the plateau length; on a segment with
        H' = h the weight is dr - dY = h * dx, which integrates the sc part of
        a tabulated measure exactly.
        """
        graph = self._graph
        G_dx = self.G_dx
        x_lo, x_hi = self.Y(lo), self.Y(hi)
        inside = (graph.x >= x_lo) & (graph.x <= x_hi)
        xs = np.unique(np.concatenate(([x_lo], graph.x[inside], [x_hi])))
        pieces, weight = [], 0.0
        for a, b in zip(xs[:-1], xs[1:]):
            r0 = max(float(graph.right_limit(a)), lo)
            r1 = min(float(graph(b)), hi)
            if r1 > r0:
                H_slope = float(graph.slope_at(0.5 * (a + b))) - 1.0
                psi_rate = (1.0 + float(G_dx.slope_at(0.5 * (a + b)))) / (1.0 + H_slope)
                if psi_rate < DERIVATIVE_THRESHOLD:
                    pieces.append((r0, r1))
                    weight += (r1 - r0) * H_slope / (1.0 + H_slope)
        for xb in xs:
            r0 = max(float(graph(xb)), lo)
            r1 = min(float(graph.right_limit(xb)), hi)
            if r1 > r0:
                pieces.append((r0, r1))
                weight += r1 - r0
        return pieces, weight

    def _sampled_B(self, lo, hi):
        if not hi > lo:
            return [], 0.0
        h = DERIVATIVE_STEP
        r = np.linspace(lo, hi, self.samples + 1)
        mids = 0.5 * (r[:-1] + r[1:])
        Y_rate = (np.asarray(self.Y(mids + h)) - np.asarray(self.Y(mids - h))) / (2.0 * h)
        psi_rate = (np.asarray(self.psi(mids + h)) - np.asarray(self.psi(mids - h))) / (2.0 * h)
        flat = psi_rate < DERIVATIVE_THRESHOLD
        width = np.diff(r)
        pieces = [(float(a), float(b)) for a, b, f in zip(r[:-1], r[1:], flat) if f]
        weight = float(np.sum(width[flat] * np.clip(1.0 - Y_rate[flat], 0.0, 1.0)))
        return pieces, weight


def rescaling_pair(ybar, ybar_dx, G, G_dx, xi_nodes, samples=64):
    """The pair (phi, psi) of exact and projected data at t = 0.

    ybar and ybar_dx must agree at the double cell boundaries xi_nodes.
    """
    xi_nodes = np.asarray(xi_nodes, dtype=float)
    gap = np.abs(np.asarray(ybar(xi_nodes)) - np.asarray(ybar_dx(xi_nodes)))
    if gap.size and np.max(gap) > BOUNDARY_TOL:
        j = int(np.argmax(gap))
        raise PreconditionError('ybar and ybar_dx differ by {0:.3g} at xi_{1} = {2:.12g}'.format(
            gap[j], 3 * j, xi_nodes[j]))
    pair = RescalingPair(G, G_dx, xi_nodes, ybar=ybar, ybar_dx=ybar_dx, samples=samples)
    logger.debug('rescaling pair on %d double cells (%s)', len(pair.cells),
                 'exact' if pair.exact else 'sampled')
    return pair


@dataclass
class LengthRow:
    index: int
    x_left: float
    measure_B: float
    measure_B_dx: float
    half_singular: float
    passed: bool


@dataclass
class LengthReport:
    rows: List[LengthRow] = field(default_factory=list)
    tolerance: float = ATOM_LENGTH_TOL

    @property
    def passed(self):
        return all(row.passed for row in self.rows)

    @property
    def max_violation(self):
        return max((max(abs(r.measure_B - r.measure_B_dx), abs(r.measure_B - r.half_singular))
                    for r in self.rows), default=0.0)


def check_coinciding_lengths(pair, measure, dx, tol=None):
    """Compare meas(B_j), meas(B_dx,j) and half the singular mass of every double cell."""
    if tol is None:
        tol = SC_LENGTH_TOL if measure.sc is not None or not pair.exact else ATOM_LENGTH_TOL
    report = LengthReport(tolerance=tol)
    for cell in pair.cells:
        a = cell.x_left
        half = 0.5 * float(measure.singular_mass(a, a + 2.0 * dx))
        ok = abs(cell.measure_B - cell.measure_B_dx) <= tol and abs(cell.measure_B - half) <= tol
        report.rows.append(LengthRow(index=cell.index, x_left=a, measure_B=cell.measure_B,
                                     measure_B_dx=cell.measure_B_dx, half_singular=half, passed=ok))
        if not ok:
            logger.debug('cell %d at x=%g: meas B=%.12g, meas B_dx=%.12g, half mass=%.12g',
                         cell.index, a, cell.measure_B, cell.measure_B_dx, half)
    return report


def analyze_projection(data, dx, samples=64, tol=None):
    """Rescaling pair of data and its projection with mesh dx, and the length check."""
    proj = project(data, dx)
    grid = to_lagrangian_grid(proj)
    if data.is_piecewise_linear:
        ybar = ybar_fn(data)
        G = data.measure.as_piecewise_linear()
    else:
        def ybar(xi):
            return lagrangian_at(data, xi)[0]
        G = data.measure
    pair = rescaling_pair(ybar, grid.y_fn(), G, proj.F_fn(), grid.double_cell_nodes(), samples=samples)
    return pair, check_coinciding_lengths(pair, data.measure, dx, tol=tol)

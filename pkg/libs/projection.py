#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Energy preserving piecewise linear projection onto the mesh x_j = j * dx.

On every double cell [x_2j, x_2j+2] the projected profile keeps u at the even
nodes and uses the slopes Du + s q on the first half and Du - s q on the
second half, where q restores the ac energy of the cell. The singular energy
of the cell is moved into an atom at x_2j.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
from scipy import integrate

from libs.constants import NOISE_FACTOR, RADICAND_TOL
from libs.eulerian import ParameterError
from libs.piecewise import PiecewiseLinearFn
from libs.utils import HSError

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps


class InconsistentInputError(HSError):
    """The ac energy of a cell is smaller than the energy of its mean slope."""

    def __init__(self, message, cell=None):
        super(InconsistentInputError, self).__init__(message)
        self.cell = cell


@dataclass(frozen=True)
class ProjectedData:
    """Projected Eulerian data, one record per double cell [x_2j, x_2j+2].

    u and fac hold the values of u and F_ac at the n + 1 even nodes; Du, q,
    sign and fsing are per cell, fsing being F_sing,2j+2 (the constant value of
    the projected singular cumulative on (x_2j, x_2j+2]).
    """
    dx: float
    j_min: int
    j_max: int
    u: np.ndarray
    Du: np.ndarray
    q: np.ndarray
    sign: np.ndarray
    fac: np.ndarray
    fsing: np.ndarray
    fsing_left: float = 0.0

    @property
    def cells(self):
        return self.j_max - self.j_min

    @property
    def x_even(self):
        return 2.0 * np.arange(self.j_min, self.j_max + 1) * self.dx

    @property
    def x_odd(self):
        return (2.0 * np.arange(self.j_min, self.j_max) + 1.0) * self.dx

    @property
    def first_slope(self):
        return self.Du + self.sign * self.q

    @property
    def second_slope(self):
        return self.Du - self.sign * self.q

    @property
    def u_mid(self):
        return self.u[:-1] + self.first_slope * self.dx

    @property
    def fac_mid(self):
        return self.fac[:-1] + self.first_slope ** 2 * self.dx

    @property
    def fsing_even(self):
        """F_sing at x_2j from the left, for the n + 1 even nodes."""
        return np.concatenate(([self.fsing_left], self.fsing))

    @property
    def total_energy(self):
        return float(self.fac[-1] + self.fsing_even[-1])

    def records(self):
        """Per double cell: (u_2j, Du_2j, q_2j, sign, F_ac(x_2j), F_sing(x_2j+))."""
        return list(zip(self.u[:-1], self.Du, self.q, self.sign, self.fac[:-1], self.fsing))

    def _nodes(self):
        x = np.empty(2 * self.cells + 1)
        x[0::2] = self.x_even
        x[1::2] = self.x_odd
        return x

    def u_fn(self):
        values = np.empty(2 * self.cells + 1)
        values[0::2] = self.u
        values[1::2] = self.u_mid
        return PiecewiseLinearFn(self._nodes(), values)

    def F_ac_fn(self):
        values = np.empty(2 * self.cells + 1)
        values[0::2] = self.fac
        values[1::2] = self.fac_mid
        return PiecewiseLinearFn(self._nodes(), values)

    def F_fn(self):
        """F_dx = G_dx, left-continuous with the cell atoms at the even nodes."""
        sing = self.fsing_even
        left = np.empty(2 * self.cells + 1)
        right = np.empty(2 * self.cells + 1)
        left[0::2] = self.fac + sing
        right[0::2] = self.fac + np.concatenate((self.fsing, [sing[-1]]))
        left[1::2] = right[1::2] = self.fac_mid + self.fsing
        return PiecewiseLinearFn(self._nodes(), left, right)


def mesh_range(window, dx):
    """(j_min, j_max) with x_2jmin <= x_min and x_2jmax > x_max."""
    x_min, x_max = window
    return int(math.floor(x_min / (2.0 * dx))), int(math.floor(x_max / (2.0 * dx))) + 1


def _select_signs(u_mid, u_left, Du, q, dx):
    plus = np.abs(u_mid - (u_left + (Du + q) * dx))
    minus = np.abs(u_mid - (u_left + (Du - q) * dx))
    return np.where(plus <= minus, 1, -1).astype(np.int8)


def sign_select(data, j, Du, q, dx):
    """Sign (-1)^k of q on the first half of cell [x_2j, x_2j+2].

    k minimises |u(x_2j+1) - u_dx(x_2j+1)|; ties go to k = 0.
    """
    if q < 0.0:
        raise ParameterError('q must be nonnegative')
    x_left = 2.0 * j * dx
    u_left = float(data.u(x_left))
    u_mid = float(data.u(x_left + dx))
    return int(_select_signs(np.array([u_mid]), u_left, Du, q, dx)[0])


def difference_noise(u_even, fac, Du, dx):
    """Rounding error of DF - Du^2 when both come from differences of node values."""
    u_abs = np.abs(u_even[1:]) + np.abs(u_even[:-1])
    f_abs = np.abs(fac[1:]) + np.abs(fac[:-1])
    return NOISE_FACTOR * EPS * (u_abs * np.abs(Du) + f_abs) / (2.0 * dx)


def correction_term(Du, DF, noise=0.0):
    """q = sqrt(DF - Du^2) per cell, and the cells whose deficit exceeds the tolerance.

    Only negative radicands within tolerance are set to zero.
    """
    Du = np.asarray(Du, dtype=float)
    DF = np.asarray(DF, dtype=float)
    radicand = DF - Du ** 2
    tol = RADICAND_TOL * np.maximum(1.0, DF) + noise
    bad = np.flatnonzero(radicand < -tol)
    return np.sqrt(np.maximum(radicand, 0.0)), bad


def project(data, dx):
    """Project (u, mu) onto the uniform mesh of width dx."""
    if not dx > 0.0:
        raise ParameterError('dx must be positive, got {0}'.format(dx))
    j_min, j_max = mesh_range(data.window, dx)
    n = j_max - j_min
    x_even = 2.0 * np.arange(j_min, j_max + 1) * dx
    x_odd = x_even[:-1] + dx
    measure = data.measure

    u_even = np.asarray(data.u(x_even), dtype=float)
    u_odd = np.asarray(data.u(x_odd), dtype=float)
    fac = measure.ac_cumulative(x_even)
    fsing_even = measure.singular_cumulative(x_even)

    Du = (u_even[1:] - u_even[:-1]) / (2.0 * dx)
    DF = (fac[1:] - fac[:-1]) / (2.0 * dx)
    q, bad = correction_term(Du, DF, difference_noise(u_even, fac, Du, dx))
    if bad.size:
        i = int(bad[0])
        raise InconsistentInputError(
            'cell [{0:g}, {1:g}]: DF_ac = {2:.12g} is below Du^2 = {3:.12g}'.format(
                x_even[i], x_even[i + 1], DF[i], Du[i] ** 2), cell=j_min + i)
    sign = _select_signs(u_odd, u_even[:-1], Du, q, dx)
    logger.debug('projected onto %d double cells with dx=%g (%d with q > 0)',
                 n, dx, int(np.count_nonzero(q)))
    return ProjectedData(dx=float(dx), j_min=j_min, j_max=j_max, u=u_even, Du=Du, q=q,
                         sign=sign, fac=fac, fsing=fsing_even[1:],
                         fsing_left=float(fsing_even[0]))


@dataclass
class ErrorReport:
    norms: Dict[str, float] = field(default_factory=dict)
    bounds: Dict[str, float] = field(default_factory=dict)

    @property
    def violations(self) -> List[str]:
        return [k for k, bound in self.bounds.items() if self.norms.get(k, 0.0) > bound]

    @property
    def passed(self):
        return not self.violations


_GAUSS_ORDER = 8


def _integrate_pieces(fn, edges, smooth):
    """Integral of fn over consecutive pieces between the sorted edges."""
    a, b = edges[:-1], edges[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    if a.size == 0:
        return 0.0
    if smooth:
        nodes, weights = np.polynomial.legendre.leggauss(_GAUSS_ORDER)
        half = 0.5 * (b - a)
        points = 0.5 * (a + b)[:, None] + half[:, None] * nodes[None, :]
        return float(np.sum(fn(points) * weights[None, :] * half[:, None]))
    return float(sum(integrate.quad(lambda s: float(fn(np.array(s))), lo, hi, limit=200)[0]
                     for lo, hi in zip(a, b)))


def projection_error_report(data, proj, samples=16):
    """Projection errors against the Eulerian bounds.

    Norms: ||u - u_dx||_inf, ||u - u_dx||_2, ||u_x - u_dx,x||_2 and
    ||F - F_dx||_p for p = 1, 2 (G = F since mu = nu).
    """
    dx = proj.dx
    u_dx = proj.u_fn()
    F_dx = proj.F_fn()
    measure = data.measure
    smooth = data.is_piecewise_linear
    nodes = u_dx.x
    edges = np.unique(np.concatenate((nodes, np.asarray(data.u.breakpoints, dtype=float),
                                      measure.breakpoints)))
    edges = edges[(edges >= nodes[0]) & (edges <= nodes[-1])]

    inner = np.linspace(0.0, 1.0, samples + 2)[1:-1]
    at = np.concatenate((edges, (edges[:-1, None] + np.diff(edges)[:, None] * inner).ravel()))
    diff_u = np.abs(np.asarray(data.u(at)) - u_dx(at))
    u_inf = float(np.max(diff_u, initial=0.0))

    def u_gap_sq(s):
        return (np.asarray(data.u(s)) - u_dx(s)) ** 2

    def ux_gap_sq(s):
        return (np.asarray(data.u.derivative(s)) - u_dx.slope_at(s)) ** 2

    def F_gap(s):
        return np.abs(measure.cumulative(s)[0] - F_dx(s))

    u_l2 = math.sqrt(_integrate_pieces(u_gap_sq, edges, smooth))
    ux_l2 = math.sqrt(_integrate_pieces(ux_gap_sq, edges, smooth))
    F_l1 = _integrate_pieces(F_gap, edges, smooth)
    F_l2 = math.sqrt(_integrate_pieces(lambda s: F_gap(s) ** 2, edges, smooth))

    fac_inf = measure.ac_total
    total = measure.total
    root2 = math.sqrt(2.0)
    report = ErrorReport()
    report.norms.update(u_inf=u_inf, u_l2=u_l2, ux_l2=ux_l2, F_l1=F_l1, F_l2=F_l2,
                        energy_gap=abs(proj.total_energy - total))
    report.bounds.update(
        u_inf=(1.0 + root2) * math.sqrt(fac_inf * dx),
        u_l2=root2 * (1.0 + root2) * math.sqrt(fac_inf) * dx,
        F_l1=2.0 * total * dx,
        F_l2=2.0 * total * math.sqrt(dx),
    )
    # bounds are exact inequalities; allow roundoff on exact projections
    for key in report.bounds:
        report.bounds[key] += 1e-12 * max(1.0, total)
    if report.violations:
        logger.warning('projection bounds violated at dx=%g: %s', dx, ', '.join(report.violations))
    return report

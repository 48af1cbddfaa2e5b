#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Eulerian data model: wave profile u together with the energy measure mu = nu,
the dissipation function alpha, admissibility checks and the B_2^beta
seminorm estimate.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy import integrate

from libs.constants import DEFAULT_SAMPLES
from libs.piecewise import PiecewiseLinearFn, StructureError
from libs.utils import HSError, as_float_array

logger = logging.getLogger(__name__)

__all__ = ['StructureError', 'ParameterError', 'CuspProfile', 'CuspEnergy', 'EnergyMeasure',
           'InitialData', 'AlphaFunction', 'CheckResult', 'ValidationReport',
           'validate_initial_data', 'cumulative', 'besov_seminorm_estimate']


class ParameterError(HSError):
    pass


class CuspProfile(object):
    """u(x) = |x|^(2/3) on [-1, 1], equal to 1 outside."""

    window = (-1.0, 1.0)
    breakpoints = np.array([-1.0, 0.0, 1.0])
    singular_points = np.array([0.0])
    left_tail = 1.0
    right_tail = 1.0
    left_slope = 0.0
    right_slope = 0.0

    def __call__(self, x):
        v = np.asarray(x, dtype=float)
        return np.minimum(np.abs(v), 1.0) ** (2.0 / 3.0)

    right_limit = __call__

    def derivative(self, x):
        v = np.asarray(x, dtype=float)
        with np.errstate(divide='ignore'):
            d = (2.0 / 3.0) * np.sign(v) * np.abs(v) ** (-1.0 / 3.0)
        return np.where(np.abs(v) < 1.0, np.where(v == 0.0, 0.0, d), 0.0)

    slope_at = derivative

    def sup_norm(self):
        return 1.0

    def energy(self):
        return CuspEnergy()

    def __repr__(self):
        return 'CuspProfile()'


class CuspEnergy(object):
    """Cumulative energy of the cusp: (4/3)(1 + sgn(x)|x|^(1/3)) on [-1, 1]."""

    breakpoints = np.array([-1.0, 0.0, 1.0])
    total = 8.0 / 3.0

    def __call__(self, x):
        v = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
        return (4.0 / 3.0) * (1.0 + np.sign(v) * np.abs(v) ** (1.0 / 3.0))

    right_limit = __call__


class EnergyMeasure(object):
    """Energy measure split into absolutely continuous, atomic and tabulated
    singular continuous parts.

    The ac part is given by its cumulative function (derived from u by
    InitialData.build). The sc table is a continuous nondecreasing cumulative
    sampled at breakpoints and interpolated linearly; it is shifted to start
    at 0.
    """

    def __init__(self, ac=None, atoms=(), sc=None):
        self.ac = ac
        atoms = np.asarray(atoms, dtype=float).reshape(-1, 2)
        order = np.argsort(atoms[:, 0], kind='stable')
        atoms = atoms[order]
        bad = np.flatnonzero(~(atoms[:, 1] > 0.0) | ~np.isfinite(atoms).all(axis=1))
        if bad.size:
            raise StructureError('atom masses must be positive and finite', int(order[bad[0]]))
        dup = np.flatnonzero(np.diff(atoms[:, 0]) == 0.0)
        if dup.size:
            raise StructureError('two atoms at the same position', int(order[dup[0] + 1]))
        self.atom_x = atoms[:, 0]
        self.atom_m = atoms[:, 1]
        self._atom_cum = np.concatenate(([0.0], np.cumsum(self.atom_m)))
        if sc is not None:
            if not sc.is_continuous():
                raise StructureError('singular continuous table must be continuous')
            sc.check_increasing()
            sc = PiecewiseLinearFn(sc.x, sc.left - sc.left[0])
        self.sc = sc

    @property
    def is_piecewise_linear(self):
        return (self.ac is None or isinstance(self.ac, PiecewiseLinearFn)) and \
            (self.sc is None or isinstance(self.sc, PiecewiseLinearFn))

    @property
    def has_singular_part(self):
        return self.atom_x.size > 0 or (self.sc is not None and self.sc.right_tail > 0.0)

    @property
    def breakpoints(self):
        parts = [self.atom_x]
        if self.ac is not None:
            parts.append(np.asarray(self.ac.breakpoints, dtype=float))
        if self.sc is not None:
            parts.append(self.sc.x)
        return np.unique(np.concatenate(parts))

    @property
    def ac_total(self):
        if self.ac is None:
            return 0.0
        return float(self.ac(np.inf)) if not isinstance(self.ac, PiecewiseLinearFn) \
            else self.ac.right_tail

    @property
    def singular_total(self):
        sc_total = self.sc.right_tail if self.sc is not None else 0.0
        return float(self._atom_cum[-1] + sc_total)

    @property
    def total(self):
        return self.ac_total + self.singular_total

    def ac_cumulative(self, x):
        x = np.asarray(x, dtype=float)
        if self.ac is None:
            return np.zeros_like(x)
        return np.asarray(self.ac(x), dtype=float)

    def atoms_cumulative(self, x, inclusive=False):
        x = np.asarray(x, dtype=float)
        side = 'right' if inclusive else 'left'
        return self._atom_cum[np.searchsorted(self.atom_x, x, side=side)]

    def sc_cumulative(self, x):
        x = np.asarray(x, dtype=float)
        if self.sc is None:
            return np.zeros_like(x)
        return np.asarray(self.sc(x), dtype=float)

    def singular_cumulative(self, x, inclusive=False):
        """nu_sing((-inf, x)), or (-inf, x] when inclusive."""
        return self.atoms_cumulative(x, inclusive) + self.sc_cumulative(x)

    def singular_mass(self, a, b):
        """nu_sing([a, b))."""
        return self.singular_cumulative(b) - self.singular_cumulative(a)

    def cumulative(self, x):
        base = self.ac_cumulative(x) + self.sc_cumulative(x)
        return base + self.atoms_cumulative(x), base + self.atoms_cumulative(x, inclusive=True)

    def as_piecewise_linear(self):
        """G as a left-continuous PiecewiseLinearFn with jumps at the atoms."""
        if not self.is_piecewise_linear:
            raise StructureError('the measure has a non piecewise linear part')
        xs = self.breakpoints
        if xs.size == 0:
            return PiecewiseLinearFn.constant(0.0)
        left, right = self.cumulative(xs)
        return PiecewiseLinearFn(xs, left, right)


def cumulative(measure, x):
    """(F(x-), F(x+)) = (mu((-inf, x)), mu((-inf, x]))."""
    left, right = measure.cumulative(x)
    if np.ndim(left) == 0:
        return float(left), float(right)
    return left, right


class InitialData(object):
    """Eulerian initial data (u, mu, nu); nu defaults to mu."""

    def __init__(self, u, measure, window, nu=None):
        self.u = u
        self.measure = measure
        self.nu = measure if nu is None else nu
        x_min, x_max = float(window[0]), float(window[1])
        if not x_min <= x_max:
            raise StructureError('support window is empty')
        self.window = (x_min, x_max)

    @classmethod
    def build(cls, u, atoms=(), sc_table=None, window=None):
        sc = None
        if sc_table is not None and len(sc_table):
            sc = PiecewiseLinearFn.from_points(sc_table)
        if u.left_slope or u.right_slope:
            raise StructureError('u must be constant outside its breakpoints')
        measure = EnergyMeasure(ac=u.energy(), atoms=atoms, sc=sc)
        if window is None:
            points = np.concatenate((np.asarray(u.breakpoints, dtype=float), measure.breakpoints))
            window = (float(points.min()), float(points.max()))
        return cls(u, measure, window)

    @property
    def G(self):
        return self.measure

    @property
    def total_energy(self):
        return self.measure.total

    @property
    def is_piecewise_linear(self):
        return isinstance(self.u, PiecewiseLinearFn) and self.measure.is_piecewise_linear

    def __repr__(self):
        return 'InitialData(window={0}, F_inf={1:.6g})'.format(self.window, self.total_energy)


class AlphaFunction(object):
    """Dissipation fraction alpha: R -> [0, 1] with a known Lipschitz bound."""

    def __init__(self, evaluator, lipschitz, name=None):
        lipschitz = float(lipschitz)
        if not lipschitz >= 0.0:
            raise ParameterError('Lipschitz bound must be nonnegative, got {0}'.format(lipschitz))
        self.evaluator = evaluator
        self.lipschitz = lipschitz
        self.name = name

    @classmethod
    def constant(cls, value):
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise ParameterError('alpha must lie in [0, 1], got {0}'.format(value))
        return cls(lambda x: np.full_like(np.asarray(x, dtype=float), value), 0.0,
                   name='const({0:g})'.format(value))

    @classmethod
    def from_breakpoints(cls, points, lipschitz=None, name=None):
        fn = PiecewiseLinearFn.from_points(points)
        if lipschitz is None:
            lipschitz = float(np.max(np.abs(fn.slopes))) if fn.x.size > 1 else 0.0
        return cls(fn, lipschitz, name=name)

    @property
    def is_constant(self):
        return self.lipschitz == 0.0

    @property
    def value(self):
        return float(self(0.0))

    def __call__(self, x):
        out = np.asarray(self.evaluator(np.asarray(x, dtype=float)), dtype=float)
        return float(out) if out.ndim == 0 else out

    def __repr__(self):
        return 'AlphaFunction({0}, lipschitz={1:g})'.format(self.name or 'custom', self.lipschitz)


@dataclass
class CheckResult:
    name: str
    passed: bool
    violation: float = 0.0
    detail: str = ''


@dataclass
class ValidationReport:
    checks: List[CheckResult] = field(default_factory=list)
    total_energy: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _sample_grid(data, samples):
    x_min, x_max = data.window
    pad = 0.5 * max(1.0, x_max - x_min)
    grid = np.linspace(x_min - pad, x_max + pad, max(int(samples), 2))
    return np.unique(np.concatenate((grid, np.asarray(data.u.breakpoints, dtype=float),
                                     data.measure.breakpoints)))


def _check_left_continuity(measure):
    """F(x) = mu((-inf, x)): the mass of an atom must sit to the right of x."""
    x = measure.atom_x
    if x.size == 0:
        return CheckResult('F_left_continuous', True)
    eps = 1e-9 * (1.0 + np.abs(x))
    left, _ = measure.cumulative(x)
    _, before = measure.cumulative(x - eps)
    ratio = (left - before) / measure.atom_m
    worst = int(np.argmax(ratio))
    passed = bool(ratio[worst] < 0.5)
    if passed and measure.is_piecewise_linear:
        # the tabulated G used by the projection must agree with the measure at the atoms
        G = measure.as_piecewise_linear()
        gap = float(np.max(np.abs(G(x) - left)))
        if gap > 1e-12 * max(1.0, measure.total):
            return CheckResult('F_left_continuous', False, gap, 'tabulated G is not left continuous')
    detail = '' if passed else 'atom at {0:g} already counted in F({0:g})'.format(x[worst])
    return CheckResult('F_left_continuous', passed, float(max(ratio[worst], 0.0)), detail)


def _check_mu_equals_nu(data, xs):
    mu, nu = data.measure, data.nu
    if nu is mu:
        return CheckResult('mu_equals_nu', True)
    points = np.unique(np.concatenate((xs, mu.breakpoints, nu.breakpoints)))
    mu_left, mu_right = mu.cumulative(points)
    nu_left, nu_right = nu.cumulative(points)
    diff = np.maximum(np.abs(mu_left - nu_left), np.abs(mu_right - nu_right))
    worst = int(np.argmax(diff))
    passed = bool(diff[worst] <= 1e-12 * max(1.0, mu.total, nu.total))
    detail = '' if passed else 'x={0:g}: mu {1:.12g}, nu {2:.12g}'.format(points[worst], mu_left[worst],
                                                                          nu_left[worst])
    return CheckResult('mu_equals_nu', passed, float(diff[worst]), detail)


def _check_ac_profile(data):
    u = data.u
    xs = np.asarray(u.breakpoints, dtype=float)
    if xs.size < 2:
        inc = data.measure.ac_cumulative(np.array([xs[0] - 1.0, xs[0] + 1.0]))
        gap = float(abs(inc[1] - inc[0]))
        return CheckResult('ac_matches_profile', gap <= 1e-12, gap)
    # segment midpoints too, so the ac part must follow u_x^2 inside each segment
    xs = np.unique(np.concatenate((xs, 0.5 * (xs[:-1] + xs[1:]))))
    a, b = xs[:-1], xs[1:]
    stored = data.measure.ac_cumulative(b) - data.measure.ac_cumulative(a)
    if isinstance(u, PiecewiseLinearFn):
        expected = u.slope_at(0.5 * (a + b)) ** 2 * (b - a)
        rtol = 1e-12
    else:
        expected = np.array([integrate.quad(lambda s: float(u.derivative(s)) ** 2, lo, hi,
                                            limit=200, epsabs=1e-13, epsrel=1e-12)[0] for lo, hi in zip(a, b)])
        rtol = 1e-8
    err = np.abs(stored - expected) / np.maximum(1.0, np.abs(expected))
    worst = int(np.argmax(err))
    passed = bool(err[worst] <= rtol)
    detail = '' if passed else 'segment {0} [{1:g}, {2:g}]: stored {3:.12g}, slope^2 gives {4:.12g}'.format(
        worst, a[worst], b[worst], stored[worst], expected[worst])
    return CheckResult('ac_matches_profile', passed, float(err[worst]), detail)


def validate_initial_data(data, alpha, samples=DEFAULT_SAMPLES):
    """Check the admissibility conditions of (u, mu, nu) and alpha on a sample grid."""
    measure = data.measure
    xs = _sample_grid(data, samples)
    total = measure.total
    tol = 1e-12 * max(1.0, total)
    report = ValidationReport(total_energy=total)

    report.checks.append(CheckResult('finite_energy', bool(np.isfinite(total) and total >= 0.0),
                                     0.0 if np.isfinite(total) else float('inf')))

    left, right = measure.cumulative(xs)
    drop = max(float(np.max(-np.diff(left), initial=0.0)), float(np.max(left - right)))
    report.checks.append(CheckResult('F_increasing', drop <= tol, max(drop, 0.0)))

    atom_left, atom_right = measure.cumulative(measure.atom_x)
    atom_err = float(np.max(np.abs(atom_right - atom_left - measure.atom_m), initial=0.0))
    off_atoms = xs[~np.isin(xs, measure.atom_x)]
    l_off, r_off = measure.cumulative(off_atoms)
    stray = float(np.max(np.abs(r_off - l_off), initial=0.0))
    report.checks.append(CheckResult('jumps_at_atoms', max(atom_err, stray) <= tol,
                                     max(atom_err, stray)))

    report.checks.append(_check_left_continuity(measure))
    report.checks.append(_check_ac_profile(data))
    report.checks.append(_check_mu_equals_nu(data, xs))

    x_min, x_max = data.window
    u = data.u
    edge = np.array([x_min - 1.0, x_min, x_max, x_max + 1.0])
    ue = np.asarray(u(edge), dtype=float)
    outside = max(abs(ue[0] - ue[1]), abs(ue[3] - ue[2]))
    report.checks.append(CheckResult('u_constant_outside_window', outside <= 1e-12 * (1.0 + abs(ue[1])),
                                     float(outside)))

    a = np.asarray(alpha(xs), dtype=float)
    out_of_range = float(max(np.max(-a, initial=0.0), np.max(a - 1.0, initial=0.0)))
    report.checks.append(CheckResult('alpha_range', out_of_range <= 1e-15, out_of_range))
    slack = np.abs(np.diff(a)) - alpha.lipschitz * np.diff(xs) * (1.0 + 1e-9)
    worst = float(np.max(slack, initial=0.0))
    report.checks.append(CheckResult('alpha_lipschitz', worst <= 1e-12, max(worst, 0.0)))

    for failed in report.failures():
        logger.debug('validation check %s failed: %s', failed.name, failed.detail or failed.violation)
    return report


def besov_seminorm_estimate(f_samples, beta, h_grid, spacing):
    """Lower estimate of |f|_{2,beta}: max over h of h^-beta ||f(.+h) - f||_2.

    f_samples are uniform samples with the given spacing; differences are taken
    where both f(x) and f(x + h) are sampled.
    """
    if not 0.0 < beta <= 1.0:
        raise ParameterError('beta must lie in (0, 1], got {0}'.format(beta))
    f = as_float_array(f_samples)
    h_grid = as_float_array(h_grid)
    if h_grid.size == 0 or np.any(h_grid <= 0.0) or np.any(h_grid > 2.0):
        raise ParameterError('shifts must lie in (0, 2]')
    if spacing <= 0.0 or spacing > h_grid.min() / 4.0:
        raise ParameterError('sample spacing {0:g} exceeds min(h)/4'.format(spacing))
    best = 0.0
    for h in h_grid:
        s = int(round(h / spacing))
        if s >= f.size:
            raise ParameterError('shift {0:g} exceeds the sampled window'.format(h))
        delta = f[s:] - f[:-s]
        # the weight uses the shift actually applied to the samples
        value = (s * spacing) ** (-beta) * np.sqrt(np.sum(delta ** 2) * spacing)
        best = max(best, float(value))
    return best

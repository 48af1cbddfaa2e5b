#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Piecewise linear functions on the real line.

A function is stored by its breakpoints together with the value reached from
the left and the value taken on the right of every breakpoint, plus a linear
tail on each side. Evaluation follows the left-continuous convention used for
all cumulative energies: f(x_i) is the left value and right_limit(x_i) the
right one. Continuous functions simply have equal left and right values.
"""

import logging

import numpy as np

from libs.constants import BISECTION_WIDTH, NODE_MERGE_TOL
from libs.utils import HSError, as_float_array, merge_close

logger = logging.getLogger(__name__)


class StructureError(HSError):
    """Malformed breakpoint data."""

    def __init__(self, message, index=None):
        if index is not None:
            message = '{0} (breakpoint index {1})'.format(message, index)
        super(StructureError, self).__init__(message)
        self.index = index


def _frozen(values):
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


class PiecewiseLinearFn(object):

    def __init__(self, x, left, right=None, left_slope=0.0, right_slope=0.0):
        x = as_float_array(x)
        left = as_float_array(left)
        right = left.copy() if right is None else as_float_array(right)
        if x.size == 0:
            raise StructureError('at least one breakpoint is required')
        if left.shape != x.shape or right.shape != x.shape:
            raise StructureError('breakpoints and values differ in length')
        bad = np.flatnonzero(~(np.isfinite(x) & np.isfinite(left) & np.isfinite(right)))
        if bad.size:
            raise StructureError('non-finite breakpoint data', int(bad[0]))
        steps = np.flatnonzero(np.diff(x) <= 0.0)
        if steps.size:
            raise StructureError('breakpoints must be strictly increasing', int(steps[0]) + 1)
        self.x = _frozen(x)
        self.left = _frozen(left)
        self.right = _frozen(right)
        self.left_slope = float(left_slope)
        self.right_slope = float(right_slope)

    @classmethod
    def constant(cls, value, at=0.0):
        return cls([at], [value])

    @classmethod
    def from_points(cls, points, left_slope=0.0, right_slope=0.0):
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        return cls(points[:, 0], points[:, 1], left_slope=left_slope, right_slope=right_slope)

    @property
    def breakpoints(self):
        return self.x

    @property
    def left_tail(self):
        return float(self.left[0])

    @property
    def right_tail(self):
        return float(self.right[-1])

    @property
    def jumps(self):
        return self.right - self.left

    @property
    def slopes(self):
        """Slopes of the interior segments (x_i, x_{i+1})."""
        return (self.left[1:] - self.right[:-1]) / np.diff(self.x)

    def is_continuous(self, tol=0.0):
        return bool(np.all(np.abs(self.jumps) <= tol * (1.0 + np.abs(self.left))))

    def check_increasing(self, tol=0.0):
        """Raise StructureError at the first place the function decreases."""
        down = np.flatnonzero(self.jumps < -tol)
        if down.size:
            raise StructureError('decreasing jump', int(down[0]))
        down = np.flatnonzero(self.slopes < -tol)
        if down.size:
            raise StructureError('decreasing segment', int(down[0]) + 1)
        if self.left_slope < 0 or self.right_slope < 0:
            raise StructureError('decreasing tail')

    def _segment_value(self, v, i):
        n = self.x.size
        out = np.empty_like(v)
        lo = i == 0
        hi = i == n
        mid = ~(lo | hi)
        out[lo] = self.left[0] + self.left_slope * (v[lo] - self.x[0])
        out[hi] = self.right[-1] + self.right_slope * (v[hi] - self.x[-1])
        k = i[mid]
        x0 = self.x[k - 1]
        x1 = self.x[k]
        w = (v[mid] - x0) / (x1 - x0)
        out[mid] = self.right[k - 1] + (self.left[k] - self.right[k - 1]) * w
        return out

    def __call__(self, x):
        v = np.asarray(x, dtype=float)
        flat = np.atleast_1d(v).ravel()
        i = np.searchsorted(self.x, flat, side='left')
        out = self._segment_value(flat, i)
        hit = (i < self.x.size) & (flat == self.x[np.minimum(i, self.x.size - 1)])
        out[hit] = self.left[i[hit]]
        return out.reshape(v.shape) if v.ndim else float(out[0])

    def right_limit(self, x):
        v = np.asarray(x, dtype=float)
        flat = np.atleast_1d(v).ravel()
        i = np.searchsorted(self.x, flat, side='right')
        out = self._segment_value(flat, i)
        hit = (i > 0) & (flat == self.x[np.maximum(i - 1, 0)])
        out[hit] = self.right[i[hit] - 1]
        return out.reshape(v.shape) if v.ndim else float(out[0])

    def slope_at(self, x):
        """Slope of the segment starting at or containing x."""
        v = np.asarray(x, dtype=float)
        flat = np.atleast_1d(v).ravel()
        i = np.searchsorted(self.x, flat, side='right') - 1
        slopes = np.concatenate(([self.left_slope], self.slopes, [self.right_slope]))
        out = slopes[i + 1]
        return out.reshape(v.shape) if v.ndim else float(out[0])

    derivative = slope_at

    def energy(self):
        """Cumulative energy x -> integral of the squared slope up to x."""
        if self.left_slope or self.right_slope:
            raise StructureError('energy of a function with sloped tails is infinite')
        increments = self.slopes ** 2 * np.diff(self.x)
        values = np.concatenate(([0.0], np.cumsum(increments)))
        return PiecewiseLinearFn(self.x, values)

    def combine(self, other, a=1.0, b=1.0):
        """The function a * self + b * other on the union of breakpoints."""
        xs = np.union1d(self.x, other.x)
        # breakpoints closer than roundoff collapse onto the last one of their group,
        # keeping the left value of the first and the right value of the last
        _, groups = merge_close(xs, NODE_MERGE_TOL * (1.0 + float(np.max(np.abs(xs)))))
        first = np.concatenate(([0], np.flatnonzero(np.diff(groups)) + 1))
        last = np.concatenate((first[1:] - 1, [xs.size - 1]))
        if first.size < xs.size:
            logger.debug('combine merged %d breakpoints', xs.size - first.size)
        left = a * self(xs[first]) + b * other(xs[first])
        right = a * self.right_limit(xs[last]) + b * other.right_limit(xs[last])
        xs = xs[last]
        return PiecewiseLinearFn(xs, left, right,
                                 left_slope=a * self.left_slope + b * other.left_slope,
                                 right_slope=a * self.right_slope + b * other.right_slope)

    def shifted_identity(self):
        """x + f(x), strictly increasing whenever f is nondecreasing."""
        return PiecewiseLinearFn(self.x, self.x + self.left, self.x + self.right,
                                 left_slope=1.0 + self.left_slope,
                                 right_slope=1.0 + self.right_slope)

    def sup_inverse(self, targets):
        """sup{x : f(x) < r} for a strictly increasing f with upward jumps.

        Exact for piecewise linear data: the graph of f is walked through the
        interleaved sequence of left and right values, so targets falling
        inside a jump return the jump location.
        """
        if np.any(self.slopes <= 0.0) or self.left_slope <= 0.0 or self.right_slope <= 0.0:
            raise StructureError('sup_inverse needs strictly positive slopes')
        r = np.asarray(targets, dtype=float)
        flat = np.atleast_1d(r).ravel()
        xs = np.repeat(self.x, 2)
        gs = np.column_stack((self.left, self.right)).ravel()
        out = np.interp(flat, gs, xs)
        below = flat < gs[0]
        above = flat > gs[-1]
        out[below] = self.x[0] + (flat[below] - gs[0]) / self.left_slope
        out[above] = self.x[-1] + (flat[above] - gs[-1]) / self.right_slope
        return out.reshape(r.shape) if r.ndim else float(out[0])

    def sup_norm(self):
        if self.left_slope or self.right_slope:
            return float('inf')
        return float(max(np.max(np.abs(self.left)), np.max(np.abs(self.right))))

    def __repr__(self):
        return 'PiecewiseLinearFn({0} breakpoints on [{1:g}, {2:g}])'.format(
            self.x.size, self.x[0], self.x[-1])


def bisect_sup(fn, targets, lo, hi, snap_points=None, width=BISECTION_WIDTH, max_steps=200):
    """sup{x : fn(x) < r} by vectorised bisection for an increasing callable.

    lo and hi must bracket the answer (fn(lo) < r <= fn(hi)). Points listed in
    snap_points (the jump locations of fn) are returned exactly when the final
    bracket contains them.
    """
    r = np.atleast_1d(np.asarray(targets, dtype=float)).ravel()
    lo = np.broadcast_to(np.asarray(lo, dtype=float), r.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), r.shape).copy()
    for _ in range(max_steps):
        active = (hi - lo) > width * (1.0 + np.abs(lo))
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        below = fn(mid) < r
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    out = 0.5 * (lo + hi)
    if snap_points is not None and len(snap_points):
        snap = np.asarray(snap_points, dtype=float)
        k = np.clip(np.searchsorted(snap, lo), 0, snap.size - 1)
        inside = (snap[k] >= lo) & (snap[k] <= hi)
        out[inside] = snap[k[inside]]
    return out

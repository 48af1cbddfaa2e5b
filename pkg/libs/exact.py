#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Closed-form solution of the multipeakon with a unit atom at the origin.

ubar = 3 on x <= 0, 3 - x on (0, 1], 4 - 2x on (1, 2], 0 beyond, with a unit
atom at 0. The segment (1, 2] breaks at t = 1 in x = 11/4, the segment (0, 1]
at t = 2 in x = 35/8. The dissipation function must take the values 3/4 and
9/10 there.
"""

import numpy as np

from libs.catalog import EX41_BREAKING_TIMES
from libs.eulerian import ParameterError
from libs.lagrangian import eulerian_from_nodes

# Lagrangian labels of the segment ends
EX41_NODES = np.array([0.0, 1.0, 3.0, 8.0])
EX41_BREAKING_POINTS = ((1.0, 11.0 / 4.0, 3.0 / 4.0), (2.0, 35.0 / 8.0, 9.0 / 10.0))


def _regime(t):
    return [t < 1.0, t < 2.0, t >= 2.0]


def exact_lagrangian_ex41(t, xi):
    """(y, U, V) at time t >= 0 and label xi."""
    t, xi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(xi, dtype=float))
    if np.any(t < 0.0):
        raise ParameterError('exact solution is defined for t >= 0')
    t2 = t * t
    regions = [xi <= 0.0, xi <= 1.0, xi <= 3.0, xi <= 8.0]

    y = [
        [xi - 0.75 * t2 + 3.0 * t,
         0.25 * xi * t2 - 0.75 * t2 + 3.0 * t,
         (t - 2.0) ** 2 * xi / 8.0 - 5.0 / 8.0 * t2 + 3.5 * t - 0.5,
         (t - 1.0) ** 2 * xi / 5.0 - 17.0 / 20.0 * t2 + 16.0 / 5.0 * t + 0.4,
         xi + 0.75 * t2 - 6.0],
        [xi - 3.0 / 8.0 * t2 + 9.0 / 4.0 * t + 3.0 / 8.0,
         0.25 * t2 * xi - 3.0 / 8.0 * t2 + 9.0 / 4.0 * t + 3.0 / 8.0,
         (t - 2.0) ** 2 * xi / 8.0 - 0.25 * t2 + 11.0 / 4.0 * t - 1.0 / 8.0,
         (t - 1.0) ** 2 * xi / 20.0 - t2 / 40.0 + 31.0 / 20.0 * t + 49.0 / 40.0,
         xi + 3.0 / 8.0 * t2 + 0.75 * t - 51.0 / 8.0],
        [xi - 21.0 / 80.0 * t2 + 9.0 / 5.0 * t + 33.0 / 40.0,
         0.25 * t2 * xi - 21.0 / 80.0 * t2 + 9.0 / 5.0 * t + 33.0 / 40.0,
         (t - 2.0) ** 2 * xi / 80.0 - t2 / 40.0 + 37.0 / 20.0 * t + 31.0 / 40.0,
         (t - 1.0) ** 2 * xi / 20.0 - 11.0 / 80.0 * t2 + 2.0 * t + 31.0 / 40.0,
         xi + 21.0 / 80.0 * t2 + 6.0 / 5.0 * t - 273.0 / 40.0],
    ]
    U = [
        [-1.5 * t + 3.0,
         0.5 * xi * t - 1.5 * t + 3.0,
         0.25 * (t - 2.0) * xi - 1.25 * t + 3.5,
         0.4 * (t - 1.0) * xi - 1.7 * t + 3.2,
         1.5 * t],
        [-0.75 * t + 2.25,
         0.5 * t * xi - 0.75 * t + 2.25,
         0.25 * (t - 2.0) * xi - 0.5 * t + 2.75,
         (t - 1.0) * xi / 10.0 - t / 20.0 + 31.0 / 20.0,
         0.75 * t + 0.75],
        [-21.0 / 40.0 * t + 1.8,
         0.5 * t * xi - 21.0 / 40.0 * t + 1.8,
         (t - 2.0) * xi / 40.0 - t / 20.0 + 37.0 / 20.0,
         (t - 1.0) * xi / 10.0 - 11.0 / 40.0 * t + 2.0,
         21.0 / 40.0 * t + 1.2],
    ]
    zero = np.zeros_like(xi)
    V = [
        [zero, xi, 0.5 * (xi + 1.0), (4.0 * xi - 2.0) / 5.0, zero + 6.0],
        [zero, xi, 0.5 * (xi + 1.0), (xi + 7.0) / 5.0, zero + 3.0],
        [zero, xi, (xi + 19.0) / 20.0, xi / 5.0 + 0.5, zero + 2.1],
    ]
    regime = _regime(t)
    out = []
    for part in (y, U, V):
        per_regime = [np.select(regions, part[r][:4], part[r][4]) for r in range(3)]
        out.append(np.select(regime, per_regime))
    y_t, U_t, V_t = out
    if y_t.ndim == 0:
        return float(y_t), float(U_t), float(V_t)
    return y_t, U_t, V_t


def _eulerian_regime(t, x):
    t2 = t * t
    return [
        ([-0.75 * t2 + 3.0 * t, -0.5 * t2 + 3.0 * t, -0.25 * t2 + 2.0 * t + 1.0, 0.75 * t2 + 2.0],
         [3.0 - 1.5 * t,
          2.0 / t * (x - 1.5 * t),
          2.0 / (t - 2.0) * (x - 0.5 * t - 3.0),
          2.0 / (t - 1.0) * (x - 0.75 * t - 2.0),
          1.5 * t + 0.0 * x],
         [0.0 * x,
          4.0 / t2 * (x + 0.75 * t2 - 3.0 * t),
          4.0 / (t - 2.0) ** 2 * (x + 0.75 * t2 - 4.0 * t + 1.0),
          4.0 / (t - 1.0) ** 2 * (x + 0.75 * t2 - 3.0 * t - 0.5),
          6.0 + 0.0 * x]),
        ([-3.0 / 8.0 * t2 + 9.0 / 4.0 * t + 3.0 / 8.0, -t2 / 8.0 + 9.0 / 4.0 * t + 3.0 / 8.0,
          t2 / 8.0 + 5.0 / 4.0 * t + 11.0 / 8.0, 3.0 / 8.0 * t2 + 0.75 * t + 13.0 / 8.0],
         [-0.75 * t + 2.25,
          2.0 / t * (x - 9.0 / 8.0 * t - 3.0 / 8.0),
          2.0 / (t - 2.0) * (x - 7.0 / 8.0 * t - 21.0 / 8.0),
          2.0 / (t - 1.0) * (x - 0.75 * t - 2.0),
          0.75 * t + 0.75 + 0.0 * x],
         [0.0 * x,
          4.0 / t2 * (x + 3.0 / 8.0 * t2 - 9.0 / 4.0 * t - 3.0 / 8.0),
          4.0 / (t - 2.0) ** 2 * (x + 3.0 / 8.0 * t2 - 13.0 / 4.0 * t + 5.0 / 8.0),
          4.0 / (t - 1.0) ** 2 * (x + 3.0 / 8.0 * t2 - 9.0 / 4.0 * t - 7.0 / 8.0),
          3.0 + 0.0 * x]),
        ([-21.0 / 80.0 * t2 + 9.0 / 5.0 * t + 33.0 / 40.0, -t2 / 80.0 + 9.0 / 5.0 * t + 33.0 / 40.0,
          t2 / 80.0 + 17.0 / 10.0 * t + 37.0 / 40.0, 21.0 / 80.0 * t2 + 6.0 / 5.0 * t + 47.0 / 40.0],
         [-21.0 / 40.0 * t + 1.8,
          2.0 / t * (x - 0.9 * t - 33.0 / 40.0),
          2.0 / (t - 2.0) * (x - 7.0 / 8.0 * t - 21.0 / 8.0),
          2.0 / (t - 1.0) * (x - 69.0 / 80.0 * t - 71.0 / 40.0),
          21.0 / 40.0 * t + 1.2 + 0.0 * x],
         [0.0 * x,
          4.0 / t2 * (x + 21.0 / 80.0 * t2 - 9.0 / 5.0 * t - 33.0 / 40.0),
          4.0 / (t - 2.0) ** 2 * (x + 21.0 / 80.0 * t2 - 14.0 / 5.0 * t + 7.0 / 40.0),
          4.0 / (t - 1.0) ** 2 * (x + 21.0 / 80.0 * t2 - 9.0 / 4.0 * t - 26.0 / 40.0),
          2.1 + 0.0 * x]),
    ]


def exact_ex41(t, x):
    """(u, F) at time t >= 0 and position x; F is left-continuous."""
    t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    if np.any(t < 0.0):
        raise ParameterError('exact solution is defined for t >= 0')
    with np.errstate(divide='ignore', invalid='ignore'):
        u_parts, F_parts = [], []
        for breaks, u, F in _eulerian_regime(t, x):
            regions = [x <= b for b in breaks]
            u_parts.append(np.select(regions, u[:4], u[4]))
            F_parts.append(np.select(regions, F[:4], F[4]))
        regime = _regime(t)
        u_t = np.select(regime, u_parts)
        F_t = np.select(regime, F_parts)
    if u_t.ndim == 0:
        return float(u_t), float(F_t)
    return u_t, F_t


def check_ex41_alpha(alpha, tol=1e-12):
    """Raise ParameterError unless alpha has the values the closed form assumes."""
    for t, x, value in EX41_BREAKING_POINTS:
        got = float(alpha(x))
        if abs(got - value) > tol:
            raise ParameterError('exact solution needs alpha({0:g}) = {1:g} (breaking at t={2:g}), '
                                 'got {3:.12g}'.format(x, value, t, got))


class ExactEx41Reference(object):
    """Exact solution as a reference source: piecewise linear in x at every t."""

    breaking_times = EX41_BREAKING_TIMES

    def __init__(self):
        self.H = EX41_NODES - np.array([0.0, 0.0, 1.0, 2.0])
        self._cache = {}

    def eulerian_at(self, t, cache=True):
        t = float(t)
        cached = self._cache.get(t)
        if cached is None:
            y, U, V = exact_lagrangian_ex41(t, EX41_NODES)
            cached = eulerian_from_nodes(t, y, U, V, self.H)
            if cache:
                self._cache[t] = cached
        return cached

    def __call__(self, t, x):
        return exact_ex41(t, x)

#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Builtin initial data and dissipation functions of the reference experiments.
"""

import numpy as np

from libs.constants import (BUILTIN_ALPHA1, BUILTIN_ALPHA2, BUILTIN_ALPHA_CUSP, BUILTIN_ALPHA_EX42,
                            BUILTIN_CANTOR, BUILTIN_CUSP, BUILTIN_EX41, BUILTIN_EX42, DEFAULT_GAP_FACTOR,
                            EX42_GAP_FACTOR)
from libs.eulerian import AlphaFunction, CuspProfile, InitialData, ParameterError
from libs.piecewise import PiecewiseLinearFn

CUSP_ALPHA_LEVEL = 19.0 / 20.0
CANTOR_DEPTH = 12

# Breaking times of the exact solutions
EX41_BREAKING_TIMES = (1.0, 2.0)
EX42_BREAKING_TIMES = (2.0, 40.0 / 19.0, 20.0 / 9.0)


def ex41_profile():
    return PiecewiseLinearFn.from_points([[0.0, 3.0], [1.0, 2.0], [2.0, 0.0]])


def ex41_data():
    """Multipeakon with a unit atom at the origin, F_inf = 6."""
    return InitialData.build(ex41_profile(), atoms=[[0.0, 1.0]])


def ex42_profile():
    return PiecewiseLinearFn.from_points([
        [0.0, 3.0],
        [1.0, 2.0],
        [400.0 / 361.0, 2.0],
        [800.0 / 361.0, 18.0 / 19.0],
        [200.0 / 81.0, 18.0 / 19.0],
        [100.0 / 27.0, -28.0 / 171.0],
    ])


def ex42_data():
    """Multipeakon breaking at t = 2, 40/19 and 20/9, without atoms."""
    return InitialData.build(ex42_profile())


def cusp_data():
    profile = CuspProfile()
    return InitialData.build(profile, window=profile.window)


def cantor_table(depth=CANTOR_DEPTH):
    """Cantor function on [0, 1] resolved to 2^depth retained intervals."""
    # integer positions in units of 3^-depth keep the end points exact
    scale = 3 ** depth
    lefts = np.zeros(1, dtype=np.int64)
    for level in range(1, depth + 1):
        lefts = np.concatenate((lefts, lefts + 2 * 3 ** (depth - level)))
    lefts.sort()
    count = lefts.size
    x = np.column_stack((lefts, lefts + 1)).ravel() / float(scale)
    values = np.column_stack((np.arange(count), np.arange(1, count + 1))).ravel() / float(count)
    return np.column_stack((x, values))


def cantor_data(depth=CANTOR_DEPTH):
    """u = 0 with a purely singular continuous energy of mass 1 on [0, 1]."""
    return InitialData.build(PiecewiseLinearFn.constant(0.0), sc_table=cantor_table(depth))


def _alpha1(x):
    x = np.asarray(x, dtype=float)
    return np.select([x < 0.0, x <= 11.0 / 4.0, x <= 35.0 / 8.0],
                     [0.0, 3.0 * x / 11.0, 6.0 * x / 65.0 + 129.0 / 260.0], 9.0 / 10.0)


def _alpha2(x):
    x = np.asarray(x, dtype=float)
    rate = 4.0 / 11.0 * np.log(7.0 / 4.0)
    with np.errstate(over='ignore'):
        rising = np.expm1(rate * x)
    return np.select([x < 0.0, x <= 11.0 / 4.0, x <= 35.0 / 8.0],
                     [0.0, rising, 48.0 / 65.0 * x ** 2 - 336.0 / 65.0 * x + 2439.0 / 260.0],
                     9.0 / 10.0)


def _alpha_ex42(x):
    x = np.asarray(x, dtype=float)
    return np.select([x <= 1434.0 / 361.0, x <= 6879.0 / 1444.0, x <= 5.0],
                     [0.0, -478.0 / 127.0 + 361.0 * x / 381.0, (361.0 * x - 441.0) / 1705.0],
                     4.0 / 5.0)


def cusp_alpha(level=CUSP_ALPHA_LEVEL):
    if not 0.0 <= level <= 1.0:
        raise ParameterError('cusp alpha level must lie in [0, 1], got {0}'.format(level))

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        return np.select([x < -1.0, x < 0.0], [level, -level * x], 0.0)

    return AlphaFunction(evaluate, level, name='cusp({0:g})'.format(level))


def builtin_alpha(name):
    if name == BUILTIN_ALPHA1:
        return AlphaFunction(_alpha1, 3.0 / 11.0, name=name)
    if name == BUILTIN_ALPHA2:
        return AlphaFunction(_alpha2, 84.0 / 65.0, name=name)
    if name == BUILTIN_ALPHA_EX42:
        return AlphaFunction(_alpha_ex42, 361.0 / 381.0, name=name)
    if name == BUILTIN_ALPHA_CUSP:
        return cusp_alpha()
    raise ParameterError('unknown builtin alpha {0!r}'.format(name))


_DATA = {
    BUILTIN_EX41: ex41_data,
    BUILTIN_EX42: ex42_data,
    BUILTIN_CUSP: cusp_data,
    BUILTIN_CANTOR: cantor_data,
}

_PROFILES = {
    BUILTIN_EX41: ex41_profile,
    BUILTIN_EX42: ex42_profile,
    BUILTIN_CUSP: CuspProfile,
}


def builtin_data(name):
    try:
        return _DATA[name]()
    except KeyError:
        raise ParameterError('unknown builtin data {0!r}'.format(name))


def builtin_profile(name):
    try:
        return _PROFILES[name]()
    except KeyError:
        raise ParameterError('unknown builtin profile {0!r}'.format(name))


def default_alpha_for(example):
    return {BUILTIN_EX41: BUILTIN_ALPHA1, BUILTIN_EX42: BUILTIN_ALPHA_EX42,
            BUILTIN_CUSP: BUILTIN_ALPHA_CUSP}.get(example, BUILTIN_ALPHA1)


def exact_breaking_times(example):
    return {BUILTIN_EX41: EX41_BREAKING_TIMES, BUILTIN_EX42: EX42_BREAKING_TIMES}.get(example, ())


def default_gap_factor_for(example):
    """Schedule gap factor of the builtin runs; ex42 skips breaking times within 2 max|u| dx of the last one."""
    return {BUILTIN_EX42: EX42_GAP_FACTOR}.get(example, DEFAULT_GAP_FACTOR)

#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Readers for initial data and dissipation functions.

Initial data:
    {"u": {"breakpoints": [[x, v], ...], "left": v, "right": v} | {"builtin": "ex41"},
     "atoms": [[x, m], ...], "sc_table": [[x, F_sc], ...], "window": [x_min, x_max]}
Alpha:
    {"builtin": "alpha1"} | {"const": v} | {"breakpoints": [[x, a], ...], "lipschitz": L}
"""

import json
import logging
import os

from libs import catalog
from libs.constants import (BUILTIN_ALPHAS, BUILTIN_CUSP, BUILTIN_DATA, BUILTIN_EX41, BUILTIN_EX42,
                            DEFAULT_ENCODING, JSON_EXT)
from libs.eulerian import AlphaFunction, InitialData
from libs.piecewise import PiecewiseLinearFn
from libs.utils import HSError

logger = logging.getLogger(__name__)

ENCODE_METHOD = DEFAULT_ENCODING
BUILTIN_PROFILES = (BUILTIN_EX41, BUILTIN_EX42, BUILTIN_CUSP)


class DataFormatError(HSError):
    pass


def _load_json(path):
    try:
        with open(path, 'r', encoding=ENCODE_METHOD) as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        raise DataFormatError('cannot read {0}: {1}'.format(path, e))


def _points(raw, what):
    try:
        points = [(float(x), float(v)) for x, v in raw]
    except (TypeError, ValueError):
        raise DataFormatError('{0} must be a list of [x, value] pairs'.format(what))
    return points


class InitialDataReader:

    def __init__(self, file_path):
        self.file_path = file_path
        self.data = None
        self.builtin = None
        self.parse_json()

    def parse_json(self):
        raw = _load_json(self.file_path)
        if not isinstance(raw, dict) or 'u' not in raw:
            raise DataFormatError('{0}: missing "u" entry'.format(self.file_path))
        self.data = self.build(raw)

    def _profile(self, spec):
        if 'builtin' in spec:
            name = spec['builtin']
            if name not in BUILTIN_PROFILES:
                raise DataFormatError('unknown builtin profile {0!r}'.format(name))
            self.builtin = name
            return catalog.builtin_profile(name)
        if 'breakpoints' not in spec:
            raise DataFormatError('u needs "breakpoints" or "builtin"')
        points = _points(spec['breakpoints'], 'u breakpoints')
        if not points:
            raise DataFormatError('u needs at least one breakpoint')
        for key, value in (('left', points[0][1]), ('right', points[-1][1])):
            if key in spec and abs(float(spec[key]) - value) > 1e-12 * (1.0 + abs(value)):
                raise DataFormatError('u must be continuous: "{0}" tail {1} differs from the end value {2}'.format(
                    key, spec[key], value))
        return PiecewiseLinearFn.from_points(points)

    def build(self, raw):
        profile = self._profile(raw['u'])
        atoms = _points(raw.get('atoms', []), 'atoms')
        if 'atoms' not in raw and self.builtin == BUILTIN_EX41:
            # the builtin multipeakon profile carries its unit atom
            atoms = [(0.0, 1.0)]
        sc_table = _points(raw.get('sc_table', []), 'sc_table') or None
        window = raw.get('window')
        if window is None and self.builtin == BUILTIN_CUSP:
            window = profile.window
        if window is not None and len(window) != 2:
            raise DataFormatError('window must be [x_min, x_max]')
        return InitialData.build(profile, atoms=atoms, sc_table=sc_table, window=window)

    def get_data(self):
        return self.data


class AlphaReader:

    def __init__(self, file_path):
        self.file_path = file_path
        self.alpha = self.parse(_load_json(file_path))

    @staticmethod
    def parse(raw):
        if not isinstance(raw, dict):
            raise DataFormatError('alpha must be a JSON object')
        if 'builtin' in raw:
            if raw['builtin'] not in BUILTIN_ALPHAS:
                raise DataFormatError('unknown builtin alpha {0!r}'.format(raw['builtin']))
            return catalog.builtin_alpha(raw['builtin'])
        if 'const' in raw:
            return AlphaFunction.constant(float(raw['const']))
        if 'breakpoints' in raw:
            lipschitz = raw.get('lipschitz')
            points = _points(raw['breakpoints'], 'alpha breakpoints')
            if any(not 0.0 <= a <= 1.0 for _, a in points):
                raise DataFormatError('alpha values must lie in [0, 1]')
            return AlphaFunction.from_breakpoints(points,
                                                  lipschitz=None if lipschitz is None else float(lipschitz),
                                                  name=raw.get('name'))
        raise DataFormatError('alpha needs "builtin", "const" or "breakpoints"')

    def get_alpha(self):
        return self.alpha


def load_initial_data(spec):
    """Builtin example name or path of a JSON file."""
    if spec in BUILTIN_DATA:
        return catalog.builtin_data(spec)
    if not os.path.isfile(spec):
        raise DataFormatError('no builtin data or file named {0!r}'.format(spec))
    logger.info('reading initial data from %s', spec)
    return InitialDataReader(spec).get_data()


def load_alpha(spec):
    """Builtin alpha name, "const:v", a bare number, or path of a JSON file."""
    spec = str(spec)
    if spec in BUILTIN_ALPHAS:
        return catalog.builtin_alpha(spec)
    if spec.startswith('const:'):
        spec = spec[len('const:'):]
    if not spec.endswith(JSON_EXT):
        try:
            return AlphaFunction.constant(float(spec))
        except ValueError:
            pass
    if not os.path.isfile(spec):
        raise DataFormatError('no builtin alpha or file named {0!r}'.format(spec))
    return AlphaReader(spec).get_alpha()

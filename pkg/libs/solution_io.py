#!/usr/bin/env python
# -*- coding: utf8 -*-
"""
Writers for projected data, Lagrangian grids, Eulerian solutions and the
rescaling pair. Tables go to CSV through pandas, metadata to JSON.
"""
import json
import logging
import os
from pathlib import Path

import numpy as np
import pandas as pd

from libs.constants import CSV_EXT, DEFAULT_ENCODING, FLOAT_FORMAT, JSON_EXT

logger = logging.getLogger(__name__)

ENCODE_METHOD = DEFAULT_ENCODING


def _stem(path):
    root, ext = os.path.splitext(path)
    return root if ext in (CSV_EXT, JSON_EXT) else path


def _write_csv(frame, path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding=ENCODE_METHOD, lineterminator='\n')
    logger.info('wrote %s', path)
    return path


def _write_json(content, path):
    Path(path).write_text(json.dumps(content, indent=2), ENCODE_METHOD)
    logger.info('wrote %s', path)
    return path


class SolutionWriter:
    """u, F(x-) and F(x+) at the breakpoints of an Eulerian solution."""

    def __init__(self, solution, output_file):
        self.solution = solution
        self.stem = _stem(output_file)

    def frame(self):
        s = self.solution
        x = s.breakpoints()
        return pd.DataFrame({'x': x, 'u': s.u(x), 'F': s.F(x), 'F_right': s.F.right_limit(x)})

    def save(self):
        s = self.solution
        meta = {'t': s.t, 'energy': s.energy, 'nodes': int(s.u.x.size),
                'u_left': s.u.left_tail, 'u_right': s.u.right_tail}
        return [_write_csv(self.frame(), self.stem + CSV_EXT), _write_json(meta, self.stem + JSON_EXT)]


class ProjectionWriter:
    """One row per double cell of projected data."""

    def __init__(self, proj, output_file):
        self.proj = proj
        self.stem = _stem(output_file)

    def frame(self):
        p = self.proj
        frame = pd.DataFrame(p.records(), columns=['u', 'Du', 'q', 'sign', 'F_ac', 'F_sing'])
        frame.insert(0, 'x', p.x_even[:-1])
        frame.insert(0, 'j', np.arange(p.j_min, p.j_max))
        return frame

    def save(self):
        p = self.proj
        meta = {'dx': p.dx, 'j_min': p.j_min, 'j_max': p.j_max, 'energy': p.total_energy,
                'u_right': float(p.u[-1]), 'F_sing_left': p.fsing_left}
        return [_write_csv(self.frame(), self.stem + CSV_EXT), _write_json(meta, self.stem + JSON_EXT)]


class LagrangianWriter:
    """Node values of a Lagrangian grid; cell values belong to the cell right of the node."""

    def __init__(self, grid, output_file):
        self.grid = grid
        self.stem = _stem(output_file)

    def frame(self):
        g = self.grid
        pad = np.array([np.nan])
        return pd.DataFrame({
            'xi': g.xi, 'y': g.y, 'U': g.U, 'V': g.V, 'H': g.H,
            'y_xi': np.concatenate((g.yx, pad)), 'U_xi': np.concatenate((g.Ux, pad)),
            'V_xi': np.concatenate((g.Vx, pad)), 'H_xi': np.concatenate((g.Hx, pad)),
            'tau': np.concatenate((g.tau, pad)),
        })

    def save(self):
        g = self.grid
        meta = {'t': g.time, 'dx': g.dx, 'layout': g.layout, 'nodes': g.nodes,
                'asymptotes': g.asymptotes._asdict()}
        return [_write_csv(self.frame(), self.stem + CSV_EXT), _write_json(meta, self.stem + JSON_EXT)]


class AnalysisWriter:
    """phi and psi on a label grid together with the breaking sets of every double cell."""

    def __init__(self, pair, output_file, lengths=None, samples=400):
        self.pair = pair
        self.lengths = lengths
        self.samples = samples
        self.stem = _stem(output_file)

    def frame(self):
        nodes = self.pair.xi_nodes
        r = np.unique(np.concatenate((nodes, np.linspace(nodes[0], nodes[-1], self.samples))))
        phi, psi = self.pair(r)
        return pd.DataFrame({'r': r, 'Y': self.pair.Y(r), 'phi': phi, 'psi': psi})

    def save(self):
        cells = []
        for cell in self.pair.cells:
            cells.append({'j': cell.index, 'x': cell.x_left, 'xi': [cell.xi_left, cell.xi_right],
                          'B_dx': list(cell.B_dx), 'B': [list(b) for b in cell.B],
                          'measure_B': cell.measure_B, 'measure_B_dx': cell.measure_B_dx})
        meta = {'exact': self.pair.exact, 'cells': cells}
        if self.lengths is not None:
            meta['lengths_passed'] = self.lengths.passed
            meta['max_violation'] = self.lengths.max_violation
            meta['tolerance'] = self.lengths.tolerance
        return [_write_csv(self.frame(), self.stem + CSV_EXT), _write_json(meta, self.stem + JSON_EXT)]

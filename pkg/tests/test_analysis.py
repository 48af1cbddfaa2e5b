#!/usr/bin/env python
import os
import sys
import unittest

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..'))
from libs.analysis import PreconditionError, analyze_projection, combined_Y, rescaling_pair
from libs.catalog import cantor_data, ex41_data
from libs.lagrangian import to_lagrangian_grid, ybar_fn
from libs.piecewise import PiecewiseLinearFn
from libs.projection import project


class TestCombinedY(unittest.TestCase):

    def test_plateau_on_a_jump(self):
        G = PiecewiseLinearFn([0.0], [0.0], [2.0])
        G_dx = PiecewiseLinearFn([0.0], [0.0], [0.0])
        np.testing.assert_allclose(combined_Y(G, G_dx, np.array([-1.0, 0.5, 1.0, 2.0])), [-1.0, 0.0, 0.0, 1.0])


class TestRescalingPair(unittest.TestCase):

    def setUp(self):
        self.data = ex41_data()
        self.proj = project(self.data, 0.25)
        self.grid = to_lagrangian_grid(self.proj)
        self.ybar = ybar_fn(self.data)
        self.pair = rescaling_pair(self.ybar, self.grid.y_fn(), self.data.measure.as_piecewise_linear(),
                                   self.proj.F_fn(), self.grid.double_cell_nodes())

    def test_phi_and_psi_follow_the_same_characteristic(self):
        r = np.linspace(-1.0, 10.0, 200)
        Y = self.pair.Y(r)
        phi, psi = self.pair(r)
        np.testing.assert_allclose(phi + psi, 2.0 * r, atol=1e-12)
        np.testing.assert_allclose(self.ybar(phi), Y, atol=1e-10)
        np.testing.assert_allclose(self.grid.y_fn()(psi), Y, atol=1e-10)
        self.assertTrue(np.all(np.diff(phi) >= -1e-12))
        self.assertTrue(np.all(np.diff(psi) >= -1e-12))

    def test_atom_is_split_between_phi_and_psi(self):
        self.assertTrue(self.pair.exact)
        self.assertEqual(self.pair.phi(0.25), 0.0)
        self.assertAlmostEqual(self.pair.psi(0.25), 0.5)
        self.assertAlmostEqual(self.pair.phi(0.75), 0.5)
        self.assertAlmostEqual(self.pair.psi(0.75), 1.0)

    def test_breaking_sets(self):
        first = self.pair.cells[0]
        self.assertEqual(first.x_left, 0.0)
        self.assertEqual(first.B_dx, (0.0, 0.5))
        self.assertAlmostEqual(first.measure_B, 0.5)
        self.assertEqual(first.B, [(0.5, 1.0)])
        for cell in self.pair.cells[1:]:
            self.assertEqual(cell.measure_B_dx, 0.0)
            self.assertAlmostEqual(cell.measure_B, 0.0)

    def test_boundaries_must_agree(self):
        with self.assertRaises(PreconditionError):
            rescaling_pair(self.ybar, lambda xi: self.grid.y_fn()(xi) + 1e-3,
                           self.data.measure.as_piecewise_linear(), self.proj.F_fn(),
                           self.grid.double_cell_nodes())


class TestCoincidingLengths(unittest.TestCase):

    def test_atom(self):
        for dx in (0.5, 0.25):
            pair, report = analyze_projection(ex41_data(), dx)
            self.assertTrue(report.passed, report.rows)
            self.assertEqual(report.tolerance, 1e-10)
            self.assertAlmostEqual(report.rows[0].half_singular, 0.5)
            self.assertTrue(all(row.half_singular == 0.0 for row in report.rows[1:]))

    def test_cantor(self):
        pair, report = analyze_projection(cantor_data(), 0.5)
        self.assertTrue(pair.exact)
        self.assertEqual(report.tolerance, 1e-6)
        self.assertTrue(report.passed, report.rows)
        self.assertAlmostEqual(report.rows[0].measure_B, 0.5, places=6)
        self.assertAlmostEqual(report.rows[0].measure_B_dx, 0.5)
        self.assertLess(report.max_violation, 1e-6)


if __name__ == '__main__':
    unittest.main()

#!/usr/bin/env python
import os
import sys
import unittest

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..'))
from libs.catalog import cantor_data, cusp_data, ex41_data
from libs.lagrangian import (CorruptedStateError, LagrangianGrid, breaking_times, check_lagrangian_invariants,
                             eulerian_from_nodes, exact_grid, lagrangian_at, lagrangian_error_report,
                             to_eulerian, to_lagrangian_grid, ybar_fn)
from libs.piecewise import StructureError
from libs.projection import project


class TestExactGrid(unittest.TestCase):

    def setUp(self):
        self.grid = exact_grid(ex41_data())

    def test_nodes(self):
        g = self.grid
        self.assertEqual(g.layout, 'exact')
        np.testing.assert_array_equal(g.xi, [0.0, 1.0, 3.0, 8.0])
        np.testing.assert_array_equal(g.y, [0.0, 0.0, 1.0, 2.0])
        np.testing.assert_array_equal(g.U, [3.0, 3.0, 2.0, 0.0])
        np.testing.assert_array_equal(g.H, [0.0, 1.0, 2.0, 6.0])
        self.assertEqual(g.energy, 6.0)

    def test_cells(self):
        g = self.grid
        np.testing.assert_allclose(g.yx, [0.0, 0.5, 0.2])
        np.testing.assert_allclose(g.Ux, [0.0, -0.5, -0.4])
        np.testing.assert_allclose(g.Vx, [1.0, 0.5, 0.8])
        np.testing.assert_allclose(g.tau, [0.0, 2.0, 1.0])

    def test_invariants(self):
        report = check_lagrangian_invariants(self.grid)
        self.assertTrue(report.passed, report.failures())

    def test_breaking_times_are_absolute(self):
        np.testing.assert_allclose(breaking_times(self.grid.with_time(1.0)), [1.0, 3.0, 2.0])

    def test_singular_continuous_data_is_rejected(self):
        with self.assertRaises(StructureError):
            exact_grid(cantor_data(2))
        with self.assertRaises(StructureError):
            exact_grid(cusp_data())


class TestLabels(unittest.TestCase):

    def test_ybar(self):
        ybar = ybar_fn(ex41_data())
        np.testing.assert_allclose(ybar(np.array([-1.0, 0.0, 0.5, 1.0, 3.0, 8.0, 10.0])),
                                   [-1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 4.0])

    def test_lagrangian_at(self):
        y, U, V, H = lagrangian_at(ex41_data(), 5.0)
        self.assertAlmostEqual(y, 1.4)
        self.assertAlmostEqual(U, 1.2)
        self.assertAlmostEqual(V, 3.6)
        self.assertEqual(V, H)

    def test_lagrangian_at_cusp(self):
        data = cusp_data()
        xi = np.array([-2.0, 4.0 / 3.0, 5.0])
        y, U, V, _ = lagrangian_at(data, xi)
        np.testing.assert_allclose(y, [-2.0, 0.0, 5.0 - 8.0 / 3.0], atol=1e-12)
        np.testing.assert_allclose(y + V, xi, atol=1e-12)
        np.testing.assert_allclose(U, data.u(y), atol=1e-12)


class TestProjectedGrid(unittest.TestCase):

    def test_triple_layout(self):
        grid = to_lagrangian_grid(project(ex41_data(), 0.25))
        self.assertEqual(grid.layout, 'triple')
        self.assertEqual(grid.nodes, 16)
        np.testing.assert_allclose(grid.double_cell_nodes(), [0.0, 2.0, 3.0, 5.5, 8.0, 8.5])
        self.assertTrue(check_lagrangian_invariants(grid).passed)

    def test_exact_grid_has_no_double_cells(self):
        with self.assertRaises(StructureError):
            exact_grid(ex41_data()).double_cell_nodes()

    def test_round_trip_reproduces_projection(self):
        for data in (ex41_data(), cusp_data()):
            proj = project(data, 1.0 / 16.0)
            grid = to_lagrangian_grid(proj)
            self.assertTrue(check_lagrangian_invariants(grid).passed)
            sol = to_eulerian(grid)
            x = proj.u_fn().x
            np.testing.assert_allclose(sol.u(x), proj.u_fn()(x), atol=1e-12)
            F = proj.F_fn()
            np.testing.assert_allclose(sol.F(proj.x_even), F(proj.x_even), atol=1e-12)
            np.testing.assert_allclose(sol.F.right_limit(proj.x_even), F.right_limit(proj.x_even), atol=1e-12)
            self.assertAlmostEqual(sol.energy, proj.total_energy, places=12)

    def test_error_bounds(self):
        data = cusp_data()
        for k in range(1, 6):
            grid = to_lagrangian_grid(project(data, 4.0 ** -k))
            report = lagrangian_error_report(data, grid)
            self.assertTrue(report.passed, (k, report.norms, report.bounds))

    def test_piecewise_linear_data_is_exact(self):
        data = ex41_data()
        report = lagrangian_error_report(data, to_lagrangian_grid(project(data, 0.25)))
        for name, value in report.norms.items():
            self.assertLess(value, 1e-12, name)


class TestGridStructure(unittest.TestCase):

    def test_lengths_are_checked(self):
        with self.assertRaises(StructureError):
            LagrangianGrid(time=0.0, xi=[0.0, 1.0], y=[0.0, 1.0], U=[0.0, 0.0], V=[0.0, 0.0],
                           H=[0.0, 0.0], yx=[1.0, 1.0], Ux=[0.0], Vx=[0.0], Hx=[0.0], tau=[np.inf])

    def test_arrays_are_read_only(self):
        grid = exact_grid(ex41_data())
        with self.assertRaises(ValueError):
            grid.y[0] = 1.0

    def test_decreasing_y_is_corruption(self):
        with self.assertRaises(CorruptedStateError):
            eulerian_from_nodes(0.5, [0.0, 1.0, 0.5], [0.0, 0.0, 0.0], [0.0, 1.0, 2.0], [0.0, 1.0, 2.0])

    def test_coincident_nodes_merge_into_a_jump(self):
        sol = eulerian_from_nodes(0.0, [0.0, 0.0, 1.0], [3.0, 3.0, 2.0], [0.0, 1.0, 2.0], [0.0, 1.0, 2.0])
        np.testing.assert_array_equal(sol.u.x, [0.0, 1.0])
        self.assertEqual(sol.F(0.0), 0.0)
        self.assertEqual(sol.F.right_limit(0.0), 1.0)
        self.assertEqual(sol.energy, 2.0)


if __name__ == '__main__':
    unittest.main()

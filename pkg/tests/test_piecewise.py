#!/usr/bin/env python
import os
import sys
import unittest

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..'))
from libs.piecewise import PiecewiseLinearFn, StructureError, bisect_sup


class TestPiecewiseLinearFn(unittest.TestCase):

    def setUp(self):
        self.f = PiecewiseLinearFn.from_points([[0.0, 0.0], [1.0, 2.0], [3.0, 2.0]])

    def test_evaluate(self):
        self.assertEqual(self.f(0.5), 1.0)
        self.assertEqual(self.f(2.0), 2.0)
        self.assertEqual(self.f(-1.0), 0.0)
        self.assertEqual(self.f(5.0), 2.0)
        np.testing.assert_allclose(self.f(np.array([0.0, 0.25, 1.0])), [0.0, 0.5, 2.0])

    def test_slopes_and_energy(self):
        np.testing.assert_allclose(self.f.slopes, [2.0, 0.0])
        energy = self.f.energy()
        self.assertEqual(energy(1.0), 4.0)
        self.assertEqual(energy(10.0), 4.0)

    def test_jump_is_left_continuous(self):
        g = PiecewiseLinearFn([0.0, 1.0], [0.0, 1.0], [1.0, 2.0])
        self.assertEqual(g(0.0), 0.0)
        self.assertEqual(g.right_limit(0.0), 1.0)
        self.assertEqual(g(0.5), 1.0)
        self.assertEqual(g(1.0), 1.0)
        self.assertEqual(g.right_limit(1.0), 2.0)
        self.assertFalse(g.is_continuous())
        np.testing.assert_allclose(g.jumps, [1.0, 1.0])

    def test_sup_inverse_of_a_jump(self):
        atom = PiecewiseLinearFn([0.0], [0.0], [1.0]).shifted_identity()
        self.assertEqual(atom.sup_inverse(0.5), 0.0)
        self.assertEqual(atom.sup_inverse(2.0), 1.0)
        self.assertEqual(atom.sup_inverse(-1.0), -1.0)

    def test_combine(self):
        g = PiecewiseLinearFn([0.5], [1.0], [3.0])
        h = self.f.combine(g, 0.5, 0.5)
        np.testing.assert_allclose(h.x, [0.0, 0.5, 1.0, 3.0])
        self.assertAlmostEqual(h(0.5), 0.5 * (1.0 + 1.0))
        self.assertAlmostEqual(h.right_limit(0.5), 0.5 * (1.0 + 3.0))

    def test_combine_merges_roundoff_breakpoints(self):
        near_one = np.nextafter(1.0, 0.0)
        f = PiecewiseLinearFn([0.0, near_one], [0.0, 1.0])
        g = PiecewiseLinearFn([0.0, 1.0], [0.0, 1.0], [0.0, 2.0])
        h = f.combine(g)
        np.testing.assert_array_equal(h.x, [0.0, 1.0])
        self.assertAlmostEqual(h(1.0), 2.0)
        self.assertAlmostEqual(h.right_limit(1.0), 3.0)
        graph = h.shifted_identity()
        self.assertTrue(np.all(graph.slopes > 0.0))
        self.assertEqual(graph.sup_inverse(3.5), 1.0)

    def test_sup_norm(self):
        self.assertEqual(self.f.sup_norm(), 2.0)
        self.assertEqual(PiecewiseLinearFn([0.0], [1.0], left_slope=1.0).sup_norm(), float('inf'))

    def test_breakpoints_must_increase(self):
        with self.assertRaises(StructureError) as ctx:
            PiecewiseLinearFn([0.0, 0.0, 1.0], [0.0, 1.0, 2.0])
        self.assertEqual(ctx.exception.index, 1)

    def test_check_increasing(self):
        self.f.check_increasing()
        with self.assertRaises(StructureError):
            PiecewiseLinearFn.from_points([[0.0, 1.0], [1.0, 0.0]]).check_increasing()


class TestBisectSup(unittest.TestCase):

    def test_cube_root(self):
        out = bisect_sup(lambda x: x ** 3, [8.0, 27.0], 0.0, 4.0)
        np.testing.assert_allclose(out, [2.0, 3.0], atol=1e-12)

    def test_snaps_to_jump(self):
        def step(x):
            return x + np.where(x > 1.0, 1.0, 0.0)
        out = bisect_sup(step, [1.5], 0.0, 3.0, snap_points=[1.0])
        self.assertEqual(out[0], 1.0)


if __name__ == '__main__':
    unittest.main()

#!/usr/bin/env python
import os
import sys
import unittest

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..'))
from libs.catalog import (EX42_BREAKING_TIMES, builtin_alpha, builtin_data, builtin_profile, cantor_data,
                          cantor_table, cusp_alpha, default_alpha_for, ex41_data, ex42_data,
                          exact_breaking_times)
from libs.eulerian import ParameterError


class TestBuiltinData(unittest.TestCase):

    def test_energies(self):
        self.assertAlmostEqual(ex41_data().total_energy, 6.0, places=14)
        self.assertAlmostEqual(ex42_data().total_energy, 3.0, places=14)
        self.assertAlmostEqual(cantor_data().total_energy, 1.0, places=14)

    def test_ex42_slopes(self):
        u = ex42_data().u
        np.testing.assert_allclose(u.slopes, [-1.0, 0.0, -0.95, 0.0, -0.9], atol=1e-14)
        self.assertEqual(u.right_tail, -28.0 / 171.0)

    def test_cantor_table(self):
        table = cantor_table(2)
        np.testing.assert_allclose(table[:, 0], [0.0, 1 / 9, 2 / 9, 1 / 3, 2 / 3, 7 / 9, 8 / 9, 1.0])
        np.testing.assert_allclose(table[:, 1], [0.0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1.0])
        sc = cantor_data(2).measure
        self.assertEqual(sc.sc_cumulative(0.5), 0.5)
        self.assertEqual(cantor_data(2).window, (0.0, 1.0))

    def test_lookup(self):
        self.assertEqual(builtin_data('ex41').total_energy, 6.0)
        self.assertEqual(builtin_profile('ex41')(0.5), 2.5)
        with self.assertRaises(ParameterError):
            builtin_data('nope')
        with self.assertRaises(ParameterError):
            builtin_profile('cantor')

    def test_breaking_times(self):
        self.assertEqual(exact_breaking_times('ex41'), (1.0, 2.0))
        self.assertEqual(exact_breaking_times('ex42'), EX42_BREAKING_TIMES)
        self.assertEqual(exact_breaking_times('cusp'), ())


class TestBuiltinAlpha(unittest.TestCase):

    def test_alpha1_and_alpha2_agree_at_breaking_points(self):
        alpha1 = builtin_alpha('alpha1')
        alpha2 = builtin_alpha('alpha2')
        self.assertAlmostEqual(alpha1(11.0 / 4.0), 0.75, places=14)
        self.assertAlmostEqual(alpha2(11.0 / 4.0), 0.75, places=14)
        self.assertAlmostEqual(alpha1(35.0 / 8.0), 0.9, places=14)
        self.assertAlmostEqual(alpha2(35.0 / 8.0), 0.9, places=14)
        self.assertEqual(alpha1(-1.0), 0.0)
        self.assertEqual(alpha2(10.0), 0.9)
        self.assertNotAlmostEqual(alpha1(2.0), alpha2(2.0))

    def test_alpha_ex42(self):
        alpha = builtin_alpha('ex42')
        self.assertEqual(alpha(0.0), 0.0)
        self.assertEqual(alpha(6.0), 0.8)
        self.assertAlmostEqual(alpha(5.0), (361.0 * 5.0 - 441.0) / 1705.0)
        self.assertAlmostEqual(alpha.lipschitz, 361.0 / 381.0)

    def test_cusp_alpha(self):
        alpha = cusp_alpha()
        self.assertAlmostEqual(alpha(-0.5), 0.475)
        self.assertEqual(alpha(0.5), 0.0)
        self.assertEqual(alpha(-2.0), 0.95)
        with self.assertRaises(ParameterError):
            cusp_alpha(1.5)

    def test_unknown_alpha(self):
        with self.assertRaises(ParameterError):
            builtin_alpha('nope')

    def test_default_alpha(self):
        self.assertEqual(default_alpha_for('ex41'), 'alpha1')
        self.assertEqual(default_alpha_for('ex42'), 'ex42')
        self.assertEqual(default_alpha_for('cusp'), 'cusp')


if __name__ == '__main__':
    unittest.main()

#!/usr/bin/env python
import os
import sys
import unittest

import numpy as np

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..'))
from libs.catalog import builtin_alpha, cusp_alpha, cusp_data, ex41_data, ex41_profile
from libs.eulerian import (AlphaFunction, CuspProfile, EnergyMeasure, InitialData, ParameterError,
                           besov_seminorm_estimate, cumulative, validate_initial_data)
from libs.piecewise import PiecewiseLinearFn, StructureError


class TestEnergyMeasure(unittest.TestCase):

    def test_cumulative_of_ex41(self):
        measure = ex41_data().measure
        self.assertEqual(cumulative(measure, 0.0), (0.0, 1.0))
        self.assertEqual(cumulative(measure, 1.5), (4.0, 4.0))
        self.assertEqual(cumulative(measure, 10.0), (6.0, 6.0))
        left, right = cumulative(measure, np.array([-1.0, 0.0]))
        np.testing.assert_array_equal(left, [0.0, 0.0])
        np.testing.assert_array_equal(right, [0.0, 1.0])

    def test_as_piecewise_linear(self):
        G = ex41_data().measure.as_piecewise_linear()
        np.testing.assert_array_equal(G.x, [0.0, 1.0, 2.0])
        np.testing.assert_array_equal(G.left, [0.0, 2.0, 6.0])
        np.testing.assert_array_equal(G.right, [1.0, 2.0, 6.0])

    def test_singular_mass(self):
        measure = EnergyMeasure(atoms=[[1.0, 0.5], [-1.0, 0.25]])
        np.testing.assert_array_equal(measure.atom_x, [-1.0, 1.0])
        self.assertEqual(measure.singular_mass(-1.0, 1.0), 0.25)
        self.assertEqual(measure.singular_mass(-1.0, 1.5), 0.75)
        self.assertEqual(measure.total, 0.75)
        self.assertTrue(measure.has_singular_part)

    def test_rejects_bad_atoms(self):
        with self.assertRaises(StructureError):
            EnergyMeasure(atoms=[[0.0, -1.0]])
        with self.assertRaises(StructureError):
            EnergyMeasure(atoms=[[0.0, 1.0], [0.0, 2.0]])

    def test_rejects_decreasing_sc_table(self):
        with self.assertRaises(StructureError):
            EnergyMeasure(sc=PiecewiseLinearFn.from_points([[0.0, 1.0], [1.0, 0.5]]))

    def test_sc_table_starts_at_zero(self):
        measure = EnergyMeasure(sc=PiecewiseLinearFn.from_points([[0.0, 2.0], [1.0, 3.0]]))
        self.assertEqual(measure.sc_cumulative(0.0), 0.0)
        self.assertEqual(measure.singular_total, 1.0)


class TestInitialData(unittest.TestCase):

    def test_build_derives_window_and_energy(self):
        data = ex41_data()
        self.assertEqual(data.window, (0.0, 2.0))
        self.assertEqual(data.total_energy, 6.0)
        self.assertTrue(data.is_piecewise_linear)

    def test_cusp_energy(self):
        data = cusp_data()
        self.assertAlmostEqual(data.total_energy, 8.0 / 3.0, places=14)
        self.assertFalse(data.is_piecewise_linear)
        self.assertAlmostEqual(float(CuspProfile()(-0.125)), 0.25)

    def test_sloped_tail_is_rejected(self):
        u = PiecewiseLinearFn.from_points([[0.0, 0.0], [1.0, 1.0]], right_slope=1.0)
        with self.assertRaises(StructureError):
            InitialData.build(u)

    def test_empty_window(self):
        with self.assertRaises(StructureError):
            InitialData(ex41_profile(), EnergyMeasure(), (1.0, 0.0))


class TestAlphaFunction(unittest.TestCase):

    def test_constant(self):
        alpha = AlphaFunction.constant(0.5)
        self.assertTrue(alpha.is_constant)
        self.assertEqual(alpha.value, 0.5)
        np.testing.assert_array_equal(alpha(np.array([-3.0, 7.0])), [0.5, 0.5])
        with self.assertRaises(ParameterError):
            AlphaFunction.constant(1.5)

    def test_negative_lipschitz(self):
        with self.assertRaises(ParameterError):
            AlphaFunction(lambda x: x, -1.0)

    def test_from_breakpoints(self):
        alpha = AlphaFunction.from_breakpoints([[0.0, 0.0], [2.0, 0.4]])
        self.assertAlmostEqual(alpha.lipschitz, 0.2)
        self.assertAlmostEqual(alpha(1.0), 0.2)
        self.assertEqual(alpha(5.0), 0.4)


class TestValidation(unittest.TestCase):

    def test_ex41_is_admissible(self):
        report = validate_initial_data(ex41_data(), builtin_alpha('alpha1'))
        self.assertTrue(report.passed, report.failures())
        self.assertEqual(report.total_energy, 6.0)
        for name in ('finite_energy', 'F_increasing', 'jumps_at_atoms', 'F_left_continuous',
                     'ac_matches_profile', 'mu_equals_nu', 'u_constant_outside_window', 'alpha_range',
                     'alpha_lipschitz'):
            self.assertTrue(report.check(name).passed, name)

    def test_cusp_is_admissible(self):
        report = validate_initial_data(cusp_data(), cusp_alpha())
        self.assertTrue(report.passed, report.failures())

    def test_alpha_out_of_range(self):
        alpha = AlphaFunction(lambda x: np.full_like(x, 1.5), 0.0)
        report = validate_initial_data(ex41_data(), alpha)
        self.assertFalse(report.passed)
        self.assertFalse(report.check('alpha_range').passed)

    def test_alpha_steeper_than_declared(self):
        alpha = AlphaFunction(lambda x: np.clip(x, 0.0, 1.0), 0.1)
        report = validate_initial_data(ex41_data(), alpha)
        self.assertFalse(report.check('alpha_lipschitz').passed)
        self.assertTrue(report.check('alpha_range').passed)

    def test_ac_part_must_match_profile(self):
        measure = EnergyMeasure(ac=PiecewiseLinearFn.from_points([[0.0, 0.0], [2.0, 1.0]]))
        data = InitialData(ex41_profile(), measure, (0.0, 2.0))
        report = validate_initial_data(data, AlphaFunction.constant(0.0))
        self.assertEqual([c.name for c in report.failures()], ['ac_matches_profile'])

    def test_ac_part_must_follow_the_slope_inside_segments(self):
        # same increments over [0, 1] and [1, 2] as u_x^2, but not linear in between
        ac = PiecewiseLinearFn.from_points([[0.0, 0.0], [0.5, 0.9], [1.0, 1.0], [1.5, 1.5], [2.0, 5.0]])
        data = InitialData(ex41_profile(), EnergyMeasure(ac=ac), (0.0, 2.0))
        report = validate_initial_data(data, AlphaFunction.constant(0.0))
        self.assertEqual([c.name for c in report.failures()], ['ac_matches_profile'])

    def test_nu_must_equal_mu(self):
        data = ex41_data()
        nu = EnergyMeasure(ac=data.measure.ac, atoms=[[0.0, 2.0]])
        other = InitialData(data.u, data.measure, data.window, nu=nu)
        report = validate_initial_data(other, builtin_alpha('alpha1'))
        self.assertEqual([c.name for c in report.failures()], ['mu_equals_nu'])
        self.assertAlmostEqual(report.check('mu_equals_nu').violation, 1.0)
        same = InitialData(data.u, data.measure, data.window, nu=EnergyMeasure(ac=data.measure.ac,
                                                                               atoms=[[0.0, 1.0]]))
        self.assertTrue(validate_initial_data(same, builtin_alpha('alpha1')).passed)

    def test_atoms_must_be_right_of_F(self):

        class RightContinuous(EnergyMeasure):
            def cumulative(self, x):
                _, right = super(RightContinuous, self).cumulative(x)
                return right, right

        data = ex41_data()
        measure = RightContinuous(ac=data.measure.ac, atoms=[[0.0, 1.0]])
        report = validate_initial_data(InitialData(data.u, measure, data.window), builtin_alpha('alpha1'))
        self.assertFalse(report.check('F_left_continuous').passed)
        self.assertTrue(validate_initial_data(data, builtin_alpha('alpha1')).check('F_left_continuous').passed)


class TestBesovEstimate(unittest.TestCase):

    def setUp(self):
        self.spacing = 2.5e-5
        x = -1.5 + (np.arange(120000) + 0.5) * self.spacing
        self.ux = CuspProfile().derivative(x)

    def test_cusp_derivative_is_stable_at_one_sixth(self):
        coarse = besov_seminorm_estimate(self.ux, 1.0 / 6.0, np.geomspace(4e-4, 2.0, 32), self.spacing)
        fine = besov_seminorm_estimate(self.ux, 1.0 / 6.0, np.geomspace(4e-4, 2.0, 64), self.spacing)
        self.assertTrue(np.isfinite(coarse))
        self.assertGreater(coarse, 0.0)
        self.assertLess(abs(fine - coarse), 0.05 * coarse)

    def test_cusp_derivative_grows_at_one_half(self):
        # u_x ~ |x|^(-1/3) makes h^(-1/2) ||u_x(. + h) - u_x||_2 grow like h^(-1/3)
        coarse = besov_seminorm_estimate(self.ux, 0.5, np.geomspace(0.5, 2.0, 16), self.spacing)
        fine = besov_seminorm_estimate(self.ux, 0.5, np.geomspace(1e-4, 2.0, 64), self.spacing)
        self.assertGreater(fine, 10.0 * coarse)

    def test_weight_uses_the_applied_shift(self):
        spacing = 0.1
        f = np.arange(100) * spacing
        value = besov_seminorm_estimate(f, 0.5, [0.44], spacing)
        expected = 0.4 ** -0.5 * np.sqrt(96 * 0.4 ** 2 * spacing)
        self.assertAlmostEqual(value, expected, places=12)

    def test_invalid_shifts(self):
        with self.assertRaises(ParameterError):
            besov_seminorm_estimate(self.ux, 0.5, [1e-5], self.spacing)
        with self.assertRaises(ParameterError):
            besov_seminorm_estimate(self.ux, 0.0, [0.1], self.spacing)
        with self.assertRaises(ParameterError):
            besov_seminorm_estimate(self.ux, 0.5, [2.5], self.spacing)
        with self.assertRaises(ParameterError):
            besov_seminorm_estimate(self.ux, 0.5, [-0.1, 0.5], self.spacing)
        with self.assertRaises(ParameterError):
            besov_seminorm_estimate(np.zeros(10), 0.5, [1.5], 0.1)


if __name__ == '__main__':
    unittest.main()

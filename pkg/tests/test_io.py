#!/usr/bin/env python
import json
import math
import os
import sys
import tempfile
import unittest

import pandas as pd

dir_name = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.join(dir_name, '..'))
from libs.analysis import analyze_projection
from libs.catalog import ex41_data
from libs.constants import LOGLOG_DAT, REPORT_COLUMNS, REPORT_CSV, REPORT_JSON
from libs.data_io import AlphaReader, DataFormatError, InitialDataReader, load_alpha, load_initial_data
from libs.evolution import solve
from libs.harness import eoc_table
from libs.lagrangian import to_lagrangian_grid
from libs.projection import project
from libs.report_io import ReportWriter
from libs.solution_io import AnalysisWriter, LagrangianWriter, ProjectionWriter, SolutionWriter

DATA_DIR = os.path.join(dir_name, '..', 'data')


def data_file(name):
    return os.path.join(DATA_DIR, name)


class TempDirTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write_json(self, name, content):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            f.write(content if isinstance(content, str) else json.dumps(content))
        return path


class TestInitialDataReader(TempDirTestCase):

    def test_example_files(self):
        data = InitialDataReader(data_file('ex41.json')).get_data()
        self.assertAlmostEqual(data.total_energy, 6.0)
        self.assertAlmostEqual(float(data.u(1.0)), 2.0)
        cusp = load_initial_data(data_file('cusp.json'))
        self.assertEqual(tuple(cusp.window), (-1.0, 1.0))
        peakon = load_initial_data(data_file('peakon_sc.json'))
        self.assertAlmostEqual(peakon.total_energy, 2.75, places=9)

    def test_builtin_profile_carries_its_atom(self):
        path = self.write_json('b.json', {'u': {'builtin': 'ex41'}})
        self.assertAlmostEqual(load_initial_data(path).total_energy, 6.0)
        path = self.write_json('c.json', {'u': {'builtin': 'ex41'}, 'atoms': []})
        self.assertAlmostEqual(load_initial_data(path).total_energy, 5.0)

    def test_builtin_names(self):
        self.assertAlmostEqual(load_initial_data('ex41').total_energy, 6.0)

    def test_format_errors(self):
        bad = [
            {'atoms': [[0.0, 1.0]]},
            {'u': {'breakpoints': [[0.0, 1.0], [1.0, 0.0]], 'right': 0.5}},
            {'u': {'breakpoints': []}},
            {'u': {'builtin': 'ex99'}},
            {'u': {'values': [1, 2]}},
            {'u': {'breakpoints': [[0.0, 'a']]}},
            {'u': {'breakpoints': [[0.0, 1.0], [1.0, 0.0]]}, 'window': [0.0]},
        ]
        for i, content in enumerate(bad):
            path = self.write_json('bad{0}.json'.format(i), content)
            with self.assertRaises(DataFormatError, msg=str(content)):
                InitialDataReader(path)
        with self.assertRaises(DataFormatError):
            InitialDataReader(self.write_json('broken.json', '{"u": '))
        with self.assertRaises(DataFormatError):
            load_initial_data(os.path.join(self.tmp.name, 'missing.json'))


class TestAlphaReader(TempDirTestCase):

    def test_specs(self):
        self.assertEqual(load_alpha('const:0.25').value, 0.25)
        self.assertEqual(load_alpha('0.5').value, 0.5)
        self.assertEqual(load_alpha(1).value, 1.0)
        self.assertAlmostEqual(load_alpha('alpha1')(11.0 / 4.0), 0.75)
        self.assertEqual(load_alpha(data_file('alpha_half.json')).value, 0.5)
        ramp = load_alpha(data_file('alpha_ramp.json'))
        self.assertAlmostEqual(ramp(2.0), 0.4)
        self.assertEqual(ramp.lipschitz, 0.2)

    def test_errors(self):
        with self.assertRaises(DataFormatError):
            load_alpha('alpha9')
        for content in ({'breakpoints': [[0.0, 0.5], [1.0, 1.5]]}, {'builtin': 'alpha9'}, [0.5], {'other': 1}):
            with self.assertRaises(DataFormatError, msg=str(content)):
                AlphaReader.parse(content)


class TestReportIO(TempDirTestCase):

    def setUp(self):
        super(TestReportIO, self).setUp()
        self.report = eoc_table([(0.25, 0.5), (1.0 / 16.0, 0.25), (1.0 / 64.0, 0.125)])
        for row in self.report.rows:
            row.wall_ms = 12.5

    def test_write_and_read(self):
        paths = ReportWriter(self.tmp.name).save(self.report)
        self.assertEqual([os.path.basename(p) for p in paths], [REPORT_CSV, REPORT_JSON, LOGLOG_DAT])
        frame = pd.read_csv(paths[0])
        self.assertEqual(tuple(frame.columns), REPORT_COLUMNS)
        self.assertEqual(list(frame['k']), [1, 2, 3])
        self.assertTrue(math.isnan(frame['eoc'][0]))
        self.assertAlmostEqual(frame['eoc'][1], 0.5)
        self.assertEqual(list(frame['wall_ms']), [12.5] * 3)
        self.assertAlmostEqual(frame['dx'][2], 1.0 / 64.0)
        self.assertAlmostEqual(frame['err'][2], 0.125)
        with open(paths[1]) as f:
            content = json.load(f)
        self.assertIsNone(content['rows'][0]['eoc'])
        self.assertAlmostEqual(content['slope'], 0.5)
        with open(paths[2]) as f:
            lines = [line for line in f if not line.startswith('#')]
        self.assertEqual(len(lines), 3)

    def test_without_timings(self):
        paths = ReportWriter(self.tmp.name, timings=False).save(self.report)
        frame = pd.read_csv(paths[0])
        self.assertTrue(frame['wall_ms'].isna().all())
        with open(paths[1]) as f:
            self.assertIsNone(json.load(f)['rows'][1]['wall_ms'])


class TestSolutionIO(TempDirTestCase):

    def setUp(self):
        super(TestSolutionIO, self).setUp()
        self.proj = project(ex41_data(), 0.25)
        self.grid = to_lagrangian_grid(self.proj)

    def test_projection(self):
        csv, meta = ProjectionWriter(self.proj, os.path.join(self.tmp.name, 'proj.csv')).save()
        self.assertTrue(csv.endswith('proj.csv'))
        self.assertTrue(meta.endswith('proj.json'))
        frame = pd.read_csv(csv)
        self.assertEqual(len(frame), self.proj.j_max - self.proj.j_min)
        self.assertEqual(list(frame['Du'])[:2], [-1.0, -1.0])

    def test_lagrangian(self):
        csv, meta = LagrangianWriter(self.grid, os.path.join(self.tmp.name, 'grid')).save()
        frame = pd.read_csv(csv)
        self.assertEqual(len(frame), self.grid.xi.size)
        self.assertTrue(math.isnan(frame['tau'].iloc[-1]))
        with open(meta) as f:
            self.assertEqual(json.load(f)['nodes'], self.grid.nodes)

    def test_solution(self):
        trajectory = solve(self.grid, load_alpha('alpha1'), 1.5)
        solution = trajectory.eulerian_at(1.5)
        csv, meta = SolutionWriter(solution, os.path.join(self.tmp.name, 'sol')).save()
        frame = pd.read_csv(csv)
        self.assertEqual(list(frame.columns), ['x', 'u', 'F', 'F_right'])
        self.assertEqual(len(frame), len(solution.breakpoints()))
        with open(meta) as f:
            content = json.load(f)
        self.assertEqual(content['t'], 1.5)
        self.assertAlmostEqual(content['energy'], 3.0)

    def test_analysis(self):
        pair, lengths = analyze_projection(ex41_data(), 0.25)
        csv, meta = AnalysisWriter(pair, os.path.join(self.tmp.name, 'pair'), lengths=lengths, samples=50).save()
        frame = pd.read_csv(csv)
        self.assertGreaterEqual(len(frame), 50)
        self.assertTrue((frame['phi'].diff().dropna() >= -1e-12).all())
        with open(meta) as f:
            content = json.load(f)
        self.assertTrue(content['lengths_passed'])
        self.assertEqual(len(content['cells']), len(pair.cells))


if __name__ == '__main__':
    unittest.main()

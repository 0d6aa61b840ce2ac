from contextlib import redirect_stderr, redirect_stdout
import io
import json
import math
import os
import tempfile
import unittest

from quasirecon.cli import EXIT_FAILURE, EXIT_NO_CROSSING, EXIT_OK, main


SMALL_SCENARIO = """
model.dim = 16
field.kind = vacuum
grid.re_min = -1
grid.re_max = 1
grid.im_min = -1
grid.im_max = 1
grid.n_re = 3
grid.n_im = 3
"""


class CommandLineTestCase(unittest.TestCase):
    def setUp(self):
        self._directory = tempfile.TemporaryDirectory()
        self.directory = self._directory.name

    def tearDown(self):
        self._directory.cleanup()

    def path(self, name):
        return os.path.join(self.directory, name)

    def write_scenario(self, text, name='scenario.cfg'):
        with open(self.path(name), 'w') as f:
            f.write(text)
        return self.path(name)

    def run_main(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()

    @staticmethod
    def read(path):
        with open(path, newline='') as f:
            return f.read()


class TestFigure1(CommandLineTestCase):
    def test_curves(self):
        out = self.path('figure1.csv')
        code, _, _ = self.run_main('figure1', '--out', out)
        self.assertEqual(code, EXIT_OK)
        lines = self.read(out).split('\n')
        self.assertEqual(lines[0], 'chi_t,g_gamma005,g_gamma01')
        self.assertEqual(lines[1], '0,0,0')
        self.assertEqual(len([line for line in lines[1:] if line]),
                         int(round(4 * math.pi / 0.01)) + 1)
        self.assertNotIn('\r', self.read(out))

    def test_deterministic(self):
        first, second = self.path('a.csv'), self.path('b.csv')
        self.run_main('figure1', '--out', first)
        self.run_main('curves', '--out', second)
        self.assertEqual(self.read(first), self.read(second))


class TestSchedule(CommandLineTestCase):
    def test_ideal_cavity(self):
        scenario = self.write_scenario('model.gamma = 0\n')
        code, stdout, _ = self.run_main('schedule', '--config', scenario)
        self.assertEqual(code, EXIT_OK)
        record = json.loads(stdout)
        self.assertAlmostEqual(record['t_star'], math.pi / 2, places=10)
        self.assertAlmostEqual(record['s'], 0.0, places=10)
        self.assertEqual(record['convention'], 'normalized')

    def test_paper_convention_name(self):
        scenario = self.write_scenario('model.gamma = 0\n')
        code, stdout, _ = self.run_main('schedule', '--config', scenario,
                                        '--convention', 'paper')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(stdout)['convention'], 'half')

    def test_no_crossing(self):
        scenario = self.write_scenario('model.gamma = 5\n')
        code, _, stderr = self.run_main('schedule', '--config', scenario)
        self.assertEqual(code, EXIT_NO_CROSSING)
        self.assertIn('horizon', stderr)


class TestReconstruct(CommandLineTestCase):
    def test_table(self):
        scenario = self.write_scenario(SMALL_SCENARIO)
        out = self.path('grid.csv')
        code, _, _ = self.run_main('reconstruct', '--config', scenario, '--out', out,
                                   '--convention', 'half', '--workers', '2')
        self.assertEqual(code, EXIT_OK)
        lines = self.read(out).rstrip('\n').split('\n')
        self.assertEqual(lines[0], 're_alpha,im_alpha,sigma_x,f_hat,f_direct,abs_error')
        rows = [line for line in lines[1:] if not line.startswith('#')]
        footer = dict(line[2:].split('=', 1) for line in lines if line.startswith('# '))
        self.assertEqual(len(rows), 9)
        self.assertEqual(rows[0].split(',')[:2], ['-1', '-1'])
        self.assertEqual(footer['convention'], 'half')
        self.assertEqual(footer['engine'], 'analytic')
        self.assertLessEqual(float(footer['max_abs_error']), 1e-5)

    def test_bad_config(self):
        scenario = self.write_scenario('model.gama = 0.1\n')
        code, _, stderr = self.run_main('reconstruct', '--config', scenario)
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('unknown key', stderr)

    def test_truncated_state_rejected(self):
        scenario = self.write_scenario('model.dim = 4\nfield.re = 2.0\nfield.im = 0\n')
        code, _, stderr = self.run_main('reconstruct', '--config', scenario,
                                        '--out', self.path('x.csv'))
        self.assertEqual(code, EXIT_FAILURE)
        self.assertIn('tail mass', stderr)


class TestQuasiprobability(CommandLineTestCase):
    def test_husimi_of_vacuum(self):
        scenario = self.write_scenario(SMALL_SCENARIO)
        out = self.path('husimi.csv')
        code, _, _ = self.run_main('qpd', '--config', scenario, '--s', '-1', '--out', out)
        self.assertEqual(code, EXIT_OK)
        lines = self.read(out).split('\n')
        self.assertEqual(lines[0], 're_alpha,im_alpha,f_direct')
        center = lines[5].split(',')
        self.assertEqual(center[:2], ['0', '0'])
        self.assertAlmostEqual(float(center[2]), 1 / math.pi, places=14)


class TestUsageErrors(CommandLineTestCase):
    def assert_usage_failure(self, *argv):
        with self.assertRaises(SystemExit) as context:
            self.run_main(*argv)
        self.assertEqual(context.exception.code, EXIT_FAILURE)
        self.assertNotEqual(context.exception.code, EXIT_NO_CROSSING)

    def test_unknown_flag(self):
        self.assert_usage_failure('schedule', '--bogus')

    def test_unknown_command(self):
        self.assert_usage_failure('figure2')

    def test_bad_choice(self):
        self.assert_usage_failure('schedule', '--convention', 'glauber')

import math
import unittest

from quasirecon import ModelParams, PhaseGrid, coherent_state, find_measurement_time, \
    params, qpd_direct, reconstruct_grid, schedule, vacuum


class TestExamples(unittest.TestCase):
    def setUp(self):
        self.params = ModelParams(chi=1.0, gamma=0.05, Gamma=0.1, theta=math.pi / 5,
                                  dim=32)

    def test_lossy_cavity_schedule(self):
        result = find_measurement_time(self.params)
        self.assertGreater(result.s, -1)
        self.assertLess(result.s, 0)

    def test_coherent_state_reconstruction(self):
        field = coherent_state(complex(0.5, 0.3), self.params.dim)
        records = reconstruct_grid(self.params, field, PhaseGrid(),
                                   find_measurement_time(self.params))
        self.assertLessEqual(max(record.abs_error for record in records), 1e-5)

    def test_vacuum_at_origin(self):
        rho = vacuum(20)
        self.assertAlmostEqual(qpd_direct(rho, 0, -1), 1 / math.pi, places=12)
        self.assertAlmostEqual(qpd_direct(rho, 0, 0), 2 / math.pi, places=12)
        self.assertAlmostEqual(qpd_direct(rho, 0, 0, 'half'), 1 / math.pi, places=12)

    def test_short_aliases(self):
        self.assertIs(params, ModelParams)
        short = schedule(params(gamma=0.05, Gamma=0.1, theta=math.pi / 5, dim=32))
        self.assertEqual(short, find_measurement_time(self.params))

import math
import unittest

import numpy as np
from numpy.testing import assert_allclose
from scipy.integrate import quad

from quasirecon.analytic import evolve_closed, jump_function, loss_integral, \
    photon_loss_series, rho1, rho1_reduced, rho2, rho2_series, sigma_x_closed, \
    sigma_x_double_sum, zeta
from quasirecon.exceptions import InvalidDimensionError, InvalidParameterError
from quasirecon.fock import JointDensityMatrix, coherent_state, displace_state, \
    hermitian_min_eigenvalue, ladder_ops, vacuum
from quasirecon.oracle import evolve_rk4, sigma_x_trace
from quasirecon.params import IntegratorConfig, ModelParams
from quasirecon.protocol import prepare_initial


class TestZeta(unittest.TestCase):
    def setUp(self):
        self.params = ModelParams(chi=1.0, gamma=0.05)

    def test_against_quadrature(self):
        gamma, chi = self.params.gamma, self.params.chi
        for t in (0.3, 1.0, 2.7):
            real, _ = quad(lambda s: math.exp(-2 * gamma * s) * math.cos(2 * chi * s),
                           0, t)
            imag, _ = quad(lambda s: math.exp(-2 * gamma * s) * math.sin(2 * chi * s),
                           0, t)
            coefficients = zeta(self.params, t)
            self.assertAlmostEqual(coefficients.C, real, places=12)
            self.assertAlmostEqual(coefficients.S, imag, places=12)

    def test_vanishes_at_zero(self):
        self.assertEqual(zeta(self.params, 0.0).zeta, 0)

    def test_loss_integral_limits(self):
        self.assertEqual(loss_integral(ModelParams(gamma=0.0), 0.7), 0.7)
        self.assertAlmostEqual(loss_integral(self.params, 0.7),
                               (1 - math.exp(-0.07)) / 0.1, places=14)

    def test_negative_time_rejected(self):
        with self.assertRaises(InvalidParameterError):
            zeta(self.params, -0.1)


class TestPhotonLossSeries(unittest.TestCase):
    def test_zero_weight_is_identity(self):
        rho = coherent_state(0.5, 6).entries
        assert_allclose(photon_loss_series(rho, 0), rho)

    def test_fock_state_binomial(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[2, 2] = 1
        # |2><2| -> |2><2| + 2w |1><1| + w^2 |0><0|
        result = photon_loss_series(rho, 0.3)
        assert_allclose(result.diagonal().real, [0.09, 0.6, 1.0, 0.0], atol=1e-15)


class TestClosedForm(unittest.TestCase):
    def setUp(self):
        self.params = ModelParams(chi=1.0, gamma=0.05, Gamma=0.1, theta=math.pi / 5,
                                  dim=12)
        self.field = coherent_state(0.8, 12)

    def test_oracle_equivalence(self):
        initial = prepare_initial(self.params, self.field, 0)
        config = IntegratorConfig(dt=2e-4)
        for t in (0.5, 1.0):
            closed = evolve_closed(self.params, self.field, t)
            oracle = evolve_rk4(initial, self.params, t, config)
            self.assertLess(float(np.max(np.abs(closed.entries - oracle.entries))), 1e-6)

    def test_initial_condition(self):
        closed = evolve_closed(self.params, self.field, 0.0)
        initial = prepare_initial(self.params, self.field, 0)
        assert_allclose(closed.entries, initial.entries, atol=1e-14)

    def test_physical(self):
        closed = evolve_closed(self.params, self.field, 1.3)
        self.assertIsInstance(closed, JointDensityMatrix)
        self.assertAlmostEqual(closed.trace().real, 1.0, places=10)
        self.assertGreater(hermitian_min_eigenvalue(closed), -1e-6)

    def test_jump_branch_vanishes_without_atomic_decay(self):
        params = self.params.with_updates(Gamma=0.0)
        self.assertEqual(float(np.max(np.abs(rho2(params, self.field, 1.0).entries))), 0)

    def test_jump_branch_feeds_ground_block(self):
        jumped = rho2(self.params, self.field, 1.0)
        self.assertEqual(float(np.max(np.abs(jumped.block(0, 0)))), 0)
        self.assertEqual(float(np.max(np.abs(jumped.block(0, 1)))), 0)
        self.assertGreater(np.trace(jumped.block(1, 1)).real, 0)

    def test_jump_function_diagonal(self):
        values = jump_function(self.params, 1.0)
        expected = (1 - math.exp(-0.2)) / 0.2
        assert_allclose(values.diagonal(), expected, rtol=1e-14)

    def test_series_matches_spectral_form(self):
        params = self.params.with_updates(dim=6)
        for field in (vacuum(6), coherent_state(0.3, 6)):
            assert_allclose(rho2_series(params, field, 0.5).entries,
                            rho2(params, field, 0.5).entries, atol=1e-9)

    def test_reduction_to_lossy_cavity(self):
        params = self.params.with_updates(Gamma=0.0, theta=math.pi / 4)
        for t in (0.4, 1.7):
            assert_allclose(rho1(params, self.field, t).entries,
                            rho1_reduced(params, self.field, t).entries, atol=1e-10)

    def test_field_dimension_mismatch(self):
        with self.assertRaises(InvalidDimensionError):
            rho1(self.params, vacuum(5), 1.0)

    def test_photon_number_decay(self):
        _, _, number = ladder_ops(12)
        initial = np.trace(self.field.entries @ number.entries).real
        closed = evolve_closed(self.params.with_updates(theta=0.0), self.field, 2.0)
        field = closed.block(0, 0) + closed.block(1, 1)
        self.assertAlmostEqual(np.trace(field @ number.entries).real,
                               initial * math.exp(-0.2), places=12)

    def test_vanishing_loss_is_continuous(self):
        lossless = self.params.with_updates(gamma=0.0)
        nearly = self.params.with_updates(gamma=1e-9)
        for t in (0.5, math.pi / 2, 3.0):
            difference = evolve_closed(nearly, self.field, t).entries \
                - evolve_closed(lossless, self.field, t).entries
            self.assertLessEqual(float(np.max(np.abs(difference))), 1e-7)


class TestOracleSweep(unittest.TestCase):
    def setUp(self):
        self.field = coherent_state(complex(0.4, -0.2), 8)
        self.config = IntegratorConfig(dt=1e-3)

    def test_closed_form_matches_integrator(self):
        for gamma in (0.0, 0.05, 0.2):
            for big_gamma in (0.0, 0.1, 0.5):
                for theta in (0.0, math.pi / 5, math.pi / 4):
                    params = ModelParams(chi=1.0, gamma=gamma, Gamma=big_gamma,
                                         theta=theta, dim=8)
                    with self.subTest(gamma=gamma, Gamma=big_gamma, theta=theta):
                        initial = prepare_initial(params, self.field, 0)
                        oracle = evolve_rk4(initial, params, 1.0, self.config)
                        closed = evolve_closed(params, self.field, 1.0)
                        worst = float(np.max(np.abs(closed.entries - oracle.entries)))
                        self.assertLessEqual(worst, 1e-6)


class TestPolarization(unittest.TestCase):
    def setUp(self):
        self.params = ModelParams(chi=1.0, gamma=0.05, Gamma=0.1, theta=math.pi / 5,
                                  dim=16)
        self.field = coherent_state(complex(0.5, 0.3), 16)
        self.alpha = complex(0.3, -0.2)

    def test_matches_trace_of_evolved_state(self):
        for t in (0.7, 1.6):
            displaced = displace_state(self.field, self.alpha)
            evolved = evolve_closed(self.params, displaced, t)
            self.assertAlmostEqual(sigma_x_closed(self.params, self.field, self.alpha, t),
                                   sigma_x_trace(evolved), places=12)

    def test_double_sum_resummation(self):
        for t in (0.7, 1.6):
            self.assertAlmostEqual(
                sigma_x_double_sum(self.params, self.field, self.alpha, t),
                sigma_x_closed(self.params, self.field, self.alpha, t),
                places=12,
            )

    def test_initial_value(self):
        self.assertAlmostEqual(sigma_x_closed(self.params, self.field, self.alpha, 0.0),
                               0.5 * math.sin(2 * self.params.theta), places=12)

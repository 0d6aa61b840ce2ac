"""Acceptance suite behind ``quasirecon verify``.

Every check returns a CheckResult instead of raising, so one failing check
does not hide the others. Library errors raised inside a check count as a
failure of that check.
"""
from dataclasses import dataclass
from functools import cached_property
import logging
import math
import warnings

import numpy as np

from quasirecon.analytic import evolve_closed, rho1, rho1_reduced, rho2
from quasirecon.config import ScenarioConfig
from quasirecon.exceptions import QuasireconError, TruncationWarning
from quasirecon.fock import coherent_state, hermitian_min_eigenvalue, vacuum
from quasirecon.oracle import Integrator
from quasirecon.protocol import CrossingVariant, Engine, crossing_function, \
    find_measurement_time, prepare_initial, reconstruct_grid, reconstruct_point, \
    small_theta_estimate
from quasirecon.quasiprobability import PhaseGrid, grid_integral, qpd_grid, wigner_parity


logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-6
TRACE_TOLERANCE = 1e-7
HERMITICITY_TOLERANCE = 1e-9
EIGENVALUE_FLOOR = -1e-6
NORMALIZATION_TOLERANCE = 0.01
NORMALIZATION_DIM = 80
NORMALIZATION_HALF_WIDTH = 4.0
NORMALIZATION_POINTS = 81
NORMALIZATION_BETA = 0.8
HUSIMI_FLOOR = -1e-12
WIGNER_LIMIT_GAMMA = 1e-9
WIGNER_LIMIT_S = 1e-6
WIGNER_LIMIT_TOLERANCE = 1e-5
GAMMA_SWEEP = (0.0, 0.1, 0.5)
GAMMA_CANCELLATION_TOLERANCE = 1e-6
REDUCTION_TOLERANCE = 1e-10
RECONSTRUCTION_TOLERANCE = {Engine.ANALYTIC: 1e-5, Engine.ORACLE: 1e-3}
BRACKET_TOLERANCE = 1e-12
CURVE_RATES = (0.05, 0.1)
SMALL_THETA = 0.01
SMALL_THETA_TOLERANCE = 1e-4
TRAJECTORY_SAMPLES = 10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


class AcceptanceSuite:
    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.params = config.model

    @cached_property
    def field(self):
        return self.config.field.build(self.params.dim)

    @cached_property
    def schedule(self):
        return find_measurement_time(self.params, convention=self.config.convention)

    @cached_property
    def trajectory(self):
        """One RK4 run to t*, sampled at TRAJECTORY_SAMPLES evenly spaced times."""
        t_star = self.schedule.t_star
        times = tuple(t_star * k / TRAJECTORY_SAMPLES
                      for k in range(1, TRAJECTORY_SAMPLES))
        initial = prepare_initial(self.params, self.field, 0)
        integrator = Integrator(self.params, self.config.integrator)
        result = integrator.run(initial, t_star, times)
        return initial, times + (t_star,), result.samples + (result.state,), result

    def check_state_construction(self):
        field = self.field
        return True, f'{self.config.field.kind} field at N={field.dim}, ' \
                     f'tail mass {field.tail_mass:.2e}'

    def check_oracle_equivalence(self):
        _, times, samples, _ = self.trajectory
        worst = 0.0
        for t, sample in zip(times, samples):
            closed = evolve_closed(self.params, self.field, t)
            worst = max(worst, float(np.max(np.abs(closed.entries - sample.entries))))
        return worst <= ORACLE_TOLERANCE, f'max |closed - RK4| = {worst:.3e}'

    def check_trajectory_physicality(self):
        _, _, samples, result = self.trajectory
        smallest = min(hermitian_min_eigenvalue(sample) for sample in samples)
        passed = result.trace_drift <= TRACE_TOLERANCE \
            and result.hermiticity_drift <= HERMITICITY_TOLERANCE \
            and smallest >= EIGENVALUE_FLOOR
        return passed, f'trace drift {result.trace_drift:.2e}, hermiticity ' \
                       f'{result.hermiticity_drift:.2e}, min eigenvalue {smallest:.2e}'

    def check_closed_form_physicality(self):
        closed = evolve_closed(self.params, self.field, self.schedule.t_star)
        drift = abs(closed.trace() - 1)
        smallest = hermitian_min_eigenvalue(closed)
        passed = drift <= TRACE_TOLERANCE and smallest >= EIGENVALUE_FLOOR
        return passed, f'trace drift {drift:.2e}, min eigenvalue {smallest:.2e}'

    def check_normalization(self):
        dim = max(self.params.dim, NORMALIZATION_DIM)
        grid = PhaseGrid.square(NORMALIZATION_HALF_WIDTH, NORMALIZATION_POINTS)
        convention = self.config.convention
        expected = convention.normalization / 2
        passed = True
        details = []
        for name, field in (('vacuum', vacuum(dim)),
                            ('coherent', coherent_state(NORMALIZATION_BETA, dim))):
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', TruncationWarning)
                wigner = qpd_grid(field, grid, 0.0, convention, self.config.workers)
                husimi = qpd_grid(field, grid, -1.0, convention, self.config.workers)
            integral = grid_integral(wigner, grid)
            smallest = float(husimi.min())
            within = abs(integral - expected) <= NORMALIZATION_TOLERANCE * expected
            passed = passed and within and smallest >= HUSIMI_FLOOR
            details.append(f'{name}: Wigner integral {integral:.6f}, '
                           f'min Husimi {smallest:.2e}')
        return passed, '; '.join(details) + f' (expected {expected})'

    def check_wigner_limit(self):
        params = self.params.with_updates(gamma=WIGNER_LIMIT_GAMMA)
        convention = self.config.convention
        schedule = find_measurement_time(params, convention=convention)
        worst = 0.0
        for _, _, alpha in PhaseGrid.square(1.0, 5).points():
            record = reconstruct_point(params, self.field, alpha, schedule)
            parity = wigner_parity(self.field, alpha) * convention.normalization / 2
            worst = max(worst, abs(record.f_hat - parity))
        passed = abs(schedule.s) <= WIGNER_LIMIT_S and worst <= WIGNER_LIMIT_TOLERANCE
        return passed, f's = {schedule.s:.2e}, max |F_hat - W_parity| = {worst:.3e}'

    def check_gamma_cancellation(self):
        estimates = []
        for big_gamma in GAMMA_SWEEP:
            params = self.params.with_updates(Gamma=big_gamma)
            estimates.append([
                reconstruct_point(params, self.field, alpha, self.schedule).f_hat
                for alpha in (0j, self.config.field.center)
            ])
        spread = float(np.max(np.ptp(np.array(estimates), axis=0)))
        return spread <= GAMMA_CANCELLATION_TOLERANCE, \
            f'F_hat spread over Gamma {spread:.3e}'

    def check_reduction(self):
        params = self.params.with_updates(Gamma=0.0, theta=math.pi / 4)
        t = self.schedule.t_star
        general = rho1(params, self.field, t).entries
        special = rho1_reduced(params, self.field, t).entries
        difference = float(np.max(np.abs(general - special)))
        jump = float(np.max(np.abs(rho2(params, self.field, t).entries)))
        passed = difference <= REDUCTION_TOLERANCE and jump == 0
        return passed, f'max |rho_1 - reduced| = {difference:.3e}, ' \
                       f'max |rho_2| = {jump:.1e}'

    def check_reconstruction_identity(self):
        engine = self.config.engine
        records = reconstruct_grid(self.params, self.field, self.config.grid,
                                   self.schedule, engine, self.config.integrator,
                                   self.config.workers)
        worst = max(record.abs_error for record in records)
        return worst <= RECONSTRUCTION_TOLERANCE[engine], \
            f'{engine.value} engine, max |F_hat - F_direct| = {worst:.3e}'

    def check_curve_bracketing(self):
        details = []
        passed = True
        chi_t = np.arange(0, 4 * math.pi + 1e-9, 0.01)
        for gamma in CURVE_RATES:
            params = self.params.with_updates(chi=1.0, gamma=gamma)
            curve = crossing_function(params, chi_t, CrossingVariant.SINGLE_ANGLE)
            low, high = crossing_function(params, np.array([math.pi, 1.5 * math.pi]),
                                          CrossingVariant.SINGLE_ANGLE)
            expected_low = gamma * (1 + math.exp(-2 * gamma * math.pi))
            expected_high = gamma - math.exp(-3 * gamma * math.pi)
            window = curve[(chi_t > math.pi) & (chi_t < 1.5 * math.pi)]
            changes = int(np.sum(np.diff(np.sign(window)) != 0))
            passed = passed and curve[0] == 0 and changes == 1 \
                and abs(low - expected_low) <= BRACKET_TOLERANCE \
                and abs(high - expected_high) <= BRACKET_TOLERANCE
            details.append(f'gamma={gamma}: {changes} sign change(s)')
        return passed, ', '.join(details)

    def check_small_theta(self):
        params = self.params.with_updates(theta=SMALL_THETA)
        estimate = small_theta_estimate(params, self.field, 0j, self.schedule)
        return estimate.relative_gap <= SMALL_THETA_TOLERANCE, \
            f'relative gap {estimate.relative_gap:.3e}'

    CHECKS = (
        ('state_construction', check_state_construction),
        ('oracle_equivalence', check_oracle_equivalence),
        ('trajectory_physicality', check_trajectory_physicality),
        ('closed_form_physicality', check_closed_form_physicality),
        ('normalization', check_normalization),
        ('wigner_limit', check_wigner_limit),
        ('gamma_cancellation', check_gamma_cancellation),
        ('reduction', check_reduction),
        ('reconstruction_identity', check_reconstruction_identity),
        ('curve_bracketing', check_curve_bracketing),
        ('small_theta', check_small_theta),
    )

    def run(self, names=None):
        results = []
        for name, check in self.CHECKS:
            if names is not None and name not in names:
                continue
            try:
                passed, detail = check(self)
            except QuasireconError as e:
                passed, detail = False, f'{e.__class__.__name__}: {e}'
            logger.info('%s: %s (%s)', name, 'pass' if passed else 'FAIL', detail)
            results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
        return results


def run_checks(config: ScenarioConfig = None, names=None):
    return AcceptanceSuite(config or ScenarioConfig()).run(names)


def format_report(results) -> str:
    width = max(len(result.name) for result in results)
    lines = [f'{result.name:<{width}}  {"PASS" if result.passed else "FAIL"}  '
             f'{result.detail}'
             for result in results]
    failed = [result.name for result in results if not result.passed]
    lines.append(f'{len(results) - len(failed)}/{len(results)} checks passed'
                 + (f'; failed: {", ".join(failed)}' if failed else ''))
    return '\n'.join(lines)

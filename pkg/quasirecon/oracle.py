"""Brute-force integration of the dispersive master equation with both decays.

    d rho/dt = -i chi [n sigma_z, rho] + 2 gamma a rho a^dag - gamma (n rho + rho n)
               + 2 Gamma sigma_- rho sigma_+
               - Gamma (sigma_+ sigma_- rho + rho sigma_+ sigma_-)

All operators act on the atom-major joint space. This module is the reference
against which the closed-form evolution is checked, so it stays deliberately
plain: fixed-step classic RK4, no adaptive control, no hidden renormalization.
"""
from dataclasses import dataclass
import logging
import math
from typing import Tuple

import numpy as np

from quasirecon.exceptions import InvalidDimensionError, InvalidParameterError, \
    TraceDriftError
from quasirecon.fock import SIGMA_MINUS, SIGMA_X, JointDensityMatrix, \
    expectation, hermiticity_residual, identity, ladder_ops, tensor_atom_field
from quasirecon.params import IntegratorConfig, ModelParams


logger = logging.getLogger(__name__)


class Liouvillian:
    def __init__(self, params: ModelParams):
        self._params = params
        dim = params.dim
        photons = np.arange(dim, dtype=float)
        annihilation, _, _ = ladder_ops(dim)

        self._dispersive = np.kron([1.0, -1.0], photons)
        self._number = np.kron([1.0, 1.0], photons)
        self._excited = np.kron([1.0, 0.0], np.ones(dim))
        self._annihilation = np.kron(np.eye(2), annihilation.entries)
        self._lowering = tensor_atom_field(SIGMA_MINUS, identity(dim)).entries

    @property
    def params(self) -> ModelParams:
        return self._params

    @staticmethod
    def _anticommutator(diagonal, rho):
        return (diagonal[:, None] + diagonal[None, :]) * rho

    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho)
        if rho.shape != (2 * self._params.dim,) * 2:
            raise InvalidDimensionError(
                f'Expected a {2 * self._params.dim}-dimensional joint matrix, '
                f'got {rho.shape}'
            )
        chi, gamma, big_gamma = self._params.chi, self._params.gamma, self._params.Gamma
        # n sigma_z is diagonal, so its commutator scales entries by eigenvalue gaps.
        drho = -1j * chi * (self._dispersive[:, None] - self._dispersive[None, :]) * rho
        if gamma:
            a = self._annihilation
            drho += 2 * gamma * (a @ rho @ a.conj().T)
            drho -= gamma * self._anticommutator(self._number, rho)
        if big_gamma:
            lowering = self._lowering
            drho += 2 * big_gamma * (lowering @ rho @ lowering.conj().T)
            drho -= big_gamma * self._anticommutator(self._excited, rho)
        return drho

    __call__ = apply


def liouvillian_apply(rho, params: ModelParams) -> np.ndarray:
    rho = rho.entries if isinstance(rho, JointDensityMatrix) else rho
    return Liouvillian(params).apply(rho)


@dataclass(frozen=True)
class IntegrationResult:
    state: JointDensityMatrix
    sample_times: Tuple[float, ...]
    samples: Tuple[JointDensityMatrix, ...]
    trace_drift: float
    hermiticity_drift: float
    steps: int


class Integrator:
    def __init__(self, params: ModelParams, config: IntegratorConfig = None):
        self._params = params
        self._config = config or IntegratorConfig()
        self._liouvillian = Liouvillian(params)

    @property
    def config(self) -> IntegratorConfig:
        return self._config

    def _rk4_step(self, rho, dt):
        f = self._liouvillian
        k1 = f(rho)
        k2 = f(rho + 0.5 * dt * k1)
        k3 = f(rho + 0.5 * dt * k2)
        k4 = f(rho + dt * k3)
        return rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    def _advance(self, rho, duration):
        """Integrate over ``duration``; the last step is shortened to land exactly."""
        dt = self._config.dt
        full_steps = int(math.floor(duration / dt + 1e-9))
        remainder = duration - full_steps * dt
        step_sizes = [dt] * full_steps
        if remainder > 1e-12 * max(1.0, duration):
            step_sizes.append(remainder)
            logger.debug('Partial final step of %.3e', remainder)

        max_drift = 0.0
        for step_size in step_sizes:
            rho = self._rk4_step(rho, step_size)
            trace = np.trace(rho)
            drift = abs(trace - 1)
            if not np.isfinite(drift) or drift > self._config.drift_tolerance:
                raise TraceDriftError(
                    f'Trace drifted to {trace} '
                    f'(tolerance {self._config.drift_tolerance}); '
                    f'reduce dt={dt} or increase dim={self._params.dim}'
                )
            max_drift = max(max_drift, float(drift))
            if self._config.renormalize:
                rho = rho / trace
        return rho, max_drift, len(step_sizes)

    def run(self, rho0, t_final, sample_times=()) -> IntegrationResult:
        if t_final < 0:
            raise InvalidParameterError(f't_final must be non-negative, got {t_final}')
        if 0 < t_final < self._config.dt:
            raise InvalidParameterError(
                f'dt={self._config.dt} exceeds the integration time {t_final}'
            )
        sample_times = tuple(sorted(float(t) for t in sample_times))
        if sample_times and not 0 <= sample_times[0] <= sample_times[-1] <= t_final:
            raise InvalidParameterError(f'Sample times must lie within [0, {t_final}]')

        rho = np.array(rho0.entries if isinstance(rho0, JointDensityMatrix) else rho0,
                       dtype=complex)
        if rho.shape != (2 * self._params.dim,) * 2:
            raise InvalidDimensionError(
                f'Initial state has shape {rho.shape}, expected dim={self._params.dim}'
            )

        samples = []
        hermiticity_drift = 0.0
        trace_drift = abs(np.trace(rho) - 1)
        steps = 0
        now = 0.0
        for checkpoint in sample_times + (float(t_final),):
            if checkpoint > now:
                rho, drift, taken = self._advance(rho, checkpoint - now)
                trace_drift = max(trace_drift, drift)
                steps += taken
                now = checkpoint
            hermiticity_drift = max(hermiticity_drift, hermiticity_residual(rho))
            samples.append(JointDensityMatrix((rho + rho.conj().T) / 2))

        logger.debug('RK4 finished: %d steps, trace drift %.3e, hermiticity drift %.3e',
                     steps, trace_drift, hermiticity_drift)
        return IntegrationResult(
            state=samples.pop(),
            sample_times=sample_times,
            samples=tuple(samples),
            trace_drift=float(trace_drift),
            hermiticity_drift=hermiticity_drift,
            steps=steps,
        )


def evolve_rk4(rho0, params: ModelParams, t_final,
               config: IntegratorConfig = None) -> JointDensityMatrix:
    if t_final == 0:
        return rho0 if isinstance(rho0, JointDensityMatrix) else JointDensityMatrix(rho0)
    return Integrator(params, config).run(rho0, t_final).state


def sigma_x_trace(rho) -> float:
    rho = rho if isinstance(rho, JointDensityMatrix) else JointDensityMatrix(rho)
    observable = tensor_atom_field(SIGMA_X, identity(rho.field_dim))
    value = expectation(rho, observable)
    if abs(value.imag) > 1e-10:
        logger.warning('Discarding imaginary part %.3e of <sigma_x>', value.imag)
    return value.real

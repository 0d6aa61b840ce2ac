"""Closed-form evolution rho(t) = rho_1(t) + rho_2(t) of the dispersive model.

rho_1 carries everything that does not pass through an atomic jump: a finite
photon-loss sum (a^N = 0 on the truncated space) dressed by diagonal
exponentials. rho_2 is the atomic-jump branch feeding the |g><g| block; its
superoperator function (1 - exp(-(R_F + 2 Gamma) t))/(R_F + 2 Gamma) is
diagonal on the matrix units |n><n'| and is applied entrywise.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.special import comb, factorial

from quasirecon.exceptions import InvalidDimensionError, InvalidParameterError
from quasirecon.fock import GROUND_PROJECTOR, SIGMA_MINUS, SIGMA_PLUS, \
    SIGMA_Z, FieldDensityMatrix, JointDensityMatrix, displace_state, ladder_ops
from quasirecon.params import ModelParams


logger = logging.getLogger(__name__)

# Below this gamma/chi the loss integral (1 - e^{-2 gamma t})/(2 gamma) is taken as t.
DEGENERATE_GAMMA_RATIO = 1e-12


@dataclass(frozen=True)
class ZetaCoefficients:
    C: float
    S: float
    zeta: complex
    eta: complex
    gamma: float

    @property
    def coherence_weight(self) -> complex:
        """2 gamma zeta^*, the per-photon-loss weight of the <e|.|g> coherence."""
        return 2 * self.gamma * self.zeta.conjugate()


def _check_time(t):
    if t < 0:
        raise InvalidParameterError(f'Time must be non-negative, got {t}')


def zeta(params: ModelParams, t) -> ZetaCoefficients:
    _check_time(t)
    chi, gamma = params.chi, params.gamma
    denominator = 4 * chi ** 2 + 4 * gamma ** 2
    damping = math.exp(-2 * gamma * t)
    cosine, sine = math.cos(2 * chi * t), math.sin(2 * chi * t)
    c = (-2 * gamma * cosine + 2 * chi * sine) / denominator * damping \
        + 2 * gamma / denominator
    s = (-2 * gamma * sine - 2 * chi * cosine) / denominator * damping \
        + 2 * chi / denominator
    return ZetaCoefficients(C=c, S=s, zeta=complex(c, s), eta=params.eta, gamma=gamma)


def loss_integral(params: ModelParams, t) -> float:
    """(1 - exp(-2 gamma t))/(2 gamma), continued to t at gamma = 0."""
    if params.gamma < DEGENERATE_GAMMA_RATIO * params.chi:
        return float(t)
    return -math.expm1(-2 * params.gamma * t) / (2 * params.gamma)


def _prepared_entries(params, rho):
    entries = rho.entries if isinstance(rho, FieldDensityMatrix) else np.asarray(rho)
    if entries.shape != (params.dim, params.dim):
        raise InvalidDimensionError(
            f'Field matrix of shape {entries.shape} does not match dim={params.dim}'
        )
    return entries


def photon_loss_series(rho, weight) -> np.ndarray:
    """sum_m weight^m / m! a^m rho a^dag^m, exact on the truncated space."""
    rho = np.asarray(rho, dtype=complex)
    annihilation = ladder_ops(rho.shape[0])[0].entries
    creation = annihilation.conj().T
    total = rho.copy()
    if weight == 0:
        return total
    term = rho
    for m in range(1, rho.shape[0]):
        term = annihilation @ term @ creation * (weight / m)
        total = total + term
    return total


def _photon_numbers(params):
    return np.arange(params.dim, dtype=float)


def rho1(params: ModelParams, rho_prepared, t) -> JointDensityMatrix:
    _check_time(t)
    field = _prepared_entries(params, rho_prepared)
    coefficients = zeta(params, t)
    population_weight = 2 * params.gamma * loss_integral(params, t)

    populations = photon_loss_series(field, population_weight)
    coherence = photon_loss_series(field, coefficients.coherence_weight)

    sin_theta = math.sin(params.theta)
    atomic_populations = sin_theta ** 2 * SIGMA_Z.entries \
        + (SIGMA_MINUS @ SIGMA_PLUS).entries
    amplitude = 0.5 * math.sin(2 * params.theta)
    unconjugated = np.kron(atomic_populations, populations) \
        + amplitude * np.kron(SIGMA_PLUS.entries, coherence) \
        + amplitude * np.kron(SIGMA_MINUS.entries, coherence.conj().T)

    # exp(-(Gamma s+s- + gamma n +/- i chi sigma_z n) t) on either side; all diagonal.
    photons = np.kron([1.0, 1.0], _photon_numbers(params))
    excited = np.kron([1.0, 0.0], np.ones(params.dim))
    dispersive = np.kron([1.0, -1.0], _photon_numbers(params))
    damping = params.Gamma * excited + params.gamma * photons
    left = np.exp(-(damping + 1j * params.chi * dispersive) * t)
    right = np.exp(-(damping - 1j * params.chi * dispersive) * t)
    return JointDensityMatrix(left[:, None] * unconjugated * right[None, :])


def jump_function(params: ModelParams, t) -> np.ndarray:
    """Entrywise (1 - exp(-lambda t))/lambda with lambda = 2 Gamma + 2 i chi (n - n')."""
    photons = _photon_numbers(params)
    rates = 2 * params.Gamma + 2j * params.chi * (photons[:, None] - photons[None, :])
    degenerate = np.abs(rates) < DEGENERATE_GAMMA_RATIO * params.chi
    safe_rates = np.where(degenerate, 1.0, rates)
    values = (1 - np.exp(-safe_rates * t)) / safe_rates
    return np.where(degenerate, t, values)


def _ground_block(params, field_matrix, t):
    photons = _photon_numbers(params)
    eta = params.eta
    field = np.exp(-eta.conjugate() * photons * t)[:, None] * field_matrix \
        * np.exp(-eta * photons * t)[None, :]
    prefactor = 2 * params.Gamma * math.sin(params.theta) ** 2
    return JointDensityMatrix(prefactor * np.kron(GROUND_PROJECTOR.entries, field))


def rho2(params: ModelParams, rho_prepared, t) -> JointDensityMatrix:
    _check_time(t)
    field = _prepared_entries(params, rho_prepared)
    if params.Gamma == 0 or math.sin(params.theta) == 0:
        return JointDensityMatrix(np.zeros((2 * params.dim,) * 2, dtype=complex))
    population_weight = 2 * params.gamma * loss_integral(params, t)
    jumped = photon_loss_series(jump_function(params, t) * field, population_weight)
    return _ground_block(params, jumped, t)


def _commutator_power(params, field, power):
    """R_F^k rho = (2 i chi)^k sum_j (-1)^j C(k, j) n^(k-j) rho n^j."""
    photons = _photon_numbers(params)
    total = np.zeros_like(field)
    for j in range(power + 1):
        total = total + (-1) ** j * comb(power, j) \
            * (photons ** (power - j))[:, None] * field * (photons ** j)[None, :]
    return (2j * params.chi) ** power * total


def rho2_series(params: ModelParams, rho_prepared, t, terms=40) -> JointDensityMatrix:
    """rho_2 from the binomial l/k/j triple series, truncated after ``terms``.

    The powers of n act as n^(k-j) on the left and n^j on the right of the
    photon-loss sandwich; with that placement the series reproduces both the
    spectral rho2 and the RK4 oracle.
    """
    _check_time(t)
    field = _prepared_entries(params, rho_prepared)
    if params.Gamma == 0 or math.sin(params.theta) == 0:
        return JointDensityMatrix(np.zeros((2 * params.dim,) * 2, dtype=complex))
    population_weight = 2 * params.gamma * loss_integral(params, t)
    jumped = photon_loss_series(field, population_weight)

    powers = [_commutator_power(params, jumped, k) for k in range(terms + 1)]
    series = np.zeros_like(jumped)
    for order in range(terms + 1):
        weight = t ** (order + 1) / factorial(order + 1) * (-1) ** order
        inner = np.zeros_like(jumped)
        for k in range(order + 1):
            inner = inner + comb(order, k) * (2 * params.Gamma) ** (order - k) * powers[k]
        series = series + weight * inner
    return _ground_block(params, series, t)


def evolve_closed(params: ModelParams, rho_prepared, t) -> JointDensityMatrix:
    total = rho1(params, rho_prepared, t).entries + rho2(params, rho_prepared, t).entries
    return JointDensityMatrix(total)


def rho1_reduced(params: ModelParams, rho_prepared, t) -> JointDensityMatrix:
    """rho_1 of the lossy-cavity-only problem: Gamma = 0 and theta = pi/4.

    Only chi and gamma are read from ``params``. Built block by block so that it
    is independent of the general evaluator.
    """
    _check_time(t)
    field = _prepared_entries(params, rho_prepared)
    photons = _photon_numbers(params)
    eta = params.eta
    coefficients = zeta(params, t)

    populations = photon_loss_series(field, -math.expm1(-2 * params.gamma * t))
    coherence = photon_loss_series(field, coefficients.coherence_weight)
    forward = np.exp(-eta * photons * t)
    backward = np.exp(-eta.conjugate() * photons * t)

    excited = forward[:, None] * populations * backward[None, :]
    ground = backward[:, None] * populations * forward[None, :]
    upper = forward[:, None] * coherence * forward[None, :]
    joint = 0.5 * np.block([[excited, upper], [upper.conj().T, ground]])
    return JointDensityMatrix(joint)


def sigma_x_closed(params: ModelParams, rho_initial, alpha, t) -> float:
    """<sigma_x>(t) = 1/4 sin(2 theta) e^{-Gamma t} sum_k z^k <k|D^dag rho D|k> + c.c."""
    _check_time(t)
    populations = displace_state(rho_initial, alpha).entries.diagonal()
    coefficients = zeta(params, t)
    weight = np.exp(-2 * params.eta * t) + coefficients.coherence_weight
    series = np.sum(weight ** np.arange(params.dim) * populations)
    return 0.5 * math.sin(2 * params.theta) * math.exp(-params.Gamma * t) * series.real


def sigma_x_double_sum(params: ModelParams, rho_initial, alpha, t) -> float:
    """<sigma_x> before resumming the binomial over photon losses."""
    _check_time(t)
    populations = displace_state(rho_initial, alpha).entries.diagonal()
    loss = zeta(params, t).coherence_weight
    phase = complex(np.exp(-2 * params.eta * t))
    total = 0j
    for n in range(params.dim):
        for k in range(n, params.dim):
            total += phase ** n * loss ** (k - n) * comb(k, n) * populations[k]
    return 0.5 * math.sin(2 * params.theta) * math.exp(-params.Gamma * t) * total.real

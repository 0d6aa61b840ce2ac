"""Measurement protocol: from <sigma_x> at the phi = pi time to F(alpha, s).

At the interaction time t* where z(t) = (gamma + i chi e^{-2 eta t})/eta is
real and negative, z = -mu and the polarization becomes

    <sigma_x> = prefactor * F(alpha, s),   s = (mu - 1)/(mu + 1),

with prefactor = (1 - s) pi/2 sin(2 theta) e^{-Gamma t*} for the 1/(pi(1-s))
quasiprobability normalization (half of that for the 2/(pi(1-s)) one).
"""
from dataclasses import dataclass
from enum import Enum
import logging
import math
from typing import Tuple

import numpy as np
from scipy.optimize import bisect

from quasirecon.analytic import evolve_closed
from quasirecon.cache import enable_dict_cache
from quasirecon.exceptions import InvalidParameterError, NoCrossingError
from quasirecon.fock import FieldDensityMatrix, JointDensityMatrix, atom_state, \
    displace_state
from quasirecon.oracle import evolve_rk4, sigma_x_trace
from quasirecon.params import IntegratorConfig, ModelParams
from quasirecon.quasiprobability import PhaseGrid, QpdConvention, \
    displaced_populations, map_grid, qpd_direct


logger = logging.getLogger(__name__)

SCAN_STEPS_PER_HALF_PERIOD = 50
ROOT_RELATIVE_TOLERANCE = 1e-12
SMALL_THETA_LIMIT = 0.05
ZERO_SIGNAL_TOLERANCE = 1e-9


class CrossingVariant(Enum):
    DERIVED = 'derived'
    SINGLE_ANGLE = 'single_angle'

    @classmethod
    def _missing_(cls, value):
        if value == 'figure_literal':
            return cls.SINGLE_ANGLE
        return None


class Engine(Enum):
    ANALYTIC = 'analytic'
    ORACLE = 'oracle'

    @classmethod
    def from_name(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise InvalidParameterError(f'Unknown evolution engine {name!r}')


@dataclass(frozen=True)
class MeasurementSchedule:
    t_star: float
    mu: float
    phi: float
    s: float
    prefactor: float
    convention: QpdConvention
    params: ModelParams


@dataclass(frozen=True)
class ReconstructionRecord:
    alpha: complex
    sigma_x: float
    f_hat: float
    f_direct: float

    @property
    def abs_error(self) -> float:
        return abs(self.f_hat - self.f_direct)


@dataclass(frozen=True)
class SmallAngleEstimate:
    record: ReconstructionRecord
    f_hat_approx: float

    @property
    def relative_gap(self) -> float:
        return abs(self.f_hat_approx - self.record.f_hat) / abs(self.record.f_hat)


def z_factor(params: ModelParams, t):
    eta = params.eta
    return (params.gamma + 1j * params.chi * np.exp(-2 * eta * t)) / eta


def crossing_function(params: ModelParams, t, variant=CrossingVariant.DERIVED):
    """epsilon + e^{-2 gamma t}(sin(k chi t) - epsilon cos(k chi t)).

    k = 2 for the derived variant, which equals -Im z(t) |eta|^2/chi^2; k = 1
    gives the single-angle curve, which changes sign between pi and 3 pi/2.
    """
    variant = CrossingVariant(variant)
    epsilon = params.epsilon
    argument = params.chi * np.asarray(t, dtype=float)
    if variant is CrossingVariant.DERIVED:
        argument = 2 * argument
    damping = np.exp(-2 * params.gamma * np.asarray(t, dtype=float))
    return epsilon + damping * (np.sin(argument) - epsilon * np.cos(argument))


def trig_mu_phi(params: ModelParams, t, doubled=False) -> Tuple[float, float]:
    """mu and tan(phi) in closed trigonometric form.

    With ``doubled`` the trigonometric arguments are 2 chi t and the pair
    equals (|z(t)|, tan arg z(t)); without it they are chi t.
    """
    epsilon = params.epsilon
    argument = params.chi * t * (2 if doubled else 1)
    damping = math.exp(-2 * params.gamma * t)
    sine, cosine = math.sin(argument), math.cos(argument)
    mu = math.sqrt((epsilon ** 2 + damping ** 2 + 2 * epsilon * sine * damping)
                   / (1 + epsilon ** 2))
    numerator = epsilon + damping * (sine - epsilon * cosine)
    denominator = epsilon ** 2 + damping * (cosine + epsilon * sine)
    return mu, -numerator / denominator


def protocol_prefactor(params: ModelParams, s, t, convention) -> float:
    convention = QpdConvention.from_name(convention)
    return (1 - s) * math.pi / (2 * convention.normalization) \
        * math.sin(2 * params.theta) * math.exp(-params.Gamma * t)


@enable_dict_cache(maxsize=128)
def _schedule(params, horizon, convention):
    step = math.pi / (SCAN_STEPS_PER_HALF_PERIOD * params.chi)
    # z(0) = 1 is a trivial root of Im z; the scan starts one step in.
    times = np.arange(1, int(math.ceil(horizon / step)) + 1) * step
    times[-1] = min(times[-1], horizon)
    imaginary = z_factor(params, times).imag

    def imag_z(t):
        return float(z_factor(params, t).imag)

    for index in range(len(times)):
        if imaginary[index] == 0:
            root = float(times[index])
        elif index + 1 < len(times) and imaginary[index] * imaginary[index + 1] < 0:
            root = bisect(imag_z, times[index], times[index + 1],
                          xtol=1e-15, rtol=ROOT_RELATIVE_TOLERANCE)
        else:
            continue
        z = complex(z_factor(params, root))
        if z.real >= 0:
            logger.debug('Im z vanishes at t=%.6f but Re z=%.3e >= 0', root, z.real)
            continue
        mu = abs(z)
        s = (mu - 1) / (mu + 1)
        logger.info('Measurement time t*=%.12g: mu=%.12g, s=%.12g', root, mu, s)
        return MeasurementSchedule(
            t_star=root,
            mu=mu,
            phi=abs(math.atan2(z.imag, z.real)),
            s=s,
            prefactor=protocol_prefactor(params, s, root, convention),
            convention=convention,
            params=params,
        )

    raise NoCrossingError(
        f'No phi = pi crossing within horizon {horizon:.6g} for chi={params.chi}, '
        f'gamma={params.gamma} (epsilon={params.epsilon:.3g})',
        horizon=horizon,
    )


def find_measurement_time(params: ModelParams, horizon=None,
                          convention=QpdConvention.NORMALIZED) -> MeasurementSchedule:
    if horizon is None:
        horizon = 4 * math.pi / params.chi
    if not horizon > 0:
        raise InvalidParameterError(f'horizon must be positive, got {horizon}')
    return _schedule(params, float(horizon), QpdConvention.from_name(convention))


def prepare_initial(params: ModelParams, rho_initial: FieldDensityMatrix,
                    alpha) -> JointDensityMatrix:
    if rho_initial.dim != params.dim:
        raise InvalidParameterError(
            f'Field dimension {rho_initial.dim} does not match dim={params.dim}'
        )
    field = displace_state(rho_initial, alpha)
    joint = JointDensityMatrix(np.kron(atom_state(params.theta).entries, field.entries))
    trace = joint.trace().real
    if abs(trace - 1) > 1e-8:
        raise InvalidParameterError(f'Prepared state has trace {trace}; expected 1')
    return joint


def _check_schedule(params, schedule):
    reference = schedule.params
    if (reference.chi, reference.gamma, reference.dim) != \
            (params.chi, params.gamma, params.dim):
        raise InvalidParameterError(
            'Measurement schedule was computed for different rates'
        )


def _polarization(params, rho_initial, alpha, t, engine, integrator):
    if engine is Engine.ANALYTIC:
        evolved = evolve_closed(params, displace_state(rho_initial, alpha), t)
    else:
        evolved = evolve_rk4(prepare_initial(params, rho_initial, alpha), params, t,
                             integrator)
    return sigma_x_trace(evolved)


def reconstruct_point(params: ModelParams, rho_initial, alpha,
                      schedule: MeasurementSchedule, engine=Engine.ANALYTIC,
                      integrator: IntegratorConfig = None) -> ReconstructionRecord:
    engine = Engine.from_name(engine)
    _check_schedule(params, schedule)
    # t* and s depend only on chi and gamma; theta and Gamma enter through the prefactor.
    prefactor = schedule.prefactor if schedule.params == params else \
        protocol_prefactor(params, schedule.s, schedule.t_star, schedule.convention)
    if abs(math.sin(2 * params.theta)) < ZERO_SIGNAL_TOLERANCE:
        raise InvalidParameterError('Zero polarization signal: sin(2 theta) vanishes')
    sigma_x = _polarization(params, rho_initial, alpha, schedule.t_star, engine,
                            integrator)
    return ReconstructionRecord(
        alpha=complex(alpha),
        sigma_x=sigma_x,
        f_hat=sigma_x / prefactor,
        f_direct=qpd_direct(rho_initial, alpha, schedule.s, schedule.convention),
    )


def reconstruct_grid(params: ModelParams, rho_initial, grid: PhaseGrid,
                     schedule: MeasurementSchedule, engine=Engine.ANALYTIC,
                     integrator: IntegratorConfig = None, workers=1):
    engine = Engine.from_name(engine)
    records = map_grid(
        lambda alpha: reconstruct_point(params, rho_initial, alpha, schedule, engine,
                                        integrator),
        grid, workers,
    )
    logger.info('Reconstructed %d grid points (%s engine), max error %.3e',
                len(records), engine.value, max(r.abs_error for r in records))
    return records


def small_theta_estimate(params: ModelParams, rho_initial, alpha,
                         schedule: MeasurementSchedule, engine=Engine.ANALYTIC,
                         integrator: IntegratorConfig = None) -> SmallAngleEstimate:
    """Inversion with sin(2 theta) replaced by 2 theta for a barely excited atom."""
    if not 0 < params.theta <= SMALL_THETA_LIMIT:
        raise InvalidParameterError(
            f'Small-angle inversion needs 0 < theta <= {SMALL_THETA_LIMIT}, '
            f'got {params.theta}'
        )
    record = reconstruct_point(params, rho_initial, alpha, schedule, engine, integrator)
    approximate = (1 - schedule.s) * math.pi * params.theta \
        * math.exp(-params.Gamma * schedule.t_star) / schedule.convention.normalization
    return SmallAngleEstimate(record=record, f_hat_approx=record.sigma_x / approximate)


def polarization_series(params: ModelParams, rho_initial, alpha, t) -> float:
    """<sigma_x> as 1/2 sin(2 theta) e^{-Gamma t} sum_k mu^k cos(k phi) P_k(alpha)."""
    z = complex(z_factor(params, t))
    mu, phi = abs(z), math.atan2(z.imag, z.real)
    k = np.arange(params.dim)
    populations = displaced_populations(rho_initial, alpha)
    series = np.sum(mu ** k * np.cos(k * phi) * populations)
    return 0.5 * math.sin(2 * params.theta) * math.exp(-params.Gamma * t) * float(series)

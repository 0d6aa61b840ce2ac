from dataclasses import dataclass, replace
import math

from quasirecon.exceptions import InvalidParameterError


MAX_TRUNCATION = 256


@dataclass(frozen=True)
class ModelParams:
    """Rates of the dispersive master equation and the atomic preparation.

    chi is the dispersive coupling, gamma the field decay rate, Gamma the atomic
    decay rate, theta the angle of sin(theta)|e> + cos(theta)|g>, dim the Fock
    truncation.
    """
    chi: float = 1.0
    gamma: float = 0.0
    Gamma: float = 0.0
    theta: float = math.pi / 4
    dim: int = 16

    def __post_init__(self):
        if not self.chi > 0:
            raise InvalidParameterError(f'chi must be positive, got {self.chi}')
        if self.gamma < 0 or self.Gamma < 0:
            raise InvalidParameterError(
                f'Decay rates must be non-negative, '
                f'got gamma={self.gamma}, Gamma={self.Gamma}'
            )
        if not 0 <= self.theta <= math.pi / 2:
            raise InvalidParameterError(f'theta must lie in [0, pi/2], got {self.theta}')
        if int(self.dim) != self.dim or not 2 <= self.dim <= MAX_TRUNCATION:
            raise InvalidParameterError(
                f'dim must be an integer in [2, {MAX_TRUNCATION}], got {self.dim}'
            )

    @property
    def epsilon(self) -> float:
        return self.gamma / self.chi

    @property
    def eta(self) -> complex:
        return complex(self.gamma, self.chi)

    def with_updates(self, **changes) -> 'ModelParams':
        return replace(self, **changes)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    renormalize: bool = False
    drift_tolerance: float = 1e-6

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidParameterError(f'dt must be positive, got {self.dt}')
        if not self.drift_tolerance > 0:
            raise InvalidParameterError(
                f'drift_tolerance must be positive, got {self.drift_tolerance}'
            )

    def with_updates(self, **changes) -> 'IntegratorConfig':
        return replace(self, **changes)

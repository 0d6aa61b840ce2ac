from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
import logging
import math
import warnings

import numpy as np
from scipy.integrate import trapezoid

from quasirecon.exceptions import GridPointError, InvalidParameterError, \
    InvalidStateError, QuasireconError, TruncationWarning
from quasirecon.fock import displace_state, displacement


logger = logging.getLogger(__name__)

TAIL_RELATIVE_LIMIT = 1e-8
IMAGINARY_RESIDUE_LIMIT = 1e-9


class QpdConvention(Enum):
    # 1/(pi(1-s)), integrates to one half
    HALF = 'half'
    # 2/(pi(1-s)), integrates to one over phase space
    NORMALIZED = 'normalized'

    @classmethod
    def from_name(cls, name):
        if isinstance(name, cls):
            return name
        aliases = {'half': cls.HALF, 'paper': cls.HALF, 'paper_literal': cls.HALF,
                   'normalized': cls.NORMALIZED}
        try:
            return aliases[str(name).lower()]
        except KeyError:
            raise InvalidParameterError(f'Unknown quasiprobability convention {name!r}')

    @property
    def normalization(self) -> float:
        return 1.0 if self is QpdConvention.HALF else 2.0

    def prefactor(self, s) -> float:
        return self.normalization / (math.pi * (1 - s))


@dataclass(frozen=True)
class PhaseGrid:
    re_min: float = -1.5
    re_max: float = 1.5
    im_min: float = -1.5
    im_max: float = 1.5
    n_re: int = 9
    n_im: int = 9

    def __post_init__(self):
        axes = ((self.re_min, self.re_max, self.n_re, 'real'),
                (self.im_min, self.im_max, self.n_im, 'imaginary'))
        for low, high, count, axis in axes:
            if int(count) != count or count < 1:
                raise InvalidParameterError(f'{axis} axis needs a positive point count')
            # A single point is only meaningful for a degenerate axis.
            if count == 1 and low != high:
                raise InvalidParameterError(
                    f'{axis} axis with one point requires equal bounds, '
                    f'got [{low}, {high}]'
                )
            if count > 1 and not low < high:
                raise InvalidParameterError(
                    f'{axis} bounds must be ordered, got [{low}, {high}]'
                )

    @classmethod
    def square(cls, half_width, points) -> 'PhaseGrid':
        return cls(-half_width, half_width, -half_width, half_width, points, points)

    @classmethod
    def single(cls, alpha) -> 'PhaseGrid':
        alpha = complex(alpha)
        return cls(alpha.real, alpha.real, alpha.imag, alpha.imag, 1, 1)

    @property
    def shape(self):
        return self.n_re, self.n_im

    @property
    def re_values(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im_values(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    def points(self):
        """(row, column, alpha) in row-major order; rows follow Re(alpha)."""
        return [(row, column, complex(re, im))
                for row, re in enumerate(self.re_values)
                for column, im in enumerate(self.im_values)]

    def nearest(self, alpha):
        alpha = complex(alpha)
        return (int(np.argmin(np.abs(self.re_values - alpha.real))),
                int(np.argmin(np.abs(self.im_values - alpha.imag))))


def _check_s(s):
    if not s < 1:
        raise InvalidParameterError(f's must be strictly below 1, got {s}')


def displaced_populations(rho, alpha) -> np.ndarray:
    """<alpha,k|rho|alpha,k> for k < N."""
    diagonal = displace_state(rho, alpha).entries.diagonal()
    residue = float(np.max(np.abs(diagonal.imag)))
    if residue > IMAGINARY_RESIDUE_LIMIT:
        raise InvalidStateError(
            f'Displaced populations carry imaginary residue {residue:.3e}'
        )
    return diagonal.real


def qpd_direct(rho, alpha, s, convention=QpdConvention.NORMALIZED) -> float:
    _check_s(s)
    convention = QpdConvention.from_name(convention)
    populations = displaced_populations(rho, alpha)
    ratio = (s + 1) / (s - 1)
    terms = ratio ** np.arange(len(populations)) * populations
    partial = float(np.sum(terms))
    tail = float(np.sum(np.abs(terms[-3:])))
    if tail > TAIL_RELATIVE_LIMIT * abs(partial):
        message = f'Series tail {tail:.3e} at alpha={complex(alpha)}, s={s} is not ' \
                  f'negligible; increase the truncation'
        logger.warning(message)
        warnings.warn(message, TruncationWarning, stacklevel=2)
    return convention.prefactor(s) * partial


def wigner_parity(rho, alpha) -> float:
    """(2/pi) Tr(rho D(alpha) P D^dag(alpha)) with P = (-1)^n."""
    operator = displacement(alpha, rho.dim).entries
    parity = np.diag((-1.0) ** np.arange(rho.dim))
    displaced_parity = operator @ parity @ operator.conj().T
    value = np.einsum('ij,ji->', rho.entries, displaced_parity)
    if abs(value.imag) > IMAGINARY_RESIDUE_LIMIT:
        raise InvalidStateError(f'Parity expectation has imaginary part {value.imag:.3e}')
    return 2 / math.pi * value.real


def map_grid(function, grid: PhaseGrid, workers=1):
    """Evaluate ``function(alpha)`` over the grid in row-major order.

    Failures are re-raised as GridPointError carrying the grid coordinates.
    """
    def evaluate(point):
        row, column, alpha = point
        try:
            return function(alpha)
        except QuasireconError as e:
            raise GridPointError(
                f'Failed at alpha={alpha} (row {row}, column {column}): {e}',
                alpha=alpha, row=row, column=column,
            ) from e

    points = grid.points()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(evaluate, points))
    return [evaluate(point) for point in points]


def qpd_grid(rho, grid: PhaseGrid, s, convention=QpdConvention.NORMALIZED,
             workers=1) -> np.ndarray:
    _check_s(s)
    convention = QpdConvention.from_name(convention)
    values = map_grid(lambda alpha: qpd_direct(rho, alpha, s, convention), grid, workers)
    return np.array(values, dtype=float).reshape(grid.shape)


def grid_integral(values, grid: PhaseGrid) -> float:
    """Trapezoidal integral over d^2 alpha = d Re(alpha) d Im(alpha)."""
    values = np.asarray(values, dtype=float).reshape(grid.shape)
    inner = trapezoid(values, grid.im_values, axis=1)
    return float(trapezoid(inner, grid.re_values))

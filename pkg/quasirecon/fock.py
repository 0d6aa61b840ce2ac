"""Dense operators and states on the truncated Fock space and the atom.

The field basis is |0>..|N-1>. Atomic matrices use the basis {|e>, |g>} with
the excited state first, and joint atom-field matrices are atom-major: the
N x N block (a, a') holds <a| rho |a'>.
"""
import logging
import math
import warnings

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from quasirecon.cache import enable_dict_cache
from quasirecon.exceptions import InvalidDimensionError, InvalidStateError, \
    NonHermitianError, TruncationError, TruncationWarning


logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-10
POSITIVITY_TOLERANCE = 1e-8
TAIL_MASS_LIMIT = 1e-6


def _as_array(obj):
    if isinstance(obj, Operator):
        return obj.entries
    return np.asarray(obj)


def _frozen(array):
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def hermiticity_residual(matrix):
    matrix = _as_array(matrix)
    return float(np.max(np.abs(matrix - matrix.conj().T)))


class Operator:
    """Immutable dense complex square matrix."""

    def __init__(self, entries):
        entries = _frozen(entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidDimensionError(
                f'{self.__class__.__name__} requires a square matrix, '
                f'got shape {entries.shape}'
            )
        if not np.all(np.isfinite(entries)):
            raise InvalidStateError(f'{self.__class__.__name__} has non-finite entries')
        self._entries = entries

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def shape(self):
        return self._entries.shape

    def __array__(self, dtype=None):
        if dtype is None:
            return self._entries
        return self._entries.astype(dtype)

    def __repr__(self):
        return f'{self.__class__.__name__}<{hex(id(self))}>[shape={self.shape}]'

    def trace(self) -> complex:
        return complex(np.trace(self._entries))

    def dagger(self) -> 'Operator':
        return self.__class__(self._entries.conj().T)

    def _product_class(self):
        return self.__class__

    def __matmul__(self, other):
        return self._product_class()(self._entries @ _as_array(other))


class AtomOperator(Operator):
    def __init__(self, entries):
        super(AtomOperator, self).__init__(entries)
        if self.shape != (2, 2):
            raise InvalidDimensionError(f'AtomOperator must be 2x2, got {self.shape}')


class FockOperator(Operator):
    def __init__(self, entries):
        super(FockOperator, self).__init__(entries)
        if self.dim < 2:
            raise InvalidDimensionError(
                f'Fock truncation must be at least 2, got {self.dim}'
            )

    @property
    def dim(self) -> int:
        return self.shape[0]


class FieldDensityMatrix(FockOperator):
    """Field state; trace below one is allowed and reflects the truncated tail."""

    def __init__(self, entries, tail_mass=0.0, check_positivity=True):
        super(FieldDensityMatrix, self).__init__(entries)
        self._tail_mass = float(tail_mass)
        residual = hermiticity_residual(self.entries)
        if residual > HERMITIAN_TOLERANCE:
            raise InvalidStateError(
                f'Field density matrix is not Hermitian ({residual:.3e})'
            )
        trace = self.trace()
        if abs(trace.imag) > TRACE_TOLERANCE or not 0 < trace.real <= 1 + TRACE_TOLERANCE:
            raise InvalidStateError(f'Field density matrix has invalid trace {trace}')
        if check_positivity:
            smallest = hermitian_min_eigenvalue(self.entries)
            if smallest < -POSITIVITY_TOLERANCE:
                raise InvalidStateError(
                    f'Field density matrix is not positive semidefinite ({smallest:.3e})'
                )

    @property
    def tail_mass(self) -> float:
        return self._tail_mass

    def populations(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()

    def dagger(self):
        return self

    def _product_class(self):
        return FockOperator


class JointOperator(Operator):
    def __init__(self, entries):
        super(JointOperator, self).__init__(entries)
        if self.shape[0] % 2 or self.shape[0] < 4:
            raise InvalidDimensionError(
                f'Joint operators are 2N x 2N with N >= 2, got {self.shape}'
            )

    @property
    def field_dim(self) -> int:
        return self.shape[0] // 2

    def block(self, row, column) -> np.ndarray:
        """Field matrix <row| . |column> for atomic indices 0 (e) and 1 (g)."""
        n = self.field_dim
        return self.entries[row * n:(row + 1) * n, column * n:(column + 1) * n]


class JointDensityMatrix(JointOperator):
    def __init__(self, entries):
        super(JointDensityMatrix, self).__init__(entries)
        residual = hermiticity_residual(self.entries)
        if residual > HERMITIAN_TOLERANCE:
            raise InvalidStateError(
                f'Joint density matrix is not Hermitian ({residual:.3e})'
            )

    def dagger(self):
        return self

    def _product_class(self):
        return JointOperator


SIGMA_Z = AtomOperator([[1, 0], [0, -1]])
SIGMA_MINUS = AtomOperator([[0, 0], [1, 0]])
SIGMA_PLUS = AtomOperator([[0, 1], [0, 0]])
# Halved convention: sigma_x = (sigma_+ + sigma_-)/2
SIGMA_X = AtomOperator((SIGMA_PLUS.entries + SIGMA_MINUS.entries) / 2)
SIGMA_Y = AtomOperator((SIGMA_PLUS.entries - SIGMA_MINUS.entries) / 2j)
EXCITED_PROJECTOR = SIGMA_PLUS @ SIGMA_MINUS
GROUND_PROJECTOR = SIGMA_MINUS @ SIGMA_PLUS
ATOM_IDENTITY = AtomOperator(np.eye(2))


def _check_truncation(dim):
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f'Fock truncation must be an integer >= 2, got {dim}')
    return int(dim)


def ladder_ops(dim):
    dim = _check_truncation(dim)
    annihilation = np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)
    creation = annihilation.conj().T
    number = np.diag(np.arange(dim)).astype(complex)
    return FockOperator(annihilation), FockOperator(creation), FockOperator(number)


def identity(dim) -> FockOperator:
    return FockOperator(np.eye(_check_truncation(dim)))


@enable_dict_cache(maxsize=256)
def _displacement_entries(alpha, dim):
    annihilation, creation, _ = ladder_ops(dim)
    generator = alpha * creation.entries - alpha.conjugate() * annihilation.entries
    return _frozen(expm(generator))


def displacement(alpha, dim) -> FockOperator:
    """Glauber displacement exp(alpha a^dag - alpha^* a) on the truncated space."""
    alpha = complex(alpha)
    dim = _check_truncation(dim)
    if abs(alpha) ** 2 > dim / 4:
        message = f'|alpha|^2 = {abs(alpha) ** 2:.3f} exceeds N/4 = {dim / 4:.2f}; ' \
                  f'truncation artifacts expected'
        logger.warning(message)
        warnings.warn(message, TruncationWarning, stacklevel=2)
    return FockOperator(_displacement_entries(alpha, dim))


def displace_state(rho: FieldDensityMatrix, alpha) -> FieldDensityMatrix:
    """D^dag(alpha) rho D(alpha), whose diagonal is <alpha,k|rho|alpha,k>."""
    operator = displacement(alpha, rho.dim).entries
    displaced = operator.conj().T @ rho.entries @ operator
    return FieldDensityMatrix(displaced, tail_mass=rho.tail_mass, check_positivity=False)


def coherent_state(beta, dim) -> FieldDensityMatrix:
    beta = complex(beta)
    dim = _check_truncation(dim)
    n = np.arange(dim)
    magnitude = np.exp(-abs(beta) ** 2 / 2 - gammaln(n + 1) / 2) * abs(beta) ** n
    amplitudes = magnitude * np.exp(1j * np.angle(beta) * n)
    tail_mass = max(0.0, 1.0 - float(np.sum(magnitude ** 2)))
    if tail_mass > TAIL_MASS_LIMIT:
        raise TruncationError(
            f'Coherent state beta={beta} loses tail mass {tail_mass:.3e} at N={dim}'
        )
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return FieldDensityMatrix(np.outer(amplitudes, amplitudes.conj()),
                              tail_mass=tail_mass, check_positivity=False)


def fock_state(n, dim) -> FieldDensityMatrix:
    dim = _check_truncation(dim)
    if int(n) != n or not 0 <= n < dim:
        raise InvalidDimensionError(
            f'Fock state |{n}> is outside the basis of size {dim}'
        )
    entries = np.zeros((dim, dim), dtype=complex)
    entries[int(n), int(n)] = 1
    return FieldDensityMatrix(entries, check_positivity=False)


def vacuum(dim) -> FieldDensityMatrix:
    return fock_state(0, dim)


def thermal_state(nbar, dim) -> FieldDensityMatrix:
    dim = _check_truncation(dim)
    if nbar < 0:
        raise InvalidStateError(f'Mean photon number must be non-negative, got {nbar}')
    ratio = nbar / (1.0 + nbar)
    populations = ratio ** np.arange(dim) / (1.0 + nbar)
    tail_mass = ratio ** dim
    if tail_mass > TAIL_MASS_LIMIT:
        raise TruncationError(
            f'Thermal state nbar={nbar} loses tail mass {tail_mass:.3e} at N={dim}'
        )
    populations = populations / populations.sum()
    return FieldDensityMatrix(np.diag(populations), tail_mass=tail_mass,
                              check_positivity=False)


def atom_state(theta) -> AtomOperator:
    """|psi_A><psi_A| for |psi_A> = sin(theta)|e> + cos(theta)|g>."""
    vector = np.array([math.sin(theta), math.cos(theta)])
    return AtomOperator(np.outer(vector, vector))


def tensor_atom_field(atom, field) -> JointOperator:
    atom = _as_array(atom)
    field = _as_array(field)
    if atom.shape != (2, 2):
        raise InvalidDimensionError(f'Atomic factor must be 2x2, got {atom.shape}')
    if field.ndim != 2 or field.shape[0] != field.shape[1]:
        raise InvalidDimensionError(f'Field factor must be square, got {field.shape}')
    return JointOperator(np.kron(atom, field))


def joint_state(atom, field) -> JointDensityMatrix:
    return JointDensityMatrix(tensor_atom_field(atom, field).entries)


def partial_trace_atom(rho) -> FockOperator:
    rho = rho if isinstance(rho, JointOperator) else JointOperator(rho)
    return FockOperator(rho.block(0, 0) + rho.block(1, 1))


def expectation(rho, observable) -> complex:
    rho = _as_array(rho)
    observable = _as_array(observable)
    if rho.shape != observable.shape:
        raise InvalidDimensionError(
            f'Cannot take expectation of {observable.shape} operator in {rho.shape} state'
        )
    return complex(np.einsum('ij,ji->', rho, observable))


def _jacobi_rotate(matrix, p, q):
    off_diagonal = matrix[p, q]
    magnitude = abs(off_diagonal)
    phase = off_diagonal / magnitude
    tau = (matrix[q, q].real - matrix[p, p].real) / (2 * magnitude)
    tangent = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1 + tau * tau))
    cosine = 1.0 / math.sqrt(1 + tangent * tangent)
    sine = tangent * cosine
    rotation = np.array([[cosine, sine],
                         [-sine * phase.conjugate(), cosine * phase.conjugate()]])
    pair = [p, q]
    matrix[:, pair] = matrix[:, pair] @ rotation
    matrix[pair, :] = rotation.conj().T @ matrix[pair, :]
    matrix[p, q] = matrix[q, p] = 0
    matrix[p, p] = matrix[p, p].real
    matrix[q, q] = matrix[q, q].real


def hermitian_eigenvalues(matrix, tolerance=1e-12, max_sweeps=100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations."""
    matrix = np.array(_as_array(matrix), dtype=complex)
    residual = hermiticity_residual(matrix)
    if residual > 1e-8:
        raise NonHermitianError(f'Matrix is not Hermitian (residual {residual:.3e})')
    matrix = (matrix + matrix.conj().T) / 2
    size = matrix.shape[0]
    scale = max(1.0, float(np.linalg.norm(matrix)))
    skip_below = 1e-2 * tolerance * scale / max(size, 1)
    mask = ~np.eye(size, dtype=bool)

    for sweep in range(max_sweeps):
        off_norm = float(np.sqrt(np.sum(np.abs(matrix[mask]) ** 2)))
        if off_norm <= tolerance * scale:
            logger.debug('Jacobi converged after %d sweeps (off-norm %.3e)',
                         sweep, off_norm)
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                if abs(matrix[p, q]) > skip_below:
                    _jacobi_rotate(matrix, p, q)
    else:
        logger.warning('Jacobi did not converge in %d sweeps', max_sweeps)

    return np.sort(matrix.diagonal().real)


def hermitian_min_eigenvalue(matrix, tolerance=1e-12) -> float:
    return float(hermitian_eigenvalues(matrix, tolerance=tolerance)[0])

"""Dense multipartite quantum states and the spectral tools built on them.

States are immutable after construction: every operation returns a new value
and never mutates its inputs, so instances are safe to share across threads.
Entropies are in nats (natural logarithm) throughout.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .tensor_ops import partial_trace_matrix

MAX_TOTAL_DIM = 4096


class InvalidStateError(ValueError):
    """A matrix or vector failed the density-operator / pure-state invariants."""


@dataclass(frozen=True)
class HilbertFactorization:
    """An ordered tensor-product decomposition of a Hilbert space."""

    dims: tuple[int, ...]

    def __init__(self, dims: Sequence[int]):
        dims = tuple(int(d) for d in dims)
        if len(dims) == 0:
            raise ValueError("factorization needs at least one factor")
        if any(d < 2 for d in dims):
            raise ValueError(f"every factor dimension must be >= 2, got {dims}")
        total = int(np.prod(dims))
        if total > MAX_TOTAL_DIM:
            raise ValueError(f"total dimension {total} exceeds cap {MAX_TOTAL_DIM}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def concat(self, other: "HilbertFactorization") -> "HilbertFactorization":
        return HilbertFactorization(self.dims + other.dims)

    def restrict(self, keep: Sequence[int]) -> "HilbertFactorization":
        keep_sorted = sorted(keep)
        return HilbertFactorization(tuple(self.dims[i] for i in keep_sorted))


def _readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validating a would-be density operator."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    passed: bool
    messages: tuple[str, ...] = ()


def validate_density(matrix: np.ndarray,
                     hermiticity_tol: float = tol.HERMITICITY,
                     trace_tol: float = tol.TRACE,
                     psd_floor: float = tol.PSD_FLOOR) -> ValidationReport:
    """Check Hermiticity, unit trace, and positivity of a raw matrix.

    This is a reporting operation: it never raises, it returns the measured
    defects and a pass/fail flag against the given tolerances.
    """
    matrix = np.asarray(matrix, dtype=complex)
    messages = []
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return ValidationReport(np.inf, np.inf, -np.inf, False,
                                (f"not a square matrix: shape {matrix.shape}",))
    herm = float(np.max(np.abs(matrix - matrix.conj().T)))
    trace = float(abs(np.trace(matrix) - 1.0))
    eigenvalues = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2.0)
    min_eig = float(eigenvalues[0])
    if herm > hermiticity_tol:
        messages.append(f"hermiticity defect {herm:.3e} > {hermiticity_tol:.1e}")
    if trace > trace_tol:
        messages.append(f"trace defect {trace:.3e} > {trace_tol:.1e}")
    if min_eig < -psd_floor:
        messages.append(f"minimum eigenvalue {min_eig:.3e} < -{psd_floor:.1e}")
    return ValidationReport(herm, trace, min_eig, not messages, tuple(messages))


@dataclass(frozen=True)
class PureState:
    """A normalized state vector together with its tensor factorization."""

    amplitudes: np.ndarray
    factorization: HilbertFactorization

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape[0] != self.factorization.total_dim:
            raise InvalidStateError(
                f"vector length {amplitudes.shape[0]} does not match "
                f"factorization dimension {self.factorization.total_dim}")
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > tol.NORM:
            raise InvalidStateError(f"norm defect {abs(norm - 1.0):.3e} exceeds {tol.NORM:.1e}")
        object.__setattr__(self, "amplitudes", _readonly(amplitudes))

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex],
                        dims: Sequence[int]) -> "PureState":
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        vec = vec / np.linalg.norm(vec)
        return cls(vec, HilbertFactorization(dims))

    @classmethod
    def basis_state(cls, index: int, dims: Sequence[int]) -> "PureState":
        fact = HilbertFactorization(dims)
        vec = np.zeros(fact.total_dim, dtype=complex)
        vec[index] = 1.0
        return cls(vec, fact)

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes),
                         self.factorization.concat(other.factorization))

    def to_density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()),
                               self.factorization)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, PSD, unit-trace matrix carrying its tensor factorization."""

    matrix: np.ndarray
    factorization: HilbertFactorization
    _validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (self.factorization.total_dim,) * 2:
            raise InvalidStateError(
                f"matrix shape {matrix.shape} does not match factorization "
                f"dimension {self.factorization.total_dim}")
        if self._validate:
            report = validate_density(matrix)
            if not report.passed:
                raise InvalidStateError("; ".join(report.messages))
        object.__setattr__(self, "matrix", _readonly(matrix))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.factorization.dims

    @classmethod
    def from_diagonal(cls, populations: Sequence[float],
                      dims: Sequence[int]) -> "DensityOperator":
        return cls(np.diag(np.asarray(populations, dtype=complex)),
                   HilbertFactorization(dims))

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityOperator":
        fact = HilbertFactorization(dims)
        d = fact.total_dim
        return cls(np.eye(d, dtype=complex) / d, fact)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def is_pure(self, atol: float = 1e-10) -> bool:
        return abs(self.purity() - 1.0) < atol


def tensor_product(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """Kronecker product of two states; factorizations concatenate."""
    return DensityOperator(np.kron(a.matrix, b.matrix),
                           a.factorization.concat(b.factorization),
                           _validate=False)


def partial_trace(rho: DensityOperator, keep: Sequence[int]) -> DensityOperator:
    """Reduced state on the ``keep`` factors (original order preserved)."""
    keep = sorted(set(int(k) for k in keep))
    reduced = partial_trace_matrix(rho.matrix, rho.dims, keep)
    return DensityOperator(reduced, rho.factorization.restrict(keep),
                           _validate=False)


def entropy_of_spectrum(eigenvalues: np.ndarray,
                        psd_floor: float = tol.PSD_FLOOR) -> float:
    """Shannon entropy (nats) of a spectrum, clamping fp dust at zero.

    Eigenvalues in [-psd_floor, 0] are treated as exact zeros; anything more
    negative indicates a genuinely invalid state and raises.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    min_eig = float(eigenvalues.min()) if eigenvalues.size else 0.0
    if min_eig < -psd_floor:
        raise InvalidStateError(
            f"eigenvalue {min_eig:.3e} below -{psd_floor:.1e}; not a valid state")
    positive = eigenvalues[eigenvalues > 0.0]
    if positive.size == 0:
        return 0.0
    return float(-np.sum(positive * np.log(positive)))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """S(rho) = -tr(rho ln rho) in nats; 0 <= S <= ln(total_dim)."""
    return entropy_of_spectrum(rho.eigenvalues())


def von_neumann_entropy_matrix(matrix: np.ndarray,
                               psd_floor: float = tol.PSD_FLOOR) -> float:
    """Entropy of a raw Hermitian matrix (no trace normalization applied)."""
    return entropy_of_spectrum(np.linalg.eigvalsh(matrix), psd_floor)


def purify(rho: DensityOperator, rank_tol: float = 1e-12) -> PureState:
    """Spectral purification: ancilla dimension = rank, appended last.

    A rank-1 input would need a 1-dimensional ancilla, which factorizations
    disallow, so the ancilla is padded to dimension 2 with the extra weight
    on nothing (the |0> ancilla component carries everything).
    """
    eigenvalues, vectors = np.linalg.eigh(rho.matrix)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]
    rank = max(int(np.sum(eigenvalues > rank_tol)), 1)
    ancilla_dim = max(rank, 2)
    d = rho.factorization.total_dim
    amplitudes = np.zeros(d * ancilla_dim, dtype=complex)
    for k in range(rank):
        amplitudes += np.sqrt(eigenvalues[k]) * np.kron(vectors[:, k], _basis(ancilla_dim, k))
    amplitudes /= np.linalg.norm(amplitudes)
    fact = HilbertFactorization(rho.dims + (ancilla_dim,))
    return PureState(amplitudes, fact)


def _basis(dim: int, index: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def unitary_propagator(hamiltonian: np.ndarray, t: float,
                       hermiticity_tol: float = tol.HERMITICITY) -> np.ndarray:
    """U(t) = exp(-i H t) via spectral decomposition (hbar = 1).

    The spectral route keeps U exactly unitary to machine precision, which
    the propagator-factorization checks rely on.
    """
    hamiltonian = np.asarray(hamiltonian, dtype=complex)
    defect = float(np.max(np.abs(hamiltonian - hamiltonian.conj().T)))
    if defect > hermiticity_tol:
        raise ValueError(f"Hamiltonian hermiticity defect {defect:.3e} exceeds "
                         f"{hermiticity_tol:.1e}")
    energies, vectors = np.linalg.eigh(hamiltonian)
    phases = np.exp(-1j * energies * t)
    return (vectors * phases) @ vectors.conj().T


def apply_unitary(state: DensityOperator, unitary: np.ndarray) -> DensityOperator:
    return DensityOperator(unitary @ state.matrix @ unitary.conj().T,
                           state.factorization, _validate=False)

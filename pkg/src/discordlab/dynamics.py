"""Hamiltonian assembly, unitary evolution, GKSL open-system dynamics, and the
two scenario engines built on them.

GKSL convention: d(rho)/dt = -i [H, rho] + sum_k gamma_k (L rho L+ - {L+L, rho}/2).
Density matrices are vectorized row-major, so an operator sandwich A rho B
becomes (A kron B^T) acting on vec(rho).
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .correlations import DEFAULT_SEED, full_report, is_lazy, lii_flow
from .states import (
    DensityOperator,
    HilbertFactorization,
    PureState,
    partial_trace,
    tensor_product,
    von_neumann_entropy,
)
from .tensor_ops import embed_operator, kron_all


@dataclass(frozen=True)
class HamiltonianSpec:
    """Sum of product terms: each term is (coefficient, factor -> local op).

    Factors not mentioned by a term carry the identity. Every local operator
    must be Hermitian.
    """

    terms: tuple[tuple[float, dict[int, np.ndarray]], ...]

    def __init__(self, terms: Sequence[tuple[float, Mapping[int, np.ndarray]]]):
        frozen_terms = []
        for coeff, factors in terms:
            ops = {}
            for idx, op in factors.items():
                op = np.asarray(op, dtype=complex)
                defect = float(np.max(np.abs(op - op.conj().T)))
                if defect > tol.HERMITICITY:
                    raise ValueError(f"local operator on factor {idx} has "
                                     f"hermiticity defect {defect:.3e}")
                ops[int(idx)] = op
            frozen_terms.append((float(coeff), ops))
        object.__setattr__(self, "terms", tuple(frozen_terms))

    @classmethod
    def zero(cls) -> "HamiltonianSpec":
        return cls([])

    @classmethod
    def single(cls, coeff: float, factor: int, op: np.ndarray) -> "HamiltonianSpec":
        return cls([(coeff, {factor: op})])

    def __add__(self, other: "HamiltonianSpec") -> "HamiltonianSpec":
        return HamiltonianSpec(list(self.terms) + list(other.terms))


def assemble(spec: HamiltonianSpec,
             factorization: HilbertFactorization) -> np.ndarray:
    """Dense Hermitian matrix of the spec on the given factorization."""
    dims = factorization.dims
    total = np.zeros((factorization.total_dim,) * 2, dtype=complex)
    for coeff, factors in spec.terms:
        ops = []
        for idx in range(len(dims)):
            if idx in factors:
                op = factors[idx]
                if op.shape != (dims[idx], dims[idx]):
                    raise ValueError(f"operator on factor {idx} has shape "
                                     f"{op.shape}, expected {(dims[idx],) * 2}")
                ops.append(op)
            else:
                ops.append(np.eye(dims[idx], dtype=complex))
        total += coeff * kron_all(ops)
    return total


@dataclass(frozen=True)
class LindbladSpec:
    """GKSL generator data for the open subsystem: Hamiltonian plus jumps."""

    hamiltonian: HamiltonianSpec
    jumps: tuple[tuple[float, np.ndarray], ...]

    def __init__(self, hamiltonian: HamiltonianSpec,
                 jumps: Sequence[tuple[float, np.ndarray]] = ()):
        frozen = []
        for rate, op in jumps:
            rate = float(rate)
            if rate < 0:
                raise ValueError(f"jump rate must be nonnegative, got {rate}")
            frozen.append((rate, np.asarray(op, dtype=complex)))
        object.__setattr__(self, "hamiltonian", hamiltonian)
        object.__setattr__(self, "jumps", tuple(frozen))

    def max_rate(self) -> float:
        return max((rate for rate, _ in self.jumps), default=0.0)


def lindblad_superoperator(spec: LindbladSpec,
                           factorization: HilbertFactorization) -> np.ndarray:
    """Matrix of the GKSL generator on row-major vectorized states."""
    d = factorization.total_dim
    h = assemble(spec.hamiltonian, factorization)
    eye = np.eye(d, dtype=complex)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for rate, jump in spec.jumps:
        if jump.shape != (d, d):
            raise ValueError(f"jump operator shape {jump.shape} does not match "
                             f"dimension {d}")
        jj = jump.conj().T @ jump
        gen += rate * (np.kron(jump, jump.conj())
                       - 0.5 * (np.kron(jj, eye) + np.kron(eye, jj.T)))
    return gen


def rk4_step_matrix(generator: np.ndarray, step: float) -> np.ndarray:
    """One fixed step of classical RK4 for a linear autonomous system.

    For x' = L x this is exactly the degree-4 Taylor polynomial of exp(hL).
    """
    d2 = generator.shape[0]
    m = np.eye(d2, dtype=complex)
    power = np.eye(d2, dtype=complex)
    factorial = 1.0
    for order in range(1, 5):
        power = power @ (step * generator)
        factorial *= order
        m = m + power / factorial
    return m


def choi_matrix(superop: np.ndarray) -> np.ndarray:
    """Choi matrix of a channel given on row-major vectorized states."""
    d2 = superop.shape[0]
    d = int(round(np.sqrt(d2)))
    if d * d != d2:
        raise ValueError(f"superoperator size {d2} is not a perfect square")
    return np.ascontiguousarray(
        superop.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d2, d2))


def kraus_from_choi(choi: np.ndarray, cutoff: float = 1e-12) -> list[np.ndarray]:
    """Kraus operators from a Choi matrix (eigenvectors scaled by root weight)."""
    d2 = choi.shape[0]
    d = int(round(np.sqrt(d2)))
    eigenvalues, vectors = np.linalg.eigh(choi)
    ops = []
    for lam, vec in zip(eigenvalues, vectors.T):
        if lam > cutoff:
            ops.append(np.sqrt(lam) * vec.reshape(d, d).T)
    return ops


@dataclass(frozen=True)
class StateTrajectory:
    """States sampled on a strictly increasing time grid."""

    times: np.ndarray
    states: tuple
    diagnostics: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or len(times) != len(self.states):
            raise ValueError("one state per time point required")
        if np.any(np.diff(times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", tuple(self.states))


def time_grid(t_max: float, points: int = 200, t_min: float = 0.0) -> np.ndarray:
    if points < 2:
        raise ValueError("need at least two grid points")
    return np.linspace(t_min, t_max, points)


def evolve_unitary(state, hamiltonian, t_grid: np.ndarray) -> StateTrajectory:
    """Closed-system evolution of a DensityOperator or PureState.

    ``hamiltonian`` may be a HamiltonianSpec or an assembled matrix.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    fact = state.factorization
    if isinstance(hamiltonian, HamiltonianSpec):
        h = assemble(hamiltonian, fact)
    else:
        h = np.asarray(hamiltonian, dtype=complex)
    defect = float(np.max(np.abs(h - h.conj().T)))
    if defect > tol.HERMITICITY:
        raise ValueError(f"Hamiltonian hermiticity defect {defect:.3e}")
    energies, vectors = np.linalg.eigh(h)

    pure = isinstance(state, PureState)
    if pure:
        coeff0 = vectors.conj().T @ state.amplitudes
    else:
        rho0 = vectors.conj().T @ state.matrix @ vectors

    states = []
    for t in t_grid:
        phases = np.exp(-1j * energies * t)
        if pure:
            states.append(PureState(vectors @ (phases * coeff0), fact))
        else:
            rotated = vectors @ ((phases[:, None] * rho0 * phases.conj()[None, :])
                                 @ vectors.conj().T)
            states.append(DensityOperator(rotated, fact, _validate=False))
    return StateTrajectory(t_grid, tuple(states))


def _repair_psd(matrix: np.ndarray) -> np.ndarray:
    """Project integrator fp dust off the state: clamp spectrum, renormalize."""
    matrix = (matrix + matrix.conj().T) / 2.0
    eigenvalues, vectors = np.linalg.eigh(matrix)
    if eigenvalues[0] >= 0.0:
        return matrix / np.trace(matrix).real
    clamped = np.clip(eigenvalues, 0.0, None)
    repaired = (vectors * clamped) @ vectors.conj().T
    return repaired / np.trace(repaired).real


def evolve_lindblad(rho: DensityOperator, spec: LindbladSpec,
                    t_grid: np.ndarray) -> StateTrajectory:
    """Fixed-step RK4 integration of the vectorized GKSL generator.

    The substep honors ``step <= min(0.01 / max rate, grid spacing)`` with the
    generator's spectral norm standing in for the fastest rate (it bounds both
    the Hamiltonian and dissipative scales); an extra factor of two keeps the
    gamma = 0 runs within 1e-9 of the exact unitary flow.

    Grid-point states are checked against the trace (1e-8) and positivity
    (-1e-7) tolerances; violations raise, anything smaller is projected back
    onto the physical cone before the state is stored.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("time grid must be strictly increasing")
    fact = rho.factorization
    generator = lindblad_superoperator(spec, fact)
    rate_scale = float(np.linalg.norm(generator, 2))
    spacing = float(np.min(np.diff(t_grid)))
    step_cap = min(0.01 / max(rate_scale, 1e-12), spacing) / 2.0

    d = fact.total_dim
    vec = rho.matrix.reshape(-1).astype(complex)
    states = [rho]
    trace_defects = [0.0]
    min_eigs = [float(np.linalg.eigvalsh(rho.matrix)[0])]
    for k in range(len(t_grid) - 1):
        delta = t_grid[k + 1] - t_grid[k]
        n_sub = max(1, int(np.ceil(delta / step_cap)))
        step = rk4_step_matrix(generator, delta / n_sub)
        for _ in range(n_sub):
            vec = step @ vec
        matrix = vec.reshape(d, d)
        trace_defect = float(abs(np.trace(matrix).real - 1.0))
        if trace_defect > tol.LINDBLAD_TRACE:
            raise RuntimeError(f"trace defect {trace_defect:.3e} exceeds "
                               f"{tol.LINDBLAD_TRACE:.1e} at t={t_grid[k + 1]:g}")
        min_eig = float(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)[0])
        if min_eig < -tol.LINDBLAD_PSD:
            raise RuntimeError(f"positivity breach {min_eig:.3e} at "
                               f"t={t_grid[k + 1]:g}; reduce the step size")
        states.append(DensityOperator(_repair_psd(matrix), fact, _validate=False))
        trace_defects.append(trace_defect)
        min_eigs.append(min_eig)
    return StateTrajectory(t_grid, tuple(states),
                           {"trace_defect": np.array(trace_defects),
                            "min_eigenvalue": np.array(min_eigs)})


CSV_COLUMNS = ["t", "S_S", "S_Sp", "S_E", "I", "D_left", "D_right",
               "lazy_left", "lazy_right", "lii_total"]


@dataclass(frozen=True)
class TimeSeries:
    """Per-time correlation records with the fixed CSV column set."""

    times: np.ndarray
    columns: dict[str, np.ndarray]

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if np.any(np.diff(times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        object.__setattr__(self, "times", times)
        cols = {}
        for name in CSV_COLUMNS[1:]:
            values = np.asarray(self.columns.get(name,
                                                 np.full(len(times), np.nan)),
                                dtype=float)
            if len(values) != len(times):
                raise ValueError(f"column {name} length mismatch")
            cols[name] = values
        object.__setattr__(self, "columns", cols)

    def maxima(self) -> dict[str, float]:
        out = {}
        for name, values in self.columns.items():
            finite = values[np.isfinite(values)]
            out[name] = float(np.max(finite)) if finite.size else float("nan")
        return out

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for k, t in enumerate(self.times):
            cells = [repr(float(t))]
            cells += [repr(float(self.columns[name][k])) for name in CSV_COLUMNS[1:]]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def gnuplot_block(self, column: str) -> str:
        """Two-column plain text (t value) for one series."""
        values = self.columns[column]
        return "\n".join(f"{repr(float(t))} {repr(float(v))}"
                         for t, v in zip(self.times, values)) + "\n"


@dataclass(frozen=True)
class MarkovianScenario:
    """Closed subsystem S (unitary) next to open subsystem S' (GKSL)."""

    rho_s: DensityOperator
    rho_sp: DensityOperator
    h_s: HamiltonianSpec
    lindblad: LindbladSpec
    t_grid: np.ndarray
    seed: int = DEFAULT_SEED


def run_markovian_classicality(scenario: MarkovianScenario) -> TimeSeries:
    """Evolve S and S' independently, compose the product, report correlations.

    S evolves unitarily under its own Hamiltonian, S' under the GKSL spec;
    the joint state at each grid time is their tensor product, on which both
    one-way discords, the mutual information, and the laziness commutator
    norms are evaluated.
    """
    t_grid = np.asarray(scenario.t_grid, dtype=float)
    traj_s = evolve_unitary(scenario.rho_s, scenario.h_s, t_grid)
    traj_sp = evolve_lindblad(scenario.rho_sp, scenario.lindblad, t_grid)
    n_s = scenario.rho_s.factorization.n_factors
    n_sp = scenario.rho_sp.factorization.n_factors
    cut = (list(range(n_s)), list(range(n_s, n_s + n_sp)))

    records = {name: [] for name in ("S_S", "S_Sp", "I", "D_left", "D_right",
                                     "lazy_left", "lazy_right")}
    for state_s, state_sp in zip(traj_s.states, traj_sp.states):
        joint = tensor_product(state_s, state_sp)
        report = full_report(joint, cut, seed=scenario.seed)
        _, lazy_left = is_lazy(joint, cut[0])
        _, lazy_right = is_lazy(joint, cut[1])
        records["S_S"].append(von_neumann_entropy(state_s))
        records["S_Sp"].append(von_neumann_entropy(state_sp))
        records["I"].append(report.mutual_info)
        records["D_left"].append(report.d_left)
        records["D_right"].append(report.d_right)
        records["lazy_left"].append(lazy_left)
        records["lazy_right"].append(lazy_right)
    return TimeSeries(t_grid, {k: np.array(v) for k, v in records.items()})


@dataclass(frozen=True)
class DisdScenario:
    """Tripartite pure-state model with a dominant S'-E interaction.

    ``interaction_spe`` (unit shape, physical strength ``strength_spe``) must
    preserve the S' seed state ``p_sp`` in the sense checked by
    :func:`robustness_check`; ``interaction_ssp`` (strength ``coupling_ssp``)
    is the weak coupling whose ratio to the strong one controls how far the
    trajectory departs from a product of the three subsystems.
    """

    dims: tuple[int, int, int]
    psi_s: np.ndarray
    p_sp: np.ndarray
    chi_e: np.ndarray
    h_s: np.ndarray
    h_sp: np.ndarray
    h_e: np.ndarray
    interaction_ssp: np.ndarray
    coupling_ssp: float
    interaction_spe: np.ndarray
    strength_spe: float
    t_grid: np.ndarray
    seed: int = DEFAULT_SEED

    @property
    def coupling_ratio(self) -> float:
        if self.strength_spe <= 0:
            raise ValueError("strong interaction strength must be positive")
        return self.coupling_ssp / self.strength_spe


def robustness_check(h_spe: np.ndarray, p_state: np.ndarray,
                     chi_state: np.ndarray) -> tuple[bool, float]:
    """Whether H (|p> (x) |chi>) stays of the form |p> (x) (vector).

    The residual is the norm left after projecting the S' part of the image
    onto |p>.
    """
    p_state = np.asarray(p_state, dtype=complex).reshape(-1)
    chi_state = np.asarray(chi_state, dtype=complex).reshape(-1)
    d_sp, d_e = len(p_state), len(chi_state)
    h_spe = np.asarray(h_spe, dtype=complex)
    if h_spe.shape != (d_sp * d_e,) * 2:
        raise ValueError(f"interaction shape {h_spe.shape} does not match "
                         f"dimensions ({d_sp}, {d_e})")
    image = (h_spe @ np.kron(p_state, chi_state)).reshape(d_sp, d_e)
    chi_p = p_state.conj() @ image
    residual = float(np.linalg.norm(image - np.outer(p_state, chi_p)))
    return residual < tol.ROBUSTNESS_RESIDUAL, residual


def run_disd(scenario: DisdScenario) -> TimeSeries:
    """Exact unitary evolution of the tripartite model, with correlations.

    Preconditions: coupling ratio at most 0.1 and an initial S' state that
    passes the robustness check against the strong interaction.
    """
    eps = scenario.coupling_ratio
    if eps > 0.1:
        raise ValueError(f"coupling ratio {eps:.3g} exceeds 0.1; the weak "
                         "coupling must stay perturbative")
    robust, residual = robustness_check(
        scenario.strength_spe * scenario.interaction_spe,
        scenario.p_sp, scenario.chi_e)
    if not robust:
        raise ValueError(f"robustness residual {residual:.3e} exceeds "
                         f"{tol.ROBUSTNESS_RESIDUAL:.1e}")

    fact = HilbertFactorization(scenario.dims)
    dims = fact.dims
    h = (embed_operator(np.asarray(scenario.h_s, dtype=complex), dims, [0])
         + embed_operator(np.asarray(scenario.h_sp, dtype=complex), dims, [1])
         + embed_operator(np.asarray(scenario.h_e, dtype=complex), dims, [2])
         + scenario.coupling_ssp * embed_operator(
             np.asarray(scenario.interaction_ssp, dtype=complex), dims, [0, 1])
         + scenario.strength_spe * embed_operator(
             np.asarray(scenario.interaction_spe, dtype=complex), dims, [1, 2]))

    psi0 = PureState(np.kron(np.kron(
        np.asarray(scenario.psi_s, dtype=complex).reshape(-1),
        np.asarray(scenario.p_sp, dtype=complex).reshape(-1)),
        np.asarray(scenario.chi_e, dtype=complex).reshape(-1)), fact)

    t_grid = np.asarray(scenario.t_grid, dtype=float)
    trajectory = evolve_unitary(psi0, h, t_grid)
    records = {name: [] for name in ("S_S", "S_Sp", "S_E", "I", "D_left",
                                     "D_right", "lazy_left", "lazy_right",
                                     "lii_total")}
    for psi in trajectory.states:
        rho = psi.to_density()
        rho_ssp = partial_trace(rho, [0, 1])
        report = full_report(rho_ssp, ([0], [1]), seed=scenario.seed)
        _, lazy_left = is_lazy(rho_ssp, [0])
        _, lazy_right = is_lazy(rho_ssp, [1])
        flow = lii_flow(rho, ([0], [1], [2]), seed=scenario.seed)
        records["S_S"].append(von_neumann_entropy(partial_trace(rho, [0])))
        records["S_Sp"].append(von_neumann_entropy(partial_trace(rho, [1])))
        records["S_E"].append(von_neumann_entropy(partial_trace(rho, [2])))
        records["I"].append(report.mutual_info)
        records["D_left"].append(report.d_left)
        records["D_right"].append(report.d_right)
        records["lazy_left"].append(lazy_left)
        records["lazy_right"].append(lazy_right)
        records["lii_total"].append(flow.total)
    return TimeSeries(t_grid, {k: np.array(v) for k, v in records.items()})

"""Mutual information, classical correlations, discord, and classicality checks.

Direction convention: every API names the measured party explicitly. For a
cut ``(A, B)``, ``measured="right"`` computes the one-way quantities where
the projective measurement acts on B, i.e. J(A|B) = S(A) - inf_bases of the
average post-measurement entropy of A, and D(A|B) = I(A:B) - J(A|B).
Measurements are rank-1 orthogonal projector sets (no POVMs).
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from . import tolerances as tol
from .states import (
    DensityOperator,
    partial_trace,
    von_neumann_entropy,
)
from .tensor_ops import embed_operator, split_bipartition

DEFAULT_SEED = 987654321
OPTIMIZER_CAP = 16
QUBIT_GRID_N = 32
QUBIT_GRID_TOP_SEEDS = 3
NM_MAXITER_QUBIT = 500
N_RESTARTS = 20
NM_TOL = 1e-9

Cut = tuple[Sequence[int], Sequence[int]]


class InvalidCutError(ValueError):
    """The factor groups do not form a valid partition."""


def _validate_partition(dims: Sequence[int],
                        groups: Sequence[Sequence[int]]) -> list[list[int]]:
    groups = [list(int(i) for i in g) for g in groups]
    flat = [i for g in groups for i in g]
    if any(len(g) == 0 for g in groups):
        raise InvalidCutError("every group must be nonempty")
    if sorted(flat) != list(range(len(dims))):
        raise InvalidCutError(
            f"groups {groups} do not partition factors 0..{len(dims) - 1}")
    return groups


def _group_dim(dims: Sequence[int], group: Sequence[int]) -> int:
    return int(np.prod([dims[i] for i in group]))


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-1 orthonormal measurement on one subsystem.

    ``vectors[:, i]`` is the i-th measurement vector; the associated
    projectors are their outer products.
    """

    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=complex)
        if vectors.ndim != 2 or vectors.shape[0] != vectors.shape[1]:
            raise ValueError(f"expected a square vector matrix, got {vectors.shape}")
        vectors = np.ascontiguousarray(vectors)
        vectors.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)

    @property
    def subsystem_dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def projectors(self) -> list[np.ndarray]:
        return [np.outer(self.vectors[:, i], self.vectors[:, i].conj())
                for i in range(self.subsystem_dim)]

    def completeness_defect(self) -> float:
        gram = self.vectors.conj().T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(self.subsystem_dim))))

    def validate(self, atol: float = 1e-10) -> None:
        defect = self.completeness_defect()
        if defect > atol:
            raise ValueError(f"basis orthonormality defect {defect:.3e} > {atol:.1e}")

    @classmethod
    def computational(cls, dim: int) -> "MeasurementBasis":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def from_bloch_angles(cls, theta: float, phi: float) -> "MeasurementBasis":
        return cls(_bloch_vectors(np.array([theta]), np.array([phi]))[0])


def _bloch_vectors(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Batch of qubit bases from Bloch angles, shape (G, 2, 2)."""
    c = np.cos(thetas / 2.0)
    s = np.sin(thetas / 2.0)
    phase = np.exp(1j * phis)
    out = np.empty((thetas.shape[0], 2, 2), dtype=complex)
    out[:, 0, 0] = c
    out[:, 1, 0] = phase * s
    out[:, 0, 1] = -np.conj(phase) * s
    out[:, 1, 1] = c
    return out


def _apply_givens(u: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Right-multiply by a product of complex plane rotations, one
    (theta, phi) pair per coordinate pair (i, j); O(d) column updates."""
    u = np.array(u, dtype=complex)
    dim = u.shape[0]
    k = 0
    for i in range(dim):
        for j in range(i + 1, dim):
            theta, phi = angles[k], angles[k + 1]
            k += 2
            c, s = np.cos(theta), np.sin(theta)
            phase = np.exp(1j * phi)
            col_i = u[:, i].copy()
            col_j = u[:, j]
            u[:, i] = c * col_i + s * phase * col_j
            u[:, j] = -s * np.conj(phase) * col_i + c * col_j
    return u


def _givens_unitary(dim: int, angles: np.ndarray) -> np.ndarray:
    """Product of complex plane rotations, one (theta, phi) pair per (i, j)."""
    return _apply_givens(np.eye(dim, dtype=complex), angles)


def _haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _split_for_measurement(rho: DensityOperator, cut: Cut,
                           measured: str) -> tuple[np.ndarray, int, int, list[int]]:
    """Blocks (dK, dM, dK, dM) with the measured group last, plus group info."""
    left, right = _validate_partition(rho.dims, cut)
    if measured == "left":
        kept, meas = right, left
    elif measured == "right":
        kept, meas = left, right
    else:
        raise ValueError(f"measured must be 'left' or 'right', got {measured!r}")
    blocks = split_bipartition(rho.matrix, rho.dims, kept, meas)
    return blocks, _group_dim(rho.dims, kept), _group_dim(rho.dims, meas), kept


def mutual_information(rho: DensityOperator, cut: Cut) -> float:
    """I(A:B) = S(A) + S(B) - S(A,B) across the cut, in nats."""
    left, right = _validate_partition(rho.dims, cut)
    s_left = von_neumann_entropy(partial_trace(rho, left))
    s_right = von_neumann_entropy(partial_trace(rho, right))
    s_joint = von_neumann_entropy(rho)
    return s_left + s_right - s_joint


def conditional_entropy(rho: DensityOperator, cut: Cut, basis: MeasurementBasis,
                        measured: str = "right") -> float:
    """Average entropy of the unmeasured side after measuring ``basis``."""
    blocks, _, d_meas, _ = _split_for_measurement(rho, cut, measured)
    if basis.subsystem_dim != d_meas:
        raise ValueError(f"basis dimension {basis.subsystem_dim} does not match "
                         f"measured side dimension {d_meas}")
    return kernels.conditional_entropy_single(blocks, np.asarray(basis.vectors),
                                              tol.PROBABILITY_CUTOFF)


def _minimize_conditional_entropy(blocks: np.ndarray, d_meas: int,
                                  seed: int) -> tuple[float, MeasurementBasis]:
    if d_meas == 2:
        return _minimize_qubit(blocks)
    return _minimize_restarts(blocks, d_meas, seed)


def _bloch_seed_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance on the basis manifold: (theta, phi) and its antipode
    (pi - theta, phi + pi) describe the same measurement."""
    def direct(x, y):
        dphi = abs(x[1] - y[1]) % (2.0 * np.pi)
        dphi = min(dphi, 2.0 * np.pi - dphi)
        return float(np.hypot(x[0] - y[0], dphi))
    antipode = np.array([np.pi - b[0], b[1] + np.pi])
    return min(direct(a, b), direct(a, antipode))


def _minimize_qubit(blocks: np.ndarray) -> tuple[float, MeasurementBasis]:
    """32x32 Bloch-angle grid seed + Nelder-Mead refinement from the top seeds.

    Seeds are deduplicated spatially so the refinements target distinct
    basins instead of grid neighbors of the same minimum.
    """
    thetas = np.linspace(0.0, np.pi, QUBIT_GRID_N)
    phis = np.linspace(0.0, 2.0 * np.pi, QUBIT_GRID_N, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    angles = np.column_stack([tt.ravel(), pp.ravel()])
    values = kernels.conditional_entropy_batch(
        blocks, _bloch_vectors(angles[:, 0], angles[:, 1]), tol.PROBABILITY_CUTOFF)

    def objective(x: np.ndarray) -> float:
        return kernels.conditional_entropy_bloch(blocks, x[0], x[1],
                                                 tol.PROBABILITY_CUTOFF)

    order = np.argsort(values)
    seeds: list[np.ndarray] = []
    for idx in order:
        if values[idx] > values[order[0]] + 0.05:
            break
        candidate = angles[idx]
        if all(_bloch_seed_distance(candidate, seen) > 0.3 for seen in seeds):
            seeds.append(candidate)
        if len(seeds) == QUBIT_GRID_TOP_SEEDS:
            break

    best_value = float(values[order[0]])
    best_angles = angles[order[0]]
    for seed_angles in seeds:
        result = minimize(objective, seed_angles, method="Nelder-Mead",
                          options={"xatol": NM_TOL, "fatol": NM_TOL,
                                   "maxiter": NM_MAXITER_QUBIT})
        if result.fun < best_value:
            best_value = float(result.fun)
            best_angles = np.asarray(result.x, dtype=float)
    basis = MeasurementBasis.from_bloch_angles(best_angles[0], best_angles[1])
    # report exactly what the returned basis achieves
    value = kernels.conditional_entropy_single(blocks, np.asarray(basis.vectors),
                                               tol.PROBABILITY_CUTOFF)
    return min(value, best_value), basis


def _minimize_restarts(blocks: np.ndarray, d_meas: int,
                       seed: int) -> tuple[float, MeasurementBasis]:
    """Random-restart search over Haar seeds composed with Givens rotations.

    The simplex tolerance pair trades parameter precision for objective
    precision: near a quadratic minimum an x-spread of 1e-6 pins the value
    to ~1e-12, so the looser xatol terminates restarts early without losing
    the accuracy the value tolerance demands.
    """
    rng = np.random.default_rng(seed)
    n_params = d_meas * (d_meas - 1)
    maxiter = max(500, 200 * n_params)
    x0 = np.zeros(n_params)
    # a simplex spanning ~0.35 rad per rotation: the scipy default around a
    # zero start is microscopic and wastes the whole budget expanding
    simplex = np.vstack([x0, x0 + 0.35 * np.eye(n_params)])
    options = {"xatol": 1e-2, "fatol": 1e-11, "maxiter": maxiter,
               "initial_simplex": simplex}

    def objective_for(seed_unitary: np.ndarray):
        def objective(x: np.ndarray) -> float:
            basis = _apply_givens(seed_unitary, x)
            return kernels.conditional_entropy_single(blocks, basis,
                                                      tol.PROBABILITY_CUTOFF)
        return objective

    best_value = np.inf
    best_unitary = np.eye(d_meas, dtype=complex)
    best_x = x0
    for _ in range(N_RESTARTS):
        seed_unitary = _haar_unitary(rng, d_meas)
        objective = objective_for(seed_unitary)
        result = minimize(objective, x0, method="Nelder-Mead", options=options)
        if result.fun < best_value:
            best_value = float(result.fun)
            best_unitary = seed_unitary
            best_x = np.asarray(result.x, dtype=float)
    # polish from the best restart
    objective = objective_for(best_unitary)
    result = minimize(objective, best_x, method="Nelder-Mead",
                      options={"xatol": 1e-6, "fatol": 1e-12, "maxiter": 2 * maxiter,
                               "initial_simplex": np.vstack(
                                   [best_x, best_x + 0.02 * np.eye(n_params)])})
    if result.fun < best_value:
        best_value = float(result.fun)
        best_x = np.asarray(result.x, dtype=float)
    basis = MeasurementBasis(_apply_givens(best_unitary, best_x))
    value = kernels.conditional_entropy_single(blocks, np.asarray(basis.vectors),
                                               tol.PROBABILITY_CUTOFF)
    return min(value, best_value), basis


def classical_correlations(rho: DensityOperator, cut: Cut, measured: str = "right",
                           seed: int = DEFAULT_SEED) -> tuple[float, MeasurementBasis]:
    """J = S(unmeasured) - inf over bases of the average conditional entropy.

    The returned basis achieves the returned value; the optimizer never
    reports a worse infimum than any basis it sampled.
    """
    blocks, _, d_meas, kept = _split_for_measurement(rho, cut, measured)
    if d_meas > OPTIMIZER_CAP:
        raise ValueError(f"measured side dimension {d_meas} exceeds optimizer "
                         f"cap {OPTIMIZER_CAP}")
    s_kept = von_neumann_entropy(partial_trace(rho, kept))
    ce_min, basis = _minimize_conditional_entropy(blocks, d_meas, seed)
    return s_kept - ce_min, basis


def discord(rho: DensityOperator, cut: Cut, measured: str = "right",
            seed: int = DEFAULT_SEED) -> float:
    """One-way quantum discord D = I - J with measurement on ``measured``."""
    j, _ = classical_correlations(rho, cut, measured, seed)
    return mutual_information(rho, cut) - j


def discord_oracle_qubit(rho: DensityOperator, cut: Cut, measured: str = "right",
                         grid_n: int = 256) -> float:
    """Exhaustive Bloch-angle grid oracle for a qubit measured side.

    Upper-bounds the true discord infimum; independent of the optimizer path
    (no refinement, pure enumeration over grid_n^2 bases).
    """
    blocks, _, d_meas, kept = _split_for_measurement(rho, cut, measured)
    if d_meas != 2:
        raise ValueError(f"grid oracle requires a qubit measured side, got "
                         f"dimension {d_meas}")
    thetas = np.linspace(0.0, np.pi, grid_n)
    phis = np.linspace(0.0, 2.0 * np.pi, grid_n, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = kernels.conditional_entropy_batch(
        blocks, _bloch_vectors(tt.ravel(), pp.ravel()), tol.PROBABILITY_CUTOFF)
    s_kept = von_neumann_entropy(partial_trace(rho, kept))
    j_grid = s_kept - float(np.min(values))
    return mutual_information(rho, cut) - j_grid


@dataclass(frozen=True)
class DiscordReport:
    """Two-way correlation summary for one cut.

    ``*_left`` quantities measure the left group of the cut; ``*_right``
    measure the right group. Classification thresholds: zero discord below
    ``discord_zero`` in both directions makes the state CC, and additionally
    mutual information below ``mutual_info_zero`` makes it a product state.
    """

    mutual_info: float
    j_left: float
    j_right: float
    d_left: float
    d_right: float
    optimal_basis_left: MeasurementBasis
    optimal_basis_right: MeasurementBasis
    classification: str
    seed: int

    def to_jsonable(self) -> dict:
        from .serialize import matrix_to_json
        return {
            "mutual_info": self.mutual_info,
            "j_left": self.j_left,
            "j_right": self.j_right,
            "d_left": self.d_left,
            "d_right": self.d_right,
            "optimal_basis_left": matrix_to_json(self.optimal_basis_left.vectors),
            "optimal_basis_right": matrix_to_json(self.optimal_basis_right.vectors),
            "classification": self.classification,
            "seed": self.seed,
        }


def full_report(rho: DensityOperator, cut: Cut, seed: int = DEFAULT_SEED,
                discord_zero: float = tol.DISCORD_ZERO,
                mutual_info_zero: float = tol.MUTUAL_INFO_ZERO) -> DiscordReport:
    """Mutual information plus J, D, and optimal bases for both directions."""
    info = mutual_information(rho, cut)
    j_left, basis_left = classical_correlations(rho, cut, "left", seed)
    j_right, basis_right = classical_correlations(rho, cut, "right", seed)
    d_left = info - j_left
    d_right = info - j_right
    if max(d_left, d_right) < discord_zero:
        classification = "product" if info < mutual_info_zero else "CC"
    elif d_left < discord_zero:
        classification = "one-way-classical-left"
    elif d_right < discord_zero:
        classification = "one-way-classical-right"
    else:
        classification = "discordant"
    return DiscordReport(info, j_left, j_right, d_left, d_right,
                         basis_left, basis_right, classification, seed)


@dataclass(frozen=True)
class LiiFlowResult:
    """Locally inaccessible information flow across a tripartition.

    ``terms`` follows the convention that each pair discord D(X|Y) measures
    the conditioning party Y: (D(g1|g0), D(g2|g1), D(g0|g2)). The
    ``reversed_terms`` measure the other party of each pair instead.
    """

    total: float
    terms: tuple[float, float, float]
    reversed_terms: tuple[float, float, float]


def _pair_discord(rho: DensityOperator, group_x: Sequence[int],
                  group_y: Sequence[int], seed: int) -> tuple[float, float]:
    """(D(X|Y measured), D(Y|X measured)) on the reduced pair state."""
    keep = sorted(list(group_x) + list(group_y))
    reduced = partial_trace(rho, keep)
    remap = {orig: new for new, orig in enumerate(keep)}
    cut = ([remap[i] for i in group_x], [remap[i] for i in group_y])
    d_measure_y = discord(reduced, cut, measured="right", seed=seed)
    d_measure_x = discord(reduced, cut, measured="left", seed=seed)
    return d_measure_y, d_measure_x


def lii_flow(rho: DensityOperator,
             tripartition: Sequence[Sequence[int]] | None = None,
             seed: int = DEFAULT_SEED) -> LiiFlowResult:
    """Sum of pairwise one-way discords around a tripartition (g0, g1, g2).

    The three terms are D(g1|g0), D(g2|g1), D(g0|g2), each measuring the
    conditioning party.
    """
    if tripartition is None:
        if rho.factorization.n_factors != 3:
            raise InvalidCutError("state is not tripartite; pass an explicit "
                                  "three-group tripartition")
        tripartition = ([0], [1], [2])
    groups = _validate_partition(rho.dims, tripartition)
    if len(groups) != 3:
        raise InvalidCutError(f"need exactly three groups, got {len(groups)}")
    g0, g1, g2 = groups
    t0, r0 = _pair_discord(rho, g1, g0, seed)
    t1, r1 = _pair_discord(rho, g2, g1, seed)
    t2, r2 = _pair_discord(rho, g0, g2, seed)
    terms = (t0, t1, t2)
    return LiiFlowResult(float(sum(terms)), terms, (r0, r1, r2))


def is_lazy(rho: DensityOperator, factor_group: Sequence[int],
            atol: float = tol.LAZY_COMMUTATOR) -> tuple[bool, float]:
    """Whether [rho_A (x) I, rho] vanishes for the group A (Frobenius norm)."""
    group = sorted(set(int(i) for i in factor_group))
    if not group or len(group) >= rho.factorization.n_factors:
        raise ValueError("factor group must be a nonempty strict subset")
    marginal = partial_trace(rho, group)
    extended = embed_operator(marginal.matrix, rho.dims, group)
    commutator = extended @ rho.matrix - rho.matrix @ extended
    norm = float(np.linalg.norm(commutator))
    return norm < atol, norm


def c_classicality_check(rho_a: DensityOperator, rho_b: DensityOperator,
                         atol: float = tol.LAZY_COMMUTATOR) -> tuple[bool, float]:
    """C-criterion for a product pair: conditioning B on |0> must leave A fixed.

    Builds rho_A (x) rho_B, conditions the B side on |0><0|, renormalizes,
    and reports the commutator of the result with rho_A.
    """
    joint = np.kron(rho_a.matrix, rho_b.matrix)
    d_a = rho_a.factorization.total_dim
    d_b = rho_b.factorization.total_dim
    return _c_check_on_blocks(joint.reshape(d_a, d_b, d_a, d_b),
                              rho_a.matrix, atol)


def c_classicality_check_joint(rho: DensityOperator, cut: Cut,
                               atol: float = tol.LAZY_COMMUTATOR) -> tuple[bool, float]:
    """C-criterion on an arbitrary (possibly correlated) joint state."""
    left, right = _validate_partition(rho.dims, cut)
    blocks = split_bipartition(rho.matrix, rho.dims, left, right)
    marginal = partial_trace(rho, left)
    return _c_check_on_blocks(blocks, marginal.matrix, atol)


def _c_check_on_blocks(blocks: np.ndarray, rho_a: np.ndarray,
                       atol: float) -> tuple[bool, float]:
    conditioned = np.ascontiguousarray(blocks[:, 0, :, 0])
    probability = float(np.trace(conditioned).real)
    if probability <= 1e-12:
        raise ValueError("conditioning outcome |0> has probability "
                         f"{probability:.3e}; check is undefined")
    conditioned = conditioned / probability
    commutator = rho_a @ conditioned - conditioned @ rho_a
    norm = float(np.linalg.norm(commutator))
    return norm < atol, norm

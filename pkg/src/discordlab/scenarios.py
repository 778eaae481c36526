"""Pre-built experiment bundles that wire the library into pass/fail verdicts.

Each demo builds its states, evaluates a fixed list of named checks against
the tolerance table, and returns a :class:`ScenarioResult` whose attachments
(time series, structure tables) serialize byte-identically for a given seed.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .correlations import (
    DEFAULT_SEED,
    discord,
    full_report,
    lii_flow,
    mutual_information,
)
from .dynamics import (
    DisdScenario,
    HamiltonianSpec,
    LindbladSpec,
    MarkovianScenario,
    TimeSeries,
    robustness_check,
    run_disd,
    run_markovian_classicality,
    time_grid,
)
from .operators import SIGMA_MINUS, SIGMA_X, SIGMA_Z
from .states import (
    DensityOperator,
    HilbertFactorization,
    PureState,
    partial_trace,
    tensor_product,
    von_neumann_entropy,
)
from .structures import Grouping, regroup, structure_report, ungroup


@dataclass(frozen=True)
class CheckVerdict:
    """One named check: measured value against a threshold.

    ``unit`` is display metadata only ("nats" values can be rescaled to bits
    by the CLI); pass/fail always uses the raw value.
    """

    name: str
    passed: bool
    value: float
    threshold: float | tuple[float, float]
    comparator: str  # "<", "<=", or "range"
    unit: str = ""

    def to_jsonable(self) -> dict:
        threshold = (list(self.threshold) if isinstance(self.threshold, tuple)
                     else self.threshold)
        return {"name": self.name, "passed": bool(self.passed),
                "value": self.value, "threshold": threshold,
                "comparator": self.comparator, "unit": self.unit}


def check_below(name: str, value: float, threshold: float,
                unit: str = "") -> CheckVerdict:
    return CheckVerdict(name, bool(value < threshold), float(value),
                        float(threshold), "<", unit)


def check_at_most(name: str, value: float, threshold: float,
                  unit: str = "") -> CheckVerdict:
    return CheckVerdict(name, bool(value <= threshold), float(value),
                        float(threshold), "<=", unit)


def check_in_range(name: str, value: float, low: float, high: float,
                   unit: str = "") -> CheckVerdict:
    return CheckVerdict(name, bool(low <= value <= high), float(value),
                        (float(low), float(high)), "range", unit)


@dataclass(frozen=True)
class ScenarioResult:
    """Named verdict bundle plus serializable attachments."""

    name: str
    seed: int
    checks: tuple[CheckVerdict, ...]
    attachments: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_jsonable(self, tolerance_overrides: dict | None = None) -> dict:
        return {
            "scenario": self.name,
            "seed": self.seed,
            "passed": self.passed,
            "tolerance_overrides": tolerance_overrides or {},
            "checks": [check.to_jsonable() for check in self.checks],
            "attachments": sorted(self.attachments),
        }


def _tol(table: dict[str, float] | None) -> dict[str, float]:
    return table if table is not None else tolerances.resolve()


# ---------------------------------------------------------------------------
# Structure relativity: spectator qubit next to a maximally entangled pair
# ---------------------------------------------------------------------------

def teleportation_structure_demo(theta: float = 0.7, seed: int = DEFAULT_SEED,
                                 tol_table: dict | None = None) -> ScenarioResult:
    """Spectator-qubit state: correlations depend on the chosen grouping.

    The three-qubit pure state |phi>_1 (x) |Phi+>_23 carries no correlations
    across 1 | 23, while the regrouped 12 | 3 split is maximally discordant.
    """
    table = _tol(tol_table)
    phi = PureState.from_amplitudes([np.cos(theta), np.sin(theta)], [2])
    bell = PureState.from_amplitudes([1, 0, 0, 1], [2, 2])
    psi = phi.tensor(bell)
    rho = psi.to_density()

    checks = [
        check_below("spectator_mutual_info",
                    mutual_information(rho, ([0], [1, 2])),
                    table["mutual_info_zero"], unit="nats"),
        check_below("spectator_discord_measured_pair",
                    abs(discord(rho, ([0], [1, 2]), measured="right", seed=seed)),
                    table["discord_zero"], unit="nats"),
        check_below("spectator_discord_measured_single",
                    abs(discord(rho, ([0], [1, 2]), measured="left", seed=seed)),
                    table["discord_zero"], unit="nats"),
    ]

    grouping = Grouping([[0, 1], [2]], labels=["12", "3"])
    grouped = regroup(rho, grouping)
    d_pair = discord(grouped, ([0], [1]), measured="right", seed=seed)
    checks.append(check_below("pair_discord_ln2_gap", abs(d_pair - np.log(2.0)),
                              table["discord_match"], unit="nats"))

    roundtrip = ungroup(grouped, grouping, rho.factorization)
    exact = float(np.max(np.abs(roundtrip.matrix - rho.matrix)))
    checks.append(check_at_most("regroup_roundtrip_exact", exact, 0.0))

    spectrum_drift = float(np.max(np.abs(
        np.sort(np.linalg.eigvalsh(grouped.matrix))
        - np.sort(np.linalg.eigvalsh(rho.matrix)))))
    checks.append(check_below("regroup_spectrum_drift", spectrum_drift, 1e-12))

    report = structure_report(rho, [
        Grouping([[0], [1, 2]], labels=["1", "23"]),
        Grouping([[0, 1], [2]], labels=["12", "3"]),
    ], seed=seed)
    return ScenarioResult("teleportation", seed, tuple(checks),
                          {"structures": report})


# ---------------------------------------------------------------------------
# Discord saturation on the locked pair
# ---------------------------------------------------------------------------

def saturation_demo(amplitudes: Sequence[complex] | None = None,
                    rho_s: DensityOperator | None = None,
                    seed: int = DEFAULT_SEED,
                    tol_table: dict | None = None) -> ScenarioResult:
    """Mixed spectator (x) entangled pure pair: measured-environment discord
    saturates at the environment entropy while the spectator stays decoupled.
    """
    table = _tol(tol_table)
    if amplitudes is None:
        amplitudes = np.array([1.0, 1.0]) / np.sqrt(2.0)
    amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"amplitude vector norm {norm} is not 1")
    if rho_s is None:
        rho_s = DensityOperator(np.array([[0.65, 0.1], [0.1, 0.35]], dtype=complex),
                                HilbertFactorization([2]))

    dim = len(amplitudes)
    pair_vec = np.zeros(dim * dim, dtype=complex)
    for i, c in enumerate(amplitudes):
        pair_vec[i * dim + i] = c
    pair = PureState(pair_vec, HilbertFactorization([dim, dim]))
    rho = tensor_product(rho_s, pair.to_density())

    weights = np.abs(amplitudes) ** 2
    positive = weights[weights > 0]
    s_env = float(-np.sum(positive * np.log(positive)))

    d_saturated = discord(rho, ([0, 1], [2]), measured="right", seed=seed)
    flow = lii_flow(rho, ([0], [1], [2]), seed=seed)
    checks = [
        check_in_range("saturated_discord_value", d_saturated,
                       s_env - table["discord_match"],
                       s_env + table["discord_match"], unit="nats"),
        check_below("saturation_gap", abs(d_saturated - s_env),
                    table["discord_match"], unit="nats"),
        check_below("internal_mutual_info",
                    mutual_information(partial_trace(rho, [0, 1]), ([0], [1])),
                    table["mutual_info_zero"], unit="nats"),
        check_below("lii_first_term", abs(flow.terms[0]), table["discord_match"]),
        check_below("lii_locked_term_gap", abs(flow.terms[1] - s_env),
                    table["discord_match"]),
        check_below("lii_third_term", abs(flow.terms[2]), table["discord_match"]),
    ]
    return ScenarioResult("saturation", seed, tuple(checks))


# ---------------------------------------------------------------------------
# Near-product tripartite entropy bound
# ---------------------------------------------------------------------------

def lemma2_demo(epsilon: float = 0.04,
                weights: Sequence[float] | None = None,
                seed: int = DEFAULT_SEED,
                tol_table: dict | None = None) -> ScenarioResult:
    """Entropy of a slightly entangled bipartition against its analytic cap.

    Builds sqrt(1-eps)|phi>|chi> + sqrt(eps) sum_i sqrt(p_i)|i>|i> with exact
    orthogonality and checks the subsystem entropy against
    eps * (1 - ln eps - ln p_max), plus the quadratic-gap refinement for
    uniform weights.
    """
    table = _tol(tol_table)
    if not 0.0 < epsilon <= 0.1:
        raise ValueError(f"epsilon must lie in (0, 0.1], got {epsilon}")
    if weights is None:
        weights = np.full(4, 0.25)
    weights = np.asarray(weights, dtype=float)
    if abs(float(weights.sum()) - 1.0) > 1e-10:
        raise ValueError("weights must sum to 1")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")

    n_tail = len(weights)
    dim_sp = max(n_tail, 2)
    dim_e = n_tail + 1
    fact = HilbertFactorization([2, dim_sp, dim_e])
    dim_pair = 2 * dim_sp

    vec = np.zeros(dim_pair * dim_e, dtype=complex)
    vec[0] = np.sqrt(1.0 - epsilon)  # |0>_pair |0>_E
    for i, p in enumerate(weights):
        pair_index = i + 1
        env_index = i + 1
        vec[pair_index * dim_e + env_index] = np.sqrt(epsilon * p)
    psi = PureState(vec, HilbertFactorization([dim_pair, dim_e]))

    rho_pair = partial_trace(psi.to_density(), [0])
    rho_env = partial_trace(psi.to_density(), [1])
    s_pair = von_neumann_entropy(rho_pair)
    s_env = von_neumann_entropy(rho_env)

    p_max = float(np.max(weights))
    kappa_eps = epsilon * (1.0 - np.log(epsilon) - np.log(p_max))
    tail = weights[weights > 0]
    closed_form = float(-(1 - epsilon) * np.log(1 - epsilon)
                        - np.sum(epsilon * tail * np.log(epsilon * tail)))

    checks = [
        check_at_most("entropy_below_cap", s_pair, kappa_eps, unit="nats"),
        check_below("schmidt_symmetry_gap", abs(s_pair - s_env), 1e-9),
        check_below("closed_form_gap", abs(s_pair - closed_form), 1e-12),
    ]
    uniform = bool(np.allclose(weights, weights[0]))
    if uniform:
        checks.append(check_at_most("uniform_cap_gap", abs(s_pair - kappa_eps),
                                    table["lemma2_gap_factor"] * epsilon ** 2))
    # the fine-grained factorization regroups to the same bipartition
    fine = PureState(vec, fact)
    s_fine = von_neumann_entropy(partial_trace(fine.to_density(), [0, 1]))
    checks.append(check_below("grouping_consistency_gap", abs(s_fine - s_pair), 1e-10))
    return ScenarioResult("lemma2", seed, tuple(checks))


# ---------------------------------------------------------------------------
# Classically correlated states from projector mixtures
# ---------------------------------------------------------------------------

def _validate_projectors(projectors: Sequence[np.ndarray], dim: int) -> None:
    for k, proj in enumerate(projectors):
        defect = float(np.max(np.abs(proj - proj.conj().T)))
        idem = float(np.max(np.abs(proj @ proj - proj)))
        if defect > 1e-10 or idem > 1e-10:
            raise ValueError(f"projector {k} is not an orthogonal projector")
        if proj.shape != (dim, dim):
            raise ValueError(f"projector {k} has shape {proj.shape}")
    for a in range(len(projectors)):
        for b in range(a + 1, len(projectors)):
            cross = float(np.max(np.abs(projectors[a] @ projectors[b])))
            if cross > 1e-10:
                raise ValueError(f"projectors {a} and {b} are not orthogonal")


def cc_state_demo(omega: np.ndarray,
                  left_projectors: Sequence[np.ndarray],
                  right_projectors: Sequence[np.ndarray],
                  seed: int = DEFAULT_SEED,
                  tol_table: dict | None = None) -> ScenarioResult:
    """Projector-mixture state: zero discord both ways by construction.

    ``omega`` is the nonnegative weight matrix over (left, right) projector
    pairs; weights times projector traces must sum to one. A separable
    (rank-1) weight matrix must additionally classify as a product state.
    """
    table = _tol(tol_table)
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("weights must be nonnegative")
    left_projectors = [np.asarray(p, dtype=complex) for p in left_projectors]
    right_projectors = [np.asarray(p, dtype=complex) for p in right_projectors]
    dim_left = left_projectors[0].shape[0]
    dim_right = right_projectors[0].shape[0]
    _validate_projectors(left_projectors, dim_left)
    _validate_projectors(right_projectors, dim_right)

    normalization = sum(
        omega[m, n] * np.trace(left_projectors[m]).real
        * np.trace(right_projectors[n]).real
        for m in range(len(left_projectors)) for n in range(len(right_projectors)))
    if abs(normalization - 1.0) > 1e-10:
        raise ValueError(f"weights normalize to {normalization}, expected 1")

    matrix = np.zeros((dim_left * dim_right,) * 2, dtype=complex)
    for m, p in enumerate(left_projectors):
        for n, q in enumerate(right_projectors):
            matrix += omega[m, n] * np.kron(p, q)
    rho = DensityOperator(matrix, HilbertFactorization([dim_left, dim_right]))

    report = full_report(rho, ([0], [1]), seed=seed,
                         discord_zero=table["discord_zero"],
                         mutual_info_zero=table["mutual_info_zero"])
    checks = [
        check_below("discord_measured_left", abs(report.d_left),
                    table["discord_zero"], unit="nats"),
        check_below("discord_measured_right", abs(report.d_right),
                    table["discord_zero"], unit="nats"),
    ]
    separable = np.linalg.matrix_rank(omega, tol=1e-12) <= 1
    if separable:
        checks.append(check_below("separable_mutual_info", report.mutual_info,
                                  table["mutual_info_zero"]))
        checks.append(CheckVerdict("classified_product",
                                   report.classification == "product",
                                   float(report.classification == "product"),
                                   1.0, "<="))
    else:
        checks.append(CheckVerdict("classified_cc",
                                   report.classification == "CC",
                                   float(report.classification == "CC"),
                                   1.0, "<="))
    return ScenarioResult("cc-state", seed, tuple(checks))


def cc_state_demo_suite(seed: int = DEFAULT_SEED,
                        tol_table: dict | None = None) -> ScenarioResult:
    """Three stock projector-mixture cases: correlated, separable, rank-2."""
    eye2 = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    correlated = cc_state_demo(np.array([[0.5, 0.2], [0.1, 0.2]]), eye2, eye2,
                               seed=seed, tol_table=tol_table)
    p = np.array([0.6, 0.4])
    q = np.array([0.3, 0.7])
    separable = cc_state_demo(np.outer(p, q), eye2, eye2, seed=seed,
                              tol_table=tol_table)
    qutrit_rank2 = [np.diag([1.0, 1.0, 0.0]).astype(complex),
                    np.diag([0.0, 0.0, 1.0]).astype(complex)]
    # weights times traces: 2*w00 + 2*w01 + w10 + w11 = 1
    omega = np.array([[0.15, 0.20], [0.10, 0.20]])
    rank2 = cc_state_demo(omega, qutrit_rank2, eye2, seed=seed, tol_table=tol_table)
    checks = []
    for label, result in (("correlated", correlated), ("separable", separable),
                          ("rank2", rank2)):
        for check in result.checks:
            checks.append(CheckVerdict(f"{label}_{check.name}", check.passed,
                                       check.value, check.threshold,
                                       check.comparator))
    return ScenarioResult("cc-state", seed, tuple(checks))


# ---------------------------------------------------------------------------
# Dynamical demos
# ---------------------------------------------------------------------------

def default_markovian_scenario(seed: int = DEFAULT_SEED,
                               grid_points: int = 200) -> MarkovianScenario:
    rho_s = DensityOperator(np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]]),
                            HilbertFactorization([2]))
    rho_sp = DensityOperator(np.array([[0.3, 0.1], [0.1, 0.7]], dtype=complex),
                             HilbertFactorization([2]))
    h_s = HamiltonianSpec([(0.7, {0: SIGMA_Z}), (0.4, {0: SIGMA_X})])
    lindblad = LindbladSpec(HamiltonianSpec.single(0.6, 0, SIGMA_Z),
                            [(0.35, SIGMA_MINUS), (0.1, SIGMA_Z)])
    grid = time_grid(10.0 / 0.35, grid_points)
    return MarkovianScenario(rho_s, rho_sp, h_s, lindblad, grid, seed)


def random_markovian_scenario(rng: np.random.Generator,
                              grid_points: int = 200,
                              seed: int = DEFAULT_SEED) -> MarkovianScenario:
    """Random qubit pair: GUE Hamiltonians, random jumps, product start."""
    def density(dim):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = g @ g.conj().T
        return DensityOperator(rho / np.trace(rho).real, HilbertFactorization([dim]))

    def hermitian(dim):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return (g + g.conj().T) / 2

    jumps = []
    for _ in range(int(rng.integers(1, 3))):
        op = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        jumps.append((float(rng.uniform(0.1, 1.0)), op))
    max_rate = max(rate for rate, _ in jumps)
    lindblad = LindbladSpec(HamiltonianSpec([(1.0, {0: hermitian(2)})]), jumps)
    return MarkovianScenario(density(2), density(2),
                             HamiltonianSpec([(1.0, {0: hermitian(2)})]),
                             lindblad, time_grid(10.0 / max_rate, grid_points),
                             seed)


def markovian_series_checks(series: TimeSeries,
                            table: dict[str, float]) -> tuple[CheckVerdict, ...]:
    """Standard classicality verdicts over a composed product trajectory."""
    maxima = series.maxima()
    return (
        check_below("max_discord_measured_left", maxima["D_left"],
                    table["discord_zero"], unit="nats"),
        check_below("max_discord_measured_right", maxima["D_right"],
                    table["discord_zero"], unit="nats"),
        check_below("max_lazy_left", maxima["lazy_left"], table["lazy_commutator"]),
        check_below("max_lazy_right", maxima["lazy_right"], table["lazy_commutator"]),
        check_below("max_mutual_info", maxima["I"], table["mutual_info_zero"],
                    unit="nats"),
    )


def markovian_classicality_demo(seed: int = DEFAULT_SEED, grid_points: int = 200,
                                tol_table: dict | None = None) -> ScenarioResult:
    """Closed qubit next to a damped qubit: discord-free at every instant."""
    table = _tol(tol_table)
    scenario = default_markovian_scenario(seed, grid_points)
    series = run_markovian_classicality(scenario)
    return ScenarioResult("markovian-classicality", seed,
                          markovian_series_checks(series, table),
                          {"timeseries": series})


def default_disd_scenario(coupling: float = 0.01, strength: float = 1.0,
                          grid_points: int = 200,
                          seed: int = DEFAULT_SEED) -> DisdScenario:
    horizon = strength / coupling if coupling > 0 else 10.0 / strength
    return DisdScenario(
        dims=(2, 2, 2),
        psi_s=np.array([np.cos(0.4), np.sin(0.4)]),
        p_sp=np.array([1.0, 0.0]),
        chi_e=np.array([1.0, 1.0]) / np.sqrt(2.0),
        h_s=0.5 * SIGMA_Z,
        h_sp=np.zeros((2, 2)),
        h_e=np.zeros((2, 2)),
        interaction_ssp=np.kron(SIGMA_X, SIGMA_X),
        coupling_ssp=coupling,
        interaction_spe=np.kron(SIGMA_Z, SIGMA_Z),
        strength_spe=strength,
        t_grid=time_grid(horizon, grid_points),
        seed=seed,
    )


def disd_series_checks(series: TimeSeries, scenario: DisdScenario,
                       table: dict[str, float]) -> tuple[CheckVerdict, ...]:
    """Robustness plus entropy-cap (or decoupled-cleanliness) verdicts."""
    _, residual = robustness_check(
        scenario.strength_spe * scenario.interaction_spe,
        scenario.p_sp, scenario.chi_e)
    maxima = series.maxima()
    checks = [check_below("robustness_residual", residual,
                          table["robustness_residual"])]
    eps = scenario.coupling_ratio
    if eps > 0:
        kappa_eps = eps * (1.0 - np.log(eps))
        checks += [
            check_at_most("entropy_cap_s", maxima["S_S"], kappa_eps, unit="nats"),
            check_at_most("entropy_cap_sp", maxima["S_Sp"], kappa_eps, unit="nats"),
            check_at_most("entropy_cap_e", maxima["S_E"], kappa_eps, unit="nats"),
        ]
    else:
        checks += [
            check_below("decoupled_max_mutual_info", maxima["I"],
                        table["correlation_zero"], unit="nats"),
            check_below("decoupled_max_discord",
                        max(maxima["D_left"], maxima["D_right"]),
                        table["correlation_zero"], unit="nats"),
            check_below("decoupled_max_lii", maxima["lii_total"],
                        table["correlation_zero"], unit="nats"),
        ]
    return tuple(checks)


def disd_demo(coupling: float = 0.01, strength: float = 1.0,
              grid_points: int = 200, seed: int = DEFAULT_SEED,
              tol_table: dict | None = None) -> ScenarioResult:
    """Dominant-interaction tripartite run plus the coupling-ratio scaling study.

    Runs the scenario at the requested coupling, at half of it, and fully
    decoupled; checks robustness, the per-subsystem entropy caps, the clean
    decoupled limit, and the window for the max-correlation ratio between the
    two coupled runs.
    """
    table = _tol(tol_table)
    scenario = default_disd_scenario(coupling, strength, grid_points, seed)
    series = run_disd(scenario)
    half_scenario = default_disd_scenario(coupling / 2.0, strength, grid_points,
                                          seed)
    half = run_disd(half_scenario)
    zero_scenario = default_disd_scenario(0.0, strength, grid_points, seed)
    decoupled = run_disd(zero_scenario)

    maxima_half = half.maxima()
    ratio = (series.maxima()["I"] / maxima_half["I"] if maxima_half["I"] > 0
             else np.inf)
    checks = list(disd_series_checks(series, scenario, table))
    checks += list(disd_series_checks(decoupled, zero_scenario, table))[1:]
    checks.append(check_in_range("halving_ratio_window", ratio,
                                 table["disd_ratio_low"],
                                 table["disd_ratio_high"]))
    return ScenarioResult("disd", seed, tuple(checks),
                          {"timeseries": series, "timeseries_half": half,
                           "timeseries_decoupled": decoupled})


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

DEMOS: dict[str, tuple] = {
    "saturation": (
        "locked entangled pair: measured-environment discord equals the "
        "environment entropy while the spectator stays uncorrelated",
        lambda seed, grid, table: saturation_demo(seed=seed, tol_table=table)),
    "teleportation": (
        "spectator qubit next to a maximally entangled pair: correlations "
        "appear or vanish depending on the grouping",
        lambda seed, grid, table: teleportation_structure_demo(seed=seed,
                                                               tol_table=table)),
    "lemma2": (
        "near-product tripartite state: subsystem entropy against its "
        "analytic cap",
        lambda seed, grid, table: lemma2_demo(seed=seed, tol_table=table)),
    "markovian-classicality": (
        "closed qubit next to a damped qubit: two-way discord stays zero on "
        "the whole grid",
        lambda seed, grid, table: markovian_classicality_demo(
            seed=seed, grid_points=grid, tol_table=table)),
    "disd": (
        "dominant-interaction tripartite model: near-product evolution and "
        "coupling-ratio scaling",
        lambda seed, grid, table: disd_demo(grid_points=grid, seed=seed,
                                            tol_table=table)),
    "cc-state": (
        "projector-mixture states: zero two-way discord, product when the "
        "weights separate",
        lambda seed, grid, table: cc_state_demo_suite(seed=seed, tol_table=table)),
}


def run_demo(name: str, seed: int = DEFAULT_SEED, grid_points: int = 200,
             tol_table: dict | None = None) -> ScenarioResult:
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; known: {sorted(DEMOS)}")
    _, runner = DEMOS[name]
    return runner(seed, grid_points, tol_table)

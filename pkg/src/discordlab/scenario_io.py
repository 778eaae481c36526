"""Parsing of scenario JSON documents into runnable scenario objects.

Two kinds are supported, selected by the top-level ``kind`` field:
``markovian-classicality`` (closed subsystem + GKSL subsystem) and ``disd``
(tripartite pure-state model). Operators are either names from the built-in
library or inline dense matrices (row-major [re, im] pairs).
"""
from __future__ import annotations

from typing import Any

import numpy as np

from . import operators
from .correlations import DEFAULT_SEED
from .dynamics import (
    DisdScenario,
    HamiltonianSpec,
    LindbladSpec,
    MarkovianScenario,
    time_grid,
)
from .serialize import matrix_from_json, vector_from_json
from .states import DensityOperator, HilbertFactorization, PureState


class ScenarioFormatError(ValueError):
    """The scenario document is structurally invalid."""


def _require(payload: dict, key: str, context: str) -> Any:
    if key not in payload:
        raise ScenarioFormatError(f"missing {key!r} in {context}")
    return payload[key]


def _operator(payload: Any, dim: int, context: str) -> np.ndarray:
    if isinstance(payload, str):
        try:
            return operators.resolve(payload, dim)
        except (KeyError, ValueError) as exc:
            raise ScenarioFormatError(f"{context}: {exc}") from exc
    if isinstance(payload, dict) and "matrix" in payload:
        matrix = matrix_from_json(payload["matrix"])
        if matrix.shape != (dim, dim):
            raise ScenarioFormatError(f"{context}: matrix shape {matrix.shape} "
                                      f"does not match dimension {dim}")
        return matrix
    raise ScenarioFormatError(f"{context}: expected an operator name or "
                              "{'matrix': ...}")


def _operator_sum(payload: Any, dim: int, context: str) -> np.ndarray:
    """List of {coeff, op} entries summed into one local matrix."""
    if payload is None:
        return np.zeros((dim, dim), dtype=complex)
    total = np.zeros((dim, dim), dtype=complex)
    for k, entry in enumerate(payload):
        coeff = float(_require(entry, "coeff", f"{context}[{k}]"))
        total += coeff * _operator(_require(entry, "op", f"{context}[{k}]"),
                                   dim, f"{context}[{k}].op")
    return total


def _hamiltonian_spec(payload: Any, dims: tuple[int, ...],
                      context: str) -> HamiltonianSpec:
    if payload is None:
        return HamiltonianSpec.zero()
    terms = []
    for k, entry in enumerate(payload):
        coeff = float(_require(entry, "coeff", f"{context}[{k}]"))
        factors_payload = _require(entry, "factors", f"{context}[{k}]")
        factors = {}
        for idx_str, op_payload in factors_payload.items():
            idx = int(idx_str)
            if not 0 <= idx < len(dims):
                raise ScenarioFormatError(f"{context}[{k}]: factor index {idx} "
                                          f"out of range")
            factors[idx] = _operator(op_payload, dims[idx],
                                     f"{context}[{k}].factors[{idx_str}]")
        terms.append((coeff, factors))
    try:
        return HamiltonianSpec(terms)
    except ValueError as exc:
        raise ScenarioFormatError(f"{context}: {exc}") from exc


def _density(payload: dict, dims: tuple[int, ...], context: str) -> DensityOperator:
    fact = HilbertFactorization(dims)
    try:
        if "matrix" in payload:
            return DensityOperator(matrix_from_json(payload["matrix"]), fact)
        if "diag" in payload:
            return DensityOperator.from_diagonal([float(x) for x in payload["diag"]],
                                                 dims)
        if "vector" in payload:
            return PureState(vector_from_json(payload["vector"]), fact).to_density()
    except ValueError as exc:
        raise ScenarioFormatError(f"{context}: {exc}") from exc
    raise ScenarioFormatError(f"{context}: expected 'matrix', 'diag', or 'vector'")


def _state_vector(payload: Any, dim: int, context: str) -> np.ndarray:
    if isinstance(payload, dict) and "vector" in payload:
        vec = vector_from_json(payload["vector"])
    elif isinstance(payload, list):
        vec = vector_from_json(payload)
    else:
        raise ScenarioFormatError(f"{context}: expected a vector payload")
    if vec.shape != (dim,):
        raise ScenarioFormatError(f"{context}: vector length {vec.shape[0]} "
                                  f"does not match dimension {dim}")
    norm = float(np.linalg.norm(vec))
    if norm <= 0:
        raise ScenarioFormatError(f"{context}: zero vector")
    return vec / norm


def _grid(payload: Any, default_t_max: float, context: str) -> np.ndarray:
    if payload is None:
        return time_grid(default_t_max, 200)
    if "times" in payload:
        times = np.asarray([float(t) for t in payload["times"]])
        if np.any(np.diff(times) <= 0):
            raise ScenarioFormatError(f"{context}: times must increase strictly")
        return times
    t_max = float(payload.get("t_max", default_t_max))
    points = int(payload.get("points", 200))
    if points < 2 or t_max <= 0:
        raise ScenarioFormatError(f"{context}: need t_max > 0 and points >= 2")
    return time_grid(t_max, points)


def parse_scenario(document: dict, seed_override: int | None = None,
                   grid_override: int | None = None):
    """Build a MarkovianScenario or DisdScenario from a parsed JSON document."""
    if not isinstance(document, dict):
        raise ScenarioFormatError("scenario document must be a JSON object")
    kind = _require(document, "kind", "scenario")
    seed = int(document.get("seed", DEFAULT_SEED))
    if seed_override is not None:
        seed = seed_override
    if kind == "markovian-classicality":
        return _parse_markovian(document, seed, grid_override)
    if kind == "disd":
        return _parse_disd(document, seed, grid_override)
    raise ScenarioFormatError(f"unknown scenario kind {kind!r}; expected "
                              "'markovian-classicality' or 'disd'")


def _parse_markovian(document: dict, seed: int,
                     grid_override: int | None) -> MarkovianScenario:
    system = _require(document, "system", "scenario")
    open_system = _require(document, "open_system", "scenario")
    dims_s = tuple(int(d) for d in _require(system, "dims", "system"))
    dims_sp = tuple(int(d) for d in _require(open_system, "dims", "open_system"))

    rho_s = _density(_require(system, "initial", "system"), dims_s, "system.initial")
    rho_sp = _density(_require(open_system, "initial", "open_system"), dims_sp,
                      "open_system.initial")
    h_s = _hamiltonian_spec(system.get("hamiltonian"), dims_s, "system.hamiltonian")
    h_sp = _hamiltonian_spec(open_system.get("hamiltonian"), dims_sp,
                             "open_system.hamiltonian")

    jumps = []
    dim_open = int(np.prod(dims_sp))
    for k, entry in enumerate(open_system.get("jumps", [])):
        rate = float(_require(entry, "rate", f"open_system.jumps[{k}]"))
        op = _operator(_require(entry, "operator", f"open_system.jumps[{k}]"),
                       dim_open, f"open_system.jumps[{k}].operator")
        jumps.append((rate, op))
    try:
        lindblad = LindbladSpec(h_sp, jumps)
    except ValueError as exc:
        raise ScenarioFormatError(f"open_system.jumps: {exc}") from exc

    max_rate = lindblad.max_rate()
    default_t_max = 10.0 / max_rate if max_rate > 0 else 10.0
    grid = _grid(document.get("time_grid"), default_t_max, "time_grid")
    if grid_override is not None:
        grid = time_grid(float(grid[-1]), grid_override, float(grid[0]))
    return MarkovianScenario(rho_s, rho_sp, h_s, lindblad, grid, seed)


def _parse_disd(document: dict, seed: int,
                grid_override: int | None) -> DisdScenario:
    dims = tuple(int(d) for d in _require(document, "dims", "scenario"))
    if len(dims) != 3:
        raise ScenarioFormatError("disd scenarios need exactly three factors")
    states = _require(document, "states", "scenario")
    psi_s = _state_vector(_require(states, "psi_s", "states"), dims[0], "states.psi_s")
    p_sp = _state_vector(_require(states, "p_sp", "states"), dims[1], "states.p_sp")
    chi_e = _state_vector(_require(states, "chi_e", "states"), dims[2], "states.chi_e")

    locals_payload = document.get("local_hamiltonians", {})
    h_s = _operator_sum(locals_payload.get("s"), dims[0], "local_hamiltonians.s")
    h_sp = _operator_sum(locals_payload.get("sp"), dims[1], "local_hamiltonians.sp")
    h_e = _operator_sum(locals_payload.get("e"), dims[2], "local_hamiltonians.e")

    couplings = _require(document, "couplings", "scenario")
    weak = _require(couplings, "weak", "couplings")
    strong = _require(couplings, "strong", "couplings")

    def interaction(entry: dict, dim_pair: tuple[int, int], context: str):
        strength = float(_require(entry, "strength", context))
        op_payload = _require(entry, "operator", context)
        if isinstance(op_payload, list) and len(op_payload) == 2:
            left = _operator(op_payload[0], dim_pair[0], f"{context}.operator[0]")
            right = _operator(op_payload[1], dim_pair[1], f"{context}.operator[1]")
            matrix = np.kron(left, right)
        else:
            matrix = _operator(op_payload, dim_pair[0] * dim_pair[1],
                               f"{context}.operator")
        return strength, matrix

    coupling_ssp, op_ssp = interaction(weak, (dims[0], dims[1]), "couplings.weak")
    strength_spe, op_spe = interaction(strong, (dims[1], dims[2]),
                                       "couplings.strong")
    if strength_spe <= 0:
        raise ScenarioFormatError("couplings.strong.strength must be positive")

    default_t_max = (strength_spe / coupling_ssp if coupling_ssp > 0
                     else 10.0 / strength_spe)
    grid = _grid(document.get("time_grid"), default_t_max, "time_grid")
    if grid_override is not None:
        grid = time_grid(float(grid[-1]), grid_override, float(grid[0]))
    return DisdScenario(dims=dims, psi_s=psi_s, p_sp=p_sp, chi_e=chi_e,
                        h_s=h_s, h_sp=h_sp, h_e=h_e,
                        interaction_ssp=op_ssp, coupling_ssp=coupling_ssp,
                        interaction_spe=op_spe, strength_spe=strength_spe,
                        t_grid=grid, seed=seed)

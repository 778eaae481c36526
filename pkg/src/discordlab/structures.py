"""Tensor-factor regrouping and per-structure correlation reports.

A grouping merges factors into coarser subsystems via a pure index
permutation, so the global matrix is similarity-transformed by a permutation
matrix: trace, Hermiticity, and the full spectrum are preserved exactly.
Only grouping transformations are implemented here; an arbitrary global
unitary can be applied with :func:`transform` as the extension point for
nontrivial canonical changes of description.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .correlations import DEFAULT_SEED, full_report, lii_flow
from .states import (
    DensityOperator,
    HilbertFactorization,
    PureState,
    apply_unitary,
    partial_trace,
    von_neumann_entropy,
)
from .tensor_ops import permute_factors_matrix, permute_factors_vector


@dataclass(frozen=True)
class Grouping:
    """An ordered partition of factor indices into named groups."""

    groups: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = field(default=())

    def __init__(self, groups: Sequence[Sequence[int]],
                 labels: Sequence[str] | None = None):
        groups = tuple(tuple(int(i) for i in g) for g in groups)
        if labels is None:
            labels = tuple(f"g{k}" for k in range(len(groups)))
        else:
            labels = tuple(labels)
            if len(labels) != len(groups):
                raise ValueError("one label per group required")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "labels", labels)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    def flat_order(self) -> list[int]:
        return [i for g in self.groups for i in g]

    def validate_for(self, factorization: HilbertFactorization) -> None:
        flat = self.flat_order()
        if any(len(g) == 0 for g in self.groups):
            raise ValueError("groups must be nonempty")
        if sorted(flat) != list(range(factorization.n_factors)):
            raise ValueError(
                f"groups {self.groups} do not partition factors "
                f"0..{factorization.n_factors - 1}")

    def grouped_dims(self, factorization: HilbertFactorization) -> tuple[int, ...]:
        return tuple(int(np.prod([factorization.dims[i] for i in g]))
                     for g in self.groups)


def regroup(state, grouping: Grouping):
    """Merge factors per the grouping; factor order follows the grouping.

    Accepts a :class:`DensityOperator` or :class:`PureState` and returns the
    same kind. The transformation is an index permutation, so the global
    spectrum is untouched.
    """
    grouping.validate_for(state.factorization)
    perm = grouping.flat_order()
    new_fact = HilbertFactorization(grouping.grouped_dims(state.factorization))
    if isinstance(state, DensityOperator):
        matrix = permute_factors_matrix(state.matrix, state.dims, perm)
        return DensityOperator(matrix, new_fact, _validate=False)
    if isinstance(state, PureState):
        vector = permute_factors_vector(state.amplitudes,
                                        state.factorization.dims, perm)
        return PureState(vector, new_fact)
    raise TypeError(f"cannot regroup {type(state).__name__}")


def ungroup(state, grouping: Grouping, original: HilbertFactorization):
    """Invert :func:`regroup`: split merged factors and restore factor order."""
    grouping.validate_for(original)
    perm = grouping.flat_order()
    inverse = [0] * len(perm)
    for slot, factor in enumerate(perm):
        inverse[factor] = slot
    fine_dims = [original.dims[i] for i in perm]
    if isinstance(state, DensityOperator):
        matrix = permute_factors_matrix(state.matrix, fine_dims, inverse)
        return DensityOperator(matrix, original, _validate=False)
    if isinstance(state, PureState):
        vector = permute_factors_vector(state.amplitudes, fine_dims, inverse)
        return PureState(vector, original)
    raise TypeError(f"cannot ungroup {type(state).__name__}")


def transform(state: DensityOperator, unitary: np.ndarray,
              new_factorization: HilbertFactorization) -> DensityOperator:
    """Apply a global unitary change of description and re-declare factors.

    Extension point for non-grouping canonical transformations; the grouping
    operations above never need it.
    """
    if unitary.shape != (state.factorization.total_dim,) * 2:
        raise ValueError("unitary dimension mismatch")
    if new_factorization.total_dim != state.factorization.total_dim:
        raise ValueError("new factorization must preserve the total dimension")
    rotated = apply_unitary(state, unitary)
    return DensityOperator(rotated.matrix, new_factorization, _validate=False)


@dataclass(frozen=True)
class StructureRow:
    """Correlation quantities for one grouping of the same global state."""

    label: str
    group_dims: tuple[int, ...]
    group_entropies: tuple[float, ...]
    total_entropy: float
    mutual_info: float | None
    d_left: float | None
    d_right: float | None
    lii_total: float | None

    def to_jsonable(self) -> dict:
        return {
            "label": self.label,
            "group_dims": list(self.group_dims),
            "group_entropies": list(self.group_entropies),
            "total_entropy": self.total_entropy,
            "mutual_info": self.mutual_info,
            "d_left": self.d_left,
            "d_right": self.d_right,
            "lii_total": self.lii_total,
        }


CSV_COLUMNS = ["label", "group_dims", "group_entropies", "total_entropy",
               "mutual_info", "d_left", "d_right", "lii_total"]


@dataclass(frozen=True)
class StructureReport:
    rows: tuple[StructureRow, ...]
    seed: int

    def to_jsonable(self) -> dict:
        return {"seed": self.seed, "rows": [r.to_jsonable() for r in self.rows]}

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for row in self.rows:
            cells = [
                row.label,
                "x".join(str(d) for d in row.group_dims),
                ";".join(repr(s) for s in row.group_entropies),
                repr(row.total_entropy),
                "" if row.mutual_info is None else repr(row.mutual_info),
                "" if row.d_left is None else repr(row.d_left),
                "" if row.d_right is None else repr(row.d_right),
                "" if row.lii_total is None else repr(row.lii_total),
            ]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def structure_report(state, groupings: Sequence[Grouping],
                     seed: int = DEFAULT_SEED) -> StructureReport:
    """Correlations of one global state under several groupings.

    Bipartite groupings get mutual information and discord both ways
    (measured left / measured right); tripartite groupings get the locally
    inaccessible information total instead. Every row reports the same global
    entropy, which is the spectrum-preservation witness.
    """
    rows = []
    for grouping in groupings:
        if grouping.n_groups not in (2, 3):
            raise ValueError("structure rows need two or three groups, got "
                             f"{grouping.n_groups}")
        grouped = regroup(state, grouping)
        rho = grouped if isinstance(grouped, DensityOperator) else grouped.to_density()
        n = grouping.n_groups
        entropies = tuple(von_neumann_entropy(partial_trace(rho, [k]))
                          for k in range(n))
        total_entropy = von_neumann_entropy(rho)
        label = "+".join(grouping.labels)
        if n == 2:
            report = full_report(rho, ([0], [1]), seed=seed)
            rows.append(StructureRow(label, grouped.factorization.dims, entropies,
                                     total_entropy, report.mutual_info,
                                     report.d_left, report.d_right, None))
        else:
            total_corr = float(sum(entropies) - total_entropy)
            flow = lii_flow(rho, ([0], [1], [2]), seed=seed)
            rows.append(StructureRow(label, grouped.factorization.dims, entropies,
                                     total_entropy, total_corr, None, None,
                                     flow.total))
    return StructureReport(tuple(rows), seed)

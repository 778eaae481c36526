"""Low-level tensor-index plumbing on raw complex matrices.

Everything here works on plain ndarrays plus a list of factor dimensions;
the typed wrappers live in :mod:`discordlab.states`.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence of operators, left to right."""
    out = np.array([[1.0 + 0.0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def _check_factors(dims: Sequence[int], indices: Sequence[int]) -> None:
    n = len(dims)
    for idx in indices:
        if not 0 <= idx < n:
            raise IndexError(f"factor index {idx} out of range for {n} factors")
    if len(set(indices)) != len(indices):
        raise ValueError(f"duplicate factor indices in {list(indices)}")


def partial_trace_matrix(matrix: np.ndarray, dims: Sequence[int],
                         keep: Sequence[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep`` (original order preserved)."""
    if len(keep) == 0:
        raise ValueError("keep set must be nonempty")
    _check_factors(dims, keep)
    dims = list(dims)
    keep_sorted = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep_sorted]
    reshaped = matrix.reshape(dims + dims)
    for idx in sorted(traced, reverse=True):
        reshaped = np.trace(reshaped, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    d = int(np.prod(dims))
    return np.ascontiguousarray(reshaped.reshape(d, d))


def permute_factors_matrix(matrix: np.ndarray, dims: Sequence[int],
                           perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator: factor ``perm[k]`` moves to slot k."""
    dims = list(dims)
    if sorted(perm) != list(range(len(dims))):
        raise ValueError(f"{list(perm)} is not a permutation of {len(dims)} factors")
    n = len(dims)
    axes = list(perm) + [n + p for p in perm]
    d = int(np.prod(dims))
    reshaped = matrix.reshape(dims + dims).transpose(axes)
    return np.ascontiguousarray(reshaped.reshape(d, d))


def permute_factors_vector(vector: np.ndarray, dims: Sequence[int],
                           perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a state vector."""
    dims = list(dims)
    if sorted(perm) != list(range(len(dims))):
        raise ValueError(f"{list(perm)} is not a permutation of {len(dims)} factors")
    reshaped = vector.reshape(dims).transpose(list(perm))
    return np.ascontiguousarray(reshaped.reshape(-1))


def split_bipartition(matrix: np.ndarray, dims: Sequence[int],
                      kept: Sequence[int], measured: Sequence[int]) -> np.ndarray:
    """Reshape an operator into blocks (dK, dM, dK, dM) with ``measured`` last.

    The returned array is C-contiguous, which is what the conditional-entropy
    kernels expect.
    """
    _check_factors(dims, list(kept) + list(measured))
    if sorted(list(kept) + list(measured)) != list(range(len(dims))):
        raise ValueError("kept and measured groups must partition all factors")
    perm = list(kept) + list(measured)
    permuted = permute_factors_matrix(matrix, dims, perm)
    d_kept = int(np.prod([dims[i] for i in kept]))
    d_meas = int(np.prod([dims[i] for i in measured]))
    return np.ascontiguousarray(permuted.reshape(d_kept, d_meas, d_kept, d_meas))


def embed_operator(op: np.ndarray, dims: Sequence[int],
                   targets: Sequence[int]) -> np.ndarray:
    """Extend an operator acting on ``targets`` to the full space by identity.

    ``op`` must act on the tensor product of the target factors in the order
    given by ``targets``; the result acts on the full space in original
    factor order.
    """
    _check_factors(dims, targets)
    targets = list(targets)
    rest = [i for i in range(len(dims)) if i not in targets]
    d_rest = int(np.prod([dims[i] for i in rest])) if rest else 1
    full = np.kron(op, np.eye(d_rest, dtype=complex))
    # full currently lives on factor order targets + rest; undo it
    order = targets + rest
    inverse = [0] * len(dims)
    for slot, factor in enumerate(order):
        inverse[factor] = slot
    reordered_dims = [dims[i] for i in order]
    return permute_factors_matrix(full, reordered_dims, inverse)

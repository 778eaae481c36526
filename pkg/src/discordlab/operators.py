"""Built-in library of named local operators for scenario files."""
from __future__ import annotations

import numpy as np

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def lowering(dim: int) -> np.ndarray:
    """Ladder lowering operator: sum_k sqrt(k) |k-1><k| on a d-level system."""
    op = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        op[k - 1, k] = np.sqrt(k)
    return op


def raising(dim: int) -> np.ndarray:
    return lowering(dim).conj().T


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=complex))


def resolve(name: str, dim: int) -> np.ndarray:
    """Look up a named operator at the given local dimension."""
    qubit_only = {
        "sigma_x": SIGMA_X,
        "sigma_y": SIGMA_Y,
        "sigma_z": SIGMA_Z,
        "sigma_minus": SIGMA_MINUS,
        "sigma_plus": SIGMA_PLUS,
    }
    if name in qubit_only:
        if dim != 2:
            raise ValueError(f"{name} requires a 2-level factor, got dimension {dim}")
        return qubit_only[name].copy()
    general = {
        "identity": identity,
        "lower": lowering,
        "raise": raising,
        "number": number,
    }
    if name in general:
        return general[name](dim)
    raise KeyError(f"unknown operator {name!r}; known: "
                   f"{sorted(qubit_only) + sorted(general)}")

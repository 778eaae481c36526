"""Shared helpers for the test suite."""
from __future__ import annotations

import numpy as np
import pytest


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Full-rank random state (Ginibre construction)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2.0


def loop_partial_trace(matrix: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    """Independent index-contraction oracle: explicit sums, no reshapes."""
    keep = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    keep_dims = [dims[i] for i in keep]
    out_dim = int(np.prod(keep_dims))
    out = np.zeros((out_dim, out_dim), dtype=complex)

    def unravel(flat: int) -> list[int]:
        idx = []
        for d in reversed(dims):
            idx.append(flat % d)
            flat //= d
        return idx[::-1]

    def ravel_keep(idx: list[int]) -> int:
        flat = 0
        for pos in keep:
            flat = flat * dims[pos] + idx[pos]
        return flat

    total = int(np.prod(dims))
    for row in range(total):
        ridx = unravel(row)
        for col in range(total):
            cidx = unravel(col)
            if all(ridx[t] == cidx[t] for t in traced):
                out[ravel_keep(ridx), ravel_keep(cidx)] += matrix[row, col]
    return out


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)

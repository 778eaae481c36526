"""Backend selection for the measurement hot kernel.

The compiled extension is preferred when present; set the environment
variable ``DISCORDLAB_PURE_PYTHON=1`` to force the NumPy fallback (used by
the benchmark and by tests that exercise both paths).
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _select():
    force_pure = os.environ.get("DISCORDLAB_PURE_PYTHON", "").strip().lower()
    if _ckernels is None or force_pure in ("1", "true", "yes", "on"):
        return _kernels_py
    return _ckernels


_backend = _select()


def backend_name() -> str:
    """Either ``"compiled"`` or ``"python"``."""
    return _backend.BACKEND_NAME


def compiled_available() -> bool:
    return _ckernels is not None


def conditional_entropy_batch(rho_blocks: np.ndarray, bases: np.ndarray,
                              prob_cutoff: float = 1e-14) -> np.ndarray:
    """Batched average post-measurement entropy; see the backend modules."""
    return _backend.conditional_entropy_batch(rho_blocks, bases, prob_cutoff)


def conditional_entropy_single(rho_blocks: np.ndarray, basis: np.ndarray,
                               prob_cutoff: float = 1e-14) -> float:
    """Average post-measurement entropy for one orthonormal basis."""
    return float(_backend.conditional_entropy_batch(
        rho_blocks, basis[None, :, :], prob_cutoff)[0])


def conditional_entropy_bloch(rho_blocks: np.ndarray, theta: float, phi: float,
                              prob_cutoff: float = 1e-14) -> float:
    """Qubit-measurement evaluation straight from Bloch angles."""
    return float(_backend.conditional_entropy_bloch(rho_blocks, theta, phi,
                                                    prob_cutoff))

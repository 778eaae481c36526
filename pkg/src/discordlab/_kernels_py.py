"""Pure-NumPy measurement kernel: batched average conditional entropy.

This is the fallback backend; :mod:`discordlab._ckernels` implements the same
contract in Cython. Both must return identical values up to floating-point
noise, and the test suite enforces that.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def conditional_entropy_batch(rho_blocks: np.ndarray, bases: np.ndarray,
                              prob_cutoff: float = 1e-14) -> np.ndarray:
    """Average post-measurement entropy for a batch of orthonormal bases.

    Parameters
    ----------
    rho_blocks : (dK, dM, dK, dM) complex array
        Joint state reshaped so the measured subsystem is the second/fourth
        index (see ``tensor_ops.split_bipartition``).
    bases : (G, dM, dM) complex array
        ``bases[g, :, i]`` is the i-th measurement vector of basis g.
    prob_cutoff : float
        Outcomes with probability below this contribute nothing.

    Returns
    -------
    (G,) float array with entries ``sum_i p_i S(rho_K | outcome i)`` in nats,
    computed from the unnormalized conditional blocks as
    ``sum_i [p_i ln p_i - sum_k lam_ik ln lam_ik]``.
    """
    rho_blocks = np.asarray(rho_blocks, dtype=complex)
    bases = np.asarray(bases, dtype=complex)
    if bases.ndim == 2:
        bases = bases[None, :, :]
    d_kept, d_meas = rho_blocks.shape[0], rho_blocks.shape[1]
    n_bases = bases.shape[0]

    # weights[g, i, b, d] = conj(v_gi[b]) * v_gi[d]; contracting them with the
    # measured indices of rho gives the unnormalized conditional blocks.
    weights = np.einsum("gbi,gdi->gibd", bases.conj(), bases)
    rho_flat = np.ascontiguousarray(
        rho_blocks.transpose(1, 3, 0, 2).reshape(d_meas * d_meas, d_kept * d_kept))
    cond = (weights.reshape(n_bases * d_meas, d_meas * d_meas) @ rho_flat)
    cond = cond.reshape(n_bases, d_meas, d_kept, d_kept)

    probs = np.einsum("giaa->gi", cond).real
    if d_kept == 2:
        # closed-form Hermitian 2x2 spectrum, vectorized over the whole batch
        a = cond[:, :, 0, 0].real
        d = cond[:, :, 1, 1].real
        half_gap = np.sqrt(((a - d) / 2.0) ** 2 + np.abs(cond[:, :, 0, 1]) ** 2)
        center = (a + d) / 2.0
        lam = np.stack([center - half_gap, center + half_gap], axis=-1)
    else:
        lam = np.linalg.eigvalsh(cond)

    keep = probs > prob_cutoff
    p_term = np.where(keep, _xlogx(probs), 0.0)
    lam_term = np.where(keep[:, :, None], _xlogx(lam), 0.0)
    return np.asarray(p_term.sum(axis=1) - lam_term.sum(axis=(1, 2)), dtype=float)


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    positive = x > 0.0
    out[positive] = x[positive] * np.log(x[positive])
    return out


def conditional_entropy_bloch(rho_blocks: np.ndarray, theta: float, phi: float,
                              prob_cutoff: float = 1e-14) -> float:
    """Single qubit-measurement evaluation parameterized by Bloch angles."""
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    phase = np.exp(1j * phi)
    basis = np.array([[c, -np.conj(phase) * s], [phase * s, c]], dtype=complex)
    return float(conditional_entropy_batch(rho_blocks, basis[None],
                                           prob_cutoff)[0])

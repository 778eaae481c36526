# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled measurement kernel: batched average conditional entropy.

Same contract as :mod:`discordlab._kernels_py`; selected at import time by
:mod:`discordlab.kernels` when the extension is available.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, log, sin, sqrt
from scipy.linalg.cython_lapack cimport zheev

cnp.import_array()

BACKEND_NAME = "compiled"


def conditional_entropy_bloch(rho_blocks, double theta, double phi,
                              double prob_cutoff=1e-14):
    """Single qubit-measurement evaluation parameterized by Bloch angles.

    Dedicated low-latency entry point for the optimizer refinement loop:
    no Python-side array construction per call.
    """
    rho_arr = np.ascontiguousarray(rho_blocks, dtype=np.complex128)
    cdef const double complex[:, :, :, ::1] rho = rho_arr
    if rho.shape[1] != 2 or rho.shape[3] != 2:
        raise ValueError("measured side must be a qubit")
    cdef Py_ssize_t d_kept = rho.shape[0]
    cdef double c = cos(theta / 2.0)
    cdef double s = sin(theta / 2.0)
    cdef double complex phase = cos(phi) + 1j * sin(phi)
    cdef double complex v[2][2]
    v[0][0] = c
    v[1][0] = phase * s
    v[0][1] = -phase.conjugate() * s
    v[1][1] = c

    cdef double complex cond00, cond01, cond11, acc00, acc01, acc11
    cdef double complex vb0, vb1
    cdef double p, total, center, half_gap, lam0, lam1, lam
    cdef Py_ssize_t i, a, cc, b, d, k
    cdef int n = <int> d_kept
    cdef int lwork = max(1, 2 * n - 1)
    cond_arr = np.zeros((d_kept, d_kept), dtype=np.complex128)
    cdef double complex[:, ::1] cond = cond_arr
    work_arr = np.zeros(lwork, dtype=np.complex128)
    rwork_arr = np.zeros(max(1, 3 * n - 2), dtype=np.float64)
    w_arr = np.zeros(max(1, n), dtype=np.float64)
    cdef double complex[::1] work = work_arr
    cdef double[::1] rwork = rwork_arr
    cdef double[::1] w = w_arr
    cdef int info
    cdef char jobz = b'N'
    cdef char uplo = b'L'

    total = 0.0
    for i in range(2):
        vb0 = v[0][i]
        vb1 = v[1][i]
        if d_kept == 2:
            cond00 = (vb0.conjugate() * rho[0, 0, 0, 0] * vb0
                      + vb0.conjugate() * rho[0, 0, 0, 1] * vb1
                      + vb1.conjugate() * rho[0, 1, 0, 0] * vb0
                      + vb1.conjugate() * rho[0, 1, 0, 1] * vb1)
            cond01 = (vb0.conjugate() * rho[0, 0, 1, 0] * vb0
                      + vb0.conjugate() * rho[0, 0, 1, 1] * vb1
                      + vb1.conjugate() * rho[0, 1, 1, 0] * vb0
                      + vb1.conjugate() * rho[0, 1, 1, 1] * vb1)
            cond11 = (vb0.conjugate() * rho[1, 0, 1, 0] * vb0
                      + vb0.conjugate() * rho[1, 0, 1, 1] * vb1
                      + vb1.conjugate() * rho[1, 1, 1, 0] * vb0
                      + vb1.conjugate() * rho[1, 1, 1, 1] * vb1)
            p = cond00.real + cond11.real
            if p <= prob_cutoff:
                continue
            total += p * log(p)
            center = (cond00.real + cond11.real) / 2.0
            half_gap = sqrt(((cond00.real - cond11.real) / 2.0) ** 2
                            + cond01.real * cond01.real
                            + cond01.imag * cond01.imag)
            lam0 = center - half_gap
            lam1 = center + half_gap
            if lam0 > 0.0:
                total -= lam0 * log(lam0)
            if lam1 > 0.0:
                total -= lam1 * log(lam1)
        else:
            for a in range(d_kept):
                for cc in range(d_kept):
                    acc00 = 0.0
                    for b in range(2):
                        for d in range(2):
                            acc00 = acc00 + v[b][i].conjugate() * rho[a, b, cc, d] * v[d][i]
                    cond[a, cc] = acc00
            p = 0.0
            for a in range(d_kept):
                p += cond[a, a].real
            if p <= prob_cutoff:
                continue
            total += p * log(p)
            zheev(&jobz, &uplo, &n, &cond[0, 0], &n, &w[0],
                  &work[0], &lwork, &rwork[0], &info)
            if info != 0:
                raise RuntimeError(f"zheev failed with info={info}")
            for k in range(d_kept):
                lam = w[k]
                if lam > 0.0:
                    total -= lam * log(lam)
    return total


def conditional_entropy_batch(rho_blocks, bases, double prob_cutoff=1e-14):
    """See ``discordlab._kernels_py.conditional_entropy_batch``."""
    rho_arr = np.ascontiguousarray(rho_blocks, dtype=np.complex128)
    bases_arr = np.asarray(bases, dtype=np.complex128)
    if bases_arr.ndim == 2:
        bases_arr = bases_arr[None, :, :]
    bases_arr = np.ascontiguousarray(bases_arr)

    cdef const double complex[:, :, :, ::1] rho = rho_arr
    cdef const double complex[:, :, ::1] vs = bases_arr
    cdef Py_ssize_t d_kept = rho.shape[0]
    cdef Py_ssize_t d_meas = rho.shape[1]
    cdef Py_ssize_t n_bases = vs.shape[0]
    if vs.shape[1] != d_meas or vs.shape[2] != d_meas:
        raise ValueError("bases shape does not match the measured dimension")

    out_arr = np.zeros(n_bases, dtype=np.float64)
    cdef double[::1] out = out_arr

    # scratch: unnormalized conditional block (row-major) + LAPACK workspace
    cond_arr = np.zeros((d_kept, d_kept), dtype=np.complex128)
    cdef double complex[:, ::1] cond = cond_arr
    cdef int n = <int> d_kept
    cdef int lwork = max(1, 2 * n - 1)
    work_arr = np.zeros(lwork, dtype=np.complex128)
    rwork_arr = np.zeros(max(1, 3 * n - 2), dtype=np.float64)
    w_arr = np.zeros(max(1, n), dtype=np.float64)
    cdef double complex[::1] work = work_arr
    cdef double[::1] rwork = rwork_arr
    cdef double[::1] w = w_arr

    cdef Py_ssize_t g, i, a, c, b, d, k
    cdef double complex amp, acc
    cdef double p, total, re01, im01, center, half_gap, lam0, lam1, lam
    cdef int info
    cdef char jobz = b'N'
    cdef char uplo = b'L'

    for g in range(n_bases):
        total = 0.0
        for i in range(d_meas):
            # cond[a, c] = sum_{b,d} conj(v[b]) rho[a, b, c, d] v[d]
            for a in range(d_kept):
                for c in range(d_kept):
                    acc = 0.0
                    for b in range(d_meas):
                        amp = vs[g, b, i].conjugate()
                        for d in range(d_meas):
                            acc = acc + amp * rho[a, b, c, d] * vs[g, d, i]
                    cond[a, c] = acc
            p = 0.0
            for a in range(d_kept):
                p += cond[a, a].real
            if p <= prob_cutoff:
                continue
            total += p * log(p)
            if d_kept == 2:
                center = (cond[0, 0].real + cond[1, 1].real) / 2.0
                re01 = cond[0, 1].real
                im01 = cond[0, 1].imag
                half_gap = sqrt(((cond[0, 0].real - cond[1, 1].real) / 2.0) ** 2
                                + re01 * re01 + im01 * im01)
                lam0 = center - half_gap
                lam1 = center + half_gap
                if lam0 > 0.0:
                    total -= lam0 * log(lam0)
                if lam1 > 0.0:
                    total -= lam1 * log(lam1)
            else:
                zheev(&jobz, &uplo, &n, &cond[0, 0], &n, &w[0],
                      &work[0], &lwork, &rwork[0], &info)
                if info != 0:
                    raise RuntimeError(f"zheev failed with info={info}")
                for k in range(d_kept):
                    lam = w[k]
                    if lam > 0.0:
                        total -= lam * log(lam)
        out[g] = total
    return out_arr

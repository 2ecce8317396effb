# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Same arithmetic as qds._kernels_py (cyclic complex Jacobi eigensolver and
13/13 Pade exponential with scaling-squaring); the extension hand-rolls the
matrix products and the partial-pivot LU solve so it has no dependency
beyond numpy's array container. Inputs are assumed exactly Hermitian for
jacobi_eigh; callers hermitize first.
"""

import numpy as np

cimport cython
from libc.math cimport ceil, fabs, log2, sqrt

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double complex conj(double complex)

DEF SWEEP_LIMIT = 100

cdef double OFF_REL_TOL = 1e-13
cdef double THETA13 = 5.371920351148152

cdef double[14] PADE13
PADE13[0] = 64764752532480000.0
PADE13[1] = 32382376266240000.0
PADE13[2] = 7771770303897600.0
PADE13[3] = 1187353796428800.0
PADE13[4] = 129060195264000.0
PADE13[5] = 10559470521600.0
PADE13[6] = 670442572800.0
PADE13[7] = 33522128640.0
PADE13[8] = 1323241920.0
PADE13[9] = 40840800.0
PADE13[10] = 960960.0
PADE13[11] = 16380.0
PADE13[12] = 182.0
PADE13[13] = 1.0


cdef double _frob(double complex[:, :] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0, m
    for i in range(n):
        for j in range(n):
            m = cabs(a[i, j])
            acc += m * m
    return sqrt(acc)


cdef double _offdiag(double complex[:, :] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0, m
    for i in range(n):
        for j in range(n):
            if i != j:
                m = cabs(a[i, j])
                acc += m * m
    return sqrt(acc)


def jacobi_eigh(a_in, bint want_vectors=True):
    """Cyclic two-sided Jacobi diagonalization of a Hermitian matrix.

    Returns (w, v): w is the unsorted real diagonal after convergence, v the
    accumulated eigenvector unitary (or None when want_vectors is False).
    """
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128) if want_vectors else None
    if n < 2:
        return np.diagonal(a_arr).real.copy(), v_arr
    cdef double complex[:, :] a = a_arr
    cdef double complex[:, :] v = v_arr if want_vectors else a_arr
    cdef double stop = OFF_REL_TOL * _frob(a, n)
    cdef Py_ssize_t sweep, p, q, k
    cdef double complex w, phase, sp, spc, tp, tq
    cdef double r, tau, t, c, s, off
    for sweep in range(SWEEP_LIMIT):
        off = _offdiag(a, n)
        if off <= stop:
            return np.diagonal(a_arr).real.copy(), v_arr
        for p in range(n - 1):
            for q in range(p + 1, n):
                w = a[p, q]
                r = cabs(w)
                if r < 1e-300:
                    continue
                phase = w / r
                tau = (creal(a[p, p]) - creal(a[q, q])) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                spc = conj(sp)
                for k in range(n):
                    tp = a[p, k]
                    tq = a[q, k]
                    a[p, k] = c * tp + sp * tq
                    a[q, k] = c * tq - spc * tp
                for k in range(n):
                    tp = a[k, p]
                    tq = a[k, q]
                    a[k, p] = c * tp + spc * tq
                    a[k, q] = c * tq - sp * tp
                if want_vectors:
                    for k in range(n):
                        tp = v[k, p]
                        tq = v[k, q]
                        v[k, p] = c * tp + spc * tq
                        v[k, q] = c * tq - sp * tp
    off = _offdiag(a, n)
    if off <= stop:
        return np.diagonal(a_arr).real.copy(), v_arr
    raise RuntimeError(f"jacobi sweep limit reached (off-diagonal norm {off:.3e})")


cdef void _mm(double complex[:, :] a, double complex[:, :] b, double complex[:, :] out, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j, k
    cdef double complex acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = acc + a[i, k] * b[k, j]
            out[i, j] = acc


cdef int _lu_solve(double complex[:, :] a, double complex[:, :] b, Py_ssize_t n) nogil:
    """Overwrite b with a^{-1} b (partial-pivot LU, a destroyed). 0 on success."""
    cdef Py_ssize_t i, j, k, piv
    cdef double best, mag
    cdef double complex factor, tmp
    for k in range(n):
        piv = k
        best = cabs(a[k, k])
        for i in range(k + 1, n):
            mag = cabs(a[i, k])
            if mag > best:
                best = mag
                piv = i
        if best == 0.0:
            return -1
        if piv != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[piv, j]
                a[piv, j] = tmp
                tmp = b[k, j]
                b[k, j] = b[piv, j]
                b[piv, j] = tmp
        for i in range(k + 1, n):
            factor = a[i, k] / a[k, k]
            a[i, k] = factor
            for j in range(k + 1, n):
                a[i, j] = a[i, j] - factor * a[k, j]
            for j in range(n):
                b[i, j] = b[i, j] - factor * b[k, j]
    for k in range(n - 1, -1, -1):
        for j in range(n):
            tmp = b[k, j]
            for i in range(k + 1, n):
                tmp = tmp - a[k, i] * b[i, j]
            b[k, j] = tmp / a[k, k]
    return 0


def expm_pade(a_in):
    """Matrix exponential by 13/13 Pade approximation with scaling-squaring."""
    a_arr = np.array(a_in, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = a_arr.shape[0]
    if n == 0:
        return a_arr
    cdef double complex[:, :] a = a_arr
    cdef Py_ssize_t i, j, sq
    cdef double colsum, norm1 = 0.0
    for j in range(n):
        colsum = 0.0
        for i in range(n):
            colsum += cabs(a[i, j])
        if colsum > norm1:
            norm1 = colsum
    cdef int s = 0
    cdef double scale
    if norm1 > THETA13:
        s = <int> ceil(log2(norm1 / THETA13))
        scale = 2.0 ** s
        for i in range(n):
            for j in range(n):
                a[i, j] = a[i, j] / scale

    a2_arr = np.empty((n, n), dtype=np.complex128)
    a4_arr = np.empty((n, n), dtype=np.complex128)
    a6_arr = np.empty((n, n), dtype=np.complex128)
    t1_arr = np.empty((n, n), dtype=np.complex128)
    u_arr = np.empty((n, n), dtype=np.complex128)
    v_arr = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, :] a2 = a2_arr
    cdef double complex[:, :] a4 = a4_arr
    cdef double complex[:, :] a6 = a6_arr
    cdef double complex[:, :] t1 = t1_arr
    cdef double complex[:, :] u = u_arr
    cdef double complex[:, :] v = v_arr
    _mm(a, a, a2, n)
    _mm(a2, a2, a4, n)
    _mm(a2, a4, a6, n)

    # t1 = b13*A6 + b11*A4 + b9*A2 ; u = A @ (A6 @ t1 + b7*A6 + b5*A4 + b3*A2 + b1*I)
    for i in range(n):
        for j in range(n):
            t1[i, j] = PADE13[13] * a6[i, j] + PADE13[11] * a4[i, j] + PADE13[9] * a2[i, j]
    _mm(a6, t1, u, n)
    for i in range(n):
        for j in range(n):
            u[i, j] = u[i, j] + PADE13[7] * a6[i, j] + PADE13[5] * a4[i, j] + PADE13[3] * a2[i, j]
        u[i, i] = u[i, i] + PADE13[1]
    _mm(a, u, t1, n)  # t1 now holds U

    # v = A6 @ (b12*A6 + b10*A4 + b8*A2) + b6*A6 + b4*A4 + b2*A2 + b0*I
    for i in range(n):
        for j in range(n):
            u[i, j] = PADE13[12] * a6[i, j] + PADE13[10] * a4[i, j] + PADE13[8] * a2[i, j]
    _mm(a6, u, v, n)
    for i in range(n):
        for j in range(n):
            v[i, j] = v[i, j] + PADE13[6] * a6[i, j] + PADE13[4] * a4[i, j] + PADE13[2] * a2[i, j]
        v[i, i] = v[i, i] + PADE13[0]

    # solve (V - U) E = (V + U); reuse a2 as lhs, a4 as rhs
    for i in range(n):
        for j in range(n):
            a2[i, j] = v[i, j] - t1[i, j]
            a4[i, j] = v[i, j] + t1[i, j]
    if _lu_solve(a2, a4, n) != 0:
        raise np.linalg.LinAlgError("singular Pade denominator")
    for sq in range(s):
        _mm(a4, a4, a6, n)
        a4_arr, a6_arr = a6_arr, a4_arr
        a4 = a4_arr
        a6 = a6_arr
    return a4_arr

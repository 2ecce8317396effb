"""Pure-Python numerical kernels (NumPy-vectorized fallback backend).

Two primitives live here: a cyclic two-sided complex Jacobi eigensolver for
Hermitian matrices and a fixed-order (13/13) Pade matrix exponential with
scaling and squaring. qds.backend picks this module when the compiled
extension is unavailable or QDS_PURE_PYTHON=1. Both backends implement the
identical arithmetic; only the loop engine differs.

Inputs are assumed exactly Hermitian (callers hermitize first).
"""

from __future__ import annotations

import numpy as np

_SWEEP_LIMIT = 100
_OFF_REL_TOL = 1e-13

# Numerator coefficients of the degree-13 Pade approximant to exp.
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def jacobi_eigh(a, want_vectors: bool = True):
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns (w, v) with w the unsorted real diagonal after convergence and
    v the accumulated unitary (columns are eigenvectors), or (w, None) when
    want_vectors is False. Convergence: off-diagonal Frobenius norm below
    1e-13 times the Frobenius norm of the input.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128) if want_vectors else None
    if n < 2:
        return np.diagonal(a).real.copy(), v
    stop = _OFF_REL_TOL * np.linalg.norm(a)
    for _ in range(_SWEEP_LIMIT):
        off = np.linalg.norm(a - np.diag(np.diagonal(a)))
        if off <= stop:
            return np.diagonal(a).real.copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                w = a[p, q]
                r = abs(w)
                if r < 1e-300:
                    continue
                phase = w / r
                tau = (a[p, p].real - a[q, q].real) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                # two-sided rotation zeroing a[p, q]: A <- J A J^H
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + sp * row_q
                a[q, :] = c * row_q - np.conj(sp) * row_p
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + np.conj(sp) * col_q
                a[:, q] = c * col_q - sp * col_p
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp + np.conj(sp) * vq
                    v[:, q] = c * vq - sp * vp
    off = np.linalg.norm(a - np.diag(np.diagonal(a)))
    if off <= stop:
        return np.diagonal(a).real.copy(), v
    raise RuntimeError(f"jacobi sweep limit reached (off-diagonal norm {off:.3e})")


def expm_pade(a):
    """Matrix exponential by 13/13 Pade approximation with scaling-squaring."""
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    norm1 = float(np.max(np.sum(np.abs(a), axis=0))) if n else 0.0
    s = 0
    if norm1 > _THETA13:
        s = int(np.ceil(np.log2(norm1 / _THETA13)))
        a = a / (2.0**s)
    b = _PADE13
    ident = np.eye(n, dtype=np.complex128)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    e = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        e = e @ e
    return e

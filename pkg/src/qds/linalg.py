"""Dense complex-matrix kernel: Hermitian eigendecomposition, matrix
exponential, Schatten norms, adjoints, commutators.

Dimensions stay small (a few hundred at most), so everything is dense and
deterministic. The two heavy kernels are dispatched through qds.backend.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import backend
from .errors import InvalidP, NotHermitian

__all__ = [
    "HermEigen",
    "anticommutator",
    "commutator",
    "dagger",
    "expm",
    "herm_eig",
    "herm_eigvals",
    "hs_inner",
    "schatten_norm",
    "singular_values",
]


class HermEigen(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    values: real eigenvalues sorted non-increasing.
    vectors: unitary matrix whose k-th column is the eigenvector of values[k].
    """

    values: np.ndarray
    vectors: np.ndarray


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(A† B)."""
    return complex(np.trace(dagger(a) @ b))


def _hermitian_defect(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - a.conj().T))


def herm_eig(a: np.ndarray) -> HermEigen:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    a : square complex array, Hermitian within 1e-12 (relative Frobenius).

    Returns
    -------
    HermEigen with non-increasing values and unitary column eigenvectors.

    Raises
    ------
    NotHermitian if the input is not Hermitian within tolerance.
    """
    a = np.asarray(a, dtype=np.complex128)
    defect = _hermitian_defect(a)
    if defect > 1e-12 * max(1.0, float(np.linalg.norm(a))):
        raise NotHermitian(f"Hermitian defect {defect:.3e} exceeds tolerance")
    h = (a + a.conj().T) / 2.0
    w, v = backend.jacobi_eigh(h)
    order = np.argsort(-w, kind="stable")
    return HermEigen(w[order].copy(), v[:, order].copy())


def herm_eigvals(a: np.ndarray) -> np.ndarray:
    """Eigenvalues only (non-increasing), skipping eigenvector accumulation."""
    a = np.asarray(a, dtype=np.complex128)
    defect = _hermitian_defect(a)
    if defect > 1e-12 * max(1.0, float(np.linalg.norm(a))):
        raise NotHermitian(f"Hermitian defect {defect:.3e} exceeds tolerance")
    h = (a + a.conj().T) / 2.0
    w, _ = backend.jacobi_eigh(h, want_vectors=False)
    return np.sort(w)[::-1].copy()


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of any square complex matrix."""
    return backend.expm_pade(np.asarray(a, dtype=np.complex128))


def singular_values(a: np.ndarray) -> np.ndarray:
    """Singular values, non-increasing, via the Hermitian kernel on A†A."""
    a = np.asarray(a, dtype=np.complex128)
    w = herm_eigvals(a.conj().T @ a)
    return np.sqrt(np.clip(w, 0.0, None))


def schatten_norm(a: np.ndarray, p: float) -> float:
    """Schatten p-norm (Σ s_k^p)^(1/p); p=inf gives the largest singular value.

    p=1 (the trace norm) is accepted; p < 1 raises InvalidP.
    """
    if not math.isinf(p) and p < 1.0:
        raise InvalidP(f"Schatten norm requires p >= 1 or p = inf, got {p}")
    s = singular_values(a)
    if math.isinf(p):
        return float(s[0]) if s.size else 0.0
    return float(np.sum(s**p) ** (1.0 / p))

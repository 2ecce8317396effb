"""Density operators, ordered spectra, majorization, bistochastic matrices
and their Birkhoff decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    LengthMismatch,
    NotBistochastic,
    NotHermitian,
    NotPositive,
    NotTracePreserving,
    NotUnital,
    TraceNotOne,
)
from .linalg import herm_eig, herm_eigvals

__all__ = [
    "DensityOperator",
    "birkhoff_decompose",
    "eigenvalue_vector",
    "extract_bistochastic",
    "is_bistochastic",
    "majorizes",
    "maximally_mixed",
    "validate_density",
]


@dataclass(frozen=True)
class DensityOperator:
    """Validated density operator (Hermitian, positive, unit trace within tol)."""

    mat: np.ndarray
    tol: float = 1e-9

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def validate_density(a: np.ndarray, tol: float = 1e-9) -> DensityOperator:
    """Check the three state-space invariants and wrap the matrix.

    Raises NotHermitian, NotPositive or TraceNotOne naming the violated
    invariant. The stored matrix is exactly hermitized.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    defect = float(np.linalg.norm(a - a.conj().T))
    if defect > tol:
        raise NotHermitian(f"Hermitian defect {defect:.3e} > tol {tol:.1e}")
    h = (a + a.conj().T) / 2.0
    w = herm_eigvals(h)
    if float(w[-1]) < -tol:
        raise NotPositive(f"minimum eigenvalue {w[-1]:.3e} < -tol")
    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(f"trace {tr!r} differs from 1 beyond tol")
    return DensityOperator(h, tol)


def maximally_mixed(d: int) -> DensityOperator:
    return DensityOperator(np.eye(d, dtype=np.complex128) / d)


def _as_matrix(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=np.complex128)


def eigenvalue_vector(rho) -> np.ndarray:
    """Ordered spectrum of a state: non-increasing, clamped to [0,1], renormalized."""
    w = herm_eigvals(_as_matrix(rho))
    w = np.clip(w, 0.0, 1.0)
    total = float(np.sum(w))
    if total > 0.0:
        w = w / total
    return w


def majorizes(x, y, tol: float = 1e-9) -> bool:
    """True iff y is majorized by x (y ≺ x): every descending partial sum of
    y is bounded by the matching one of x, with equal totals, within tol."""
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    if x.shape != y.shape:
        raise LengthMismatch(f"length {x.size} vs {y.size}")
    cx = np.cumsum(x)
    cy = np.cumsum(y)
    if abs(cx[-1] - cy[-1]) > tol:
        return False
    return bool(np.all(cy <= cx + tol))


def _phase_fix(v: np.ndarray) -> np.ndarray:
    # rotate the largest-magnitude component onto the positive real axis
    k = int(np.argmax(np.abs(v)))
    a = v[k]
    if abs(a) < 1e-300:
        return v
    return v * (np.conj(a) / abs(a))


def _ordered_projectors(mat: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Eigenprojectors ordered by non-increasing eigenvalue, with a
    deterministic tiebreak inside degenerate blocks (phase-fixed vectors
    sorted lexicographically by rounded coefficients)."""
    w, v = herm_eig(mat)
    d = w.size
    cols = [_phase_fix(v[:, k]) for k in range(d)]
    order: list[int] = []
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and abs(w[stop] - w[start]) <= 1e-10:
            stop += 1
        block = list(range(start, stop))
        if len(block) > 1:
            block.sort(key=lambda k: tuple((round(float(z.real), 8), round(float(z.imag), 8)) for z in cols[k]))
        order.extend(block)
        start = stop
    projectors = [np.outer(cols[k], cols[k].conj()) for k in order]
    return w[order], projectors


def extract_bistochastic(phi, rho: DensityOperator) -> np.ndarray:
    """Bistochastic matrix B_jk = tr(Q_j Φ(P_k)) linking the ordered spectra
    of ρ and Φρ: P_k are the eigenprojectors of ρ, Q_j those of Φρ.

    phi must be unital and trace-preserving within 1e-9 (checked)."""
    d = rho.dim
    ident = np.eye(d, dtype=np.complex128)
    img = phi.apply(ident)
    if float(np.linalg.norm(img - ident)) > 1e-9 * d:
        raise NotUnital(f"Φ(1) differs from 1 by {np.linalg.norm(img - ident):.3e}")
    for j in range(d):
        for k in range(d):
            e = np.zeros((d, d), dtype=np.complex128)
            e[j, k] = 1.0
            tr = complex(np.trace(phi.apply(e)))
            if abs(tr - (1.0 if j == k else 0.0)) > 1e-9:
                raise NotTracePreserving(f"tr Φ(E[{j},{k}]) = {tr!r}")
    out = phi.apply(rho.mat)
    out = (out + out.conj().T) / 2.0
    _, p_list = _ordered_projectors(rho.mat)
    _, q_list = _ordered_projectors(out)
    b = np.empty((d, d), dtype=float)
    for j in range(d):
        for k in range(d):
            b[j, k] = float(np.trace(q_list[j] @ phi.apply(p_list[k])).real)
    return b


def is_bistochastic(b: np.ndarray, tol: float = 1e-9) -> bool:
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        return False
    if float(np.min(b)) < -1e-10:
        return False
    ones = np.ones(b.shape[0])
    return bool(
        np.all(np.abs(b.sum(axis=0) - ones) <= tol) and np.all(np.abs(b.sum(axis=1) - ones) <= tol)
    )


def _find_matching(support: np.ndarray) -> list[int] | None:
    """Perfect matching rows->cols on a boolean support matrix, by augmenting
    paths. Returns match[row] = col, or None if no perfect matching exists."""
    d = support.shape[0]
    col_owner = [-1] * d  # column -> row

    def try_row(r: int, seen: list[bool]) -> bool:
        for c in range(d):
            if support[r, c] and not seen[c]:
                seen[c] = True
                if col_owner[c] < 0 or try_row(col_owner[c], seen):
                    col_owner[c] = r
                    return True
        return False

    for r in range(d):
        if not try_row(r, [False] * d):
            return None
    out = [-1] * d
    for c, r in enumerate(col_owner):
        out[r] = c
    return out


def _bottleneck_matching(work: np.ndarray) -> list[int] | None:
    """Perfect matching maximizing the minimum matched entry: binary search
    over candidate thresholds (matching existence is monotone in the
    threshold). Falls back to None when even the full positive support has
    no perfect matching."""
    vals = sorted({float(v) for v in work[work > 0.0]}, reverse=True)
    if not vals:
        return None
    best = None
    left, right = 0, len(vals) - 1
    while left <= right:
        mid = (left + right) // 2
        match = _find_matching(work >= vals[mid] - 1e-15)
        if match is not None:
            best = match
            right = mid - 1
        else:
            left = mid + 1
    return best


def _null_combination(perms: list[tuple[int, ...]], d: int) -> np.ndarray | None:
    """Affine dependence among permutation matrices: eta with Σ eta_i = 0 and
    Σ eta_i P_i = 0, found from the smallest eigenpair of the Gram matrix."""
    t = len(perms)
    m = np.zeros((d * d + 1, t))
    for i, perm in enumerate(perms):
        p = np.zeros((d, d))
        p[np.arange(d), list(perm)] = 1.0
        m[: d * d, i] = p.reshape(-1)
        m[d * d, i] = 1.0
    gram = m.T @ m
    w, v = herm_eig(gram.astype(np.complex128))
    if float(w[-1]) > 1e-10:
        return None
    eta = v[:, -1].real
    if float(np.linalg.norm(m @ eta)) > 1e-9:
        return None
    return eta


def birkhoff_decompose(b: np.ndarray) -> list[tuple[float, tuple[int, ...]]]:
    """Decompose a bistochastic matrix into a convex combination of
    permutations: returns [(weight, perm)] with perm[i] the column carrying
    row i. Term count is at most d²-2d+2; reconstruction within 1e-9."""
    b = np.asarray(b, dtype=float)
    if not is_bistochastic(b):
        raise NotBistochastic("input fails bistochastic invariants")
    d = b.shape[0]
    work = b.copy()
    work[(work > -1e-10) & (work < 0.0)] = 0.0
    terms: list[tuple[float, tuple[int, ...]]] = []
    for _ in range(d * d + d):
        total = float(work.sum()) / d
        if total <= 1e-12:
            break
        match = _bottleneck_matching(work)
        if match is None:
            raise NotBistochastic("support lost a perfect matching; input too noisy")
        weight = float(min(work[r, match[r]] for r in range(d)))
        terms.append((weight, tuple(match)))
        for r in range(d):
            work[r, match[r]] -= weight
        work[np.abs(work) < 1e-12] = 0.0
    # Carathéodory reduction down to the affine-dimension bound
    limit = d * d - 2 * d + 2
    while len(terms) > limit:
        weights = np.array([w for w, _ in terms])
        perms = [p for _, p in terms]
        eta = _null_combination(perms, d)
        if eta is None:
            break
        pos = eta > 1e-15
        if not np.any(pos):
            eta = -eta
            pos = eta > 1e-15
        tau = float(np.min(weights[pos] / eta[pos]))
        weights = weights - tau * eta
        terms = [(float(w), p) for w, p in zip(weights, perms) if w > 1e-12]
    return terms

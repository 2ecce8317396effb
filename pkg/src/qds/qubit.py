"""Bloch-ball formalism for qubit maps and generators.

Operators are expanded in the half-Pauli basis (identity/2, sigma_k/2), so a
map becomes a real 4x4 matrix, states become (1, r) with r in the unit ball,
and unital trace-preserving generators act as r' = F r. The module carries
the positivity criterion on F, the (h, K) parametrization with its
dissipation matrix P = -(F + F^T), cone classification with principal-minor
cross checks, the rotation/reflection split of positive unital maps over
SU(2) conjugations, and stationary-state extraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    NonUniqueStationaryState,
    NotAdjointPreserving,
    NotPositive,
    NotTracePreserving,
    NotUnital,
)
from .gkls import GklsGenerator, Superoperator, compile_generator, unvec
from .linalg import dagger, herm_eig, herm_eigvals
from .states import DensityOperator, validate_density

__all__ = [
    "ConeVerdict",
    "QubitGenerator",
    "QubitGeneratorParams",
    "asymptotic_state",
    "ball_invariance_verdict",
    "bloch_vector",
    "build_qubit_generator",
    "classify_cone",
    "is_positive_qubit_generator",
    "matrix_rep",
    "state_from_bloch",
    "stormer_decompose",
]

_SIGMA = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
_HALF = tuple(s / 2.0 for s in _SIGMA)


def bloch_vector(rho: DensityOperator) -> np.ndarray:
    """Coordinates r with rho = (1/2)(1 + r·sigma)."""
    m = rho.mat if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=np.complex128)
    return np.array([float(np.trace(m @ s).real) for s in _SIGMA[1:]])


def state_from_bloch(r) -> DensityOperator:
    r = np.asarray(r, dtype=float)
    m = _HALF[0].copy()
    for k in range(3):
        m = m + r[k] * _HALF[k + 1]
    return validate_density(m)


def matrix_rep(s: Superoperator) -> np.ndarray:
    """Real 4x4 representation M_jk = <half_sigma_j, S(half_sigma_k)> scaled
    so the identity map gives the 4x4 identity. Requires an
    adjoint-preserving map (else the representation is not real)."""
    if s.dim != 2:
        raise ValueError(f"qubit representation needs dim 2, got {s.dim}")
    scale = max(1.0, float(np.linalg.norm(s.mat)))
    for j in range(2):
        for k in range(2):
            e = np.zeros((2, 2), dtype=np.complex128)
            e[j, k] = 1.0
            defect = float(np.linalg.norm(s.apply(e.conj().T) - dagger(s.apply(e))))
            if defect > 1e-11 * scale:
                raise NotAdjointPreserving(f"adjoint defect {defect:.3e} on basis ({j},{k})")
    m = np.empty((4, 4), dtype=float)
    for j in range(4):
        for k in range(4):
            val = 2.0 * complex(np.trace(_HALF[j] @ s.apply(_HALF[k])))
            m[j, k] = val.real
    return m


@dataclass(frozen=True)
class QubitGeneratorParams:
    """Hamiltonian 3-vector h and real symmetric noise matrix K."""

    h: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float).reshape(3)
        k = np.asarray(self.K, dtype=float).reshape(3, 3)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "K", (k + k.T) / 2.0)


@dataclass(frozen=True)
class QubitGenerator:
    """Compiled qubit generator with its Bloch block F and P = -(F + F^T)."""

    L: Superoperator
    F: np.ndarray
    P: np.ndarray
    gen: GklsGenerator
    params: QubitGeneratorParams


def _bloch_flow_matrix(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    k11, k22, k33 = k[0, 0], k[1, 1], k[2, 2]
    k12, k13, k23 = k[0, 1], k[0, 2], k[1, 2]
    h1, h2, h3 = h
    return np.array(
        [
            [-(k22 + k33) / 2.0, k12 / 2.0 - h3, k13 / 2.0 + h2],
            [k12 / 2.0 + h3, -(k11 + k33) / 2.0, k23 / 2.0 - h1],
            [k13 / 2.0 - h2, k23 / 2.0 + h1, -(k11 + k22) / 2.0],
        ]
    )


def build_qubit_generator(params: QubitGeneratorParams) -> QubitGenerator:
    """Compile the (h, K) generator and return it with the analytic Bloch
    block F and the dissipation matrix P. K may be indefinite; the noise
    list then carries negative rates and the generator is positive at best."""
    h = params.h
    k = params.K
    ham = h[0] * _HALF[1] + h[1] * _HALF[2] + h[2] * _HALF[3]
    w, v = herm_eig(k.astype(np.complex128))
    noise = []
    for a in range(3):
        if abs(float(w[a])) <= 1e-14:
            continue
        vecr = v[:, a].real
        op = vecr[0] * _HALF[1] + vecr[1] * _HALF[2] + vecr[2] * _HALF[3]
        noise.append((float(w[a]), op))
    gen = GklsGenerator(ham, noise)
    f = _bloch_flow_matrix(h, k)
    p = -(f + f.T)
    return QubitGenerator(L=compile_generator(gen), F=f, P=p, gen=gen, params=params)


def is_positive_qubit_generator(f: np.ndarray) -> bool:
    """True iff the flow r' = F r keeps the unit ball invariant: F + F^T <= 0."""
    f = np.asarray(f, dtype=float)
    s = (f + f.T).astype(np.complex128)
    w = herm_eigvals(s)
    return bool(float(w[0]) <= 1e-10)


def _max_quadratic_on_sphere(s: np.ndarray, b: np.ndarray) -> float:
    """Global maximum of n^T s n / 2 + b·n over the unit sphere.

    Stationarity gives (mu I - s) n = b with multiplier mu >= lambda_max(s);
    the secular equation sum beta_i^2/(mu - lambda_i)^2 = 1 is solved by
    bisection, with the degenerate (hard) case handled explicitly."""
    w, q = herm_eig(s.astype(np.complex128))
    lam = w
    beta = q.real.T @ b
    bnorm = float(np.linalg.norm(beta))
    if bnorm < 1e-14:
        return float(lam[0]) / 2.0
    top = np.abs(lam - lam[0]) <= 1e-12 * max(1.0, abs(lam[0]))
    beta_top = float(np.linalg.norm(beta[top]))

    def secular(mu: float) -> float:
        # mu == lam[0] is a legal probe; the pole belongs to the > 1 side
        # of the bracket, so map both inf and 0/0 there
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            val = float(np.sum((beta / (mu - lam)) ** 2))
        return float("inf") if math.isnan(val) else val

    hard = False
    if beta_top < 1e-13 * max(1.0, bnorm):
        rest = ~top
        g_at_top = float(np.sum((beta[rest] / (lam[0] - lam[rest])) ** 2)) if np.any(rest) else 0.0
        hard = g_at_top <= 1.0
    if hard:
        n = np.zeros(3)
        rest = ~top
        n[rest] = beta[rest] / (lam[0] - lam[rest])
        tau_sq = max(0.0, 1.0 - float(np.sum(n**2)))
        return 0.5 * (float(np.sum(lam * n**2)) + float(lam[0]) * tau_sq) + float(
            np.sum(beta * n)
        )
    lo = lam[0] + 1e-300
    hi = lam[0] + bnorm
    while secular(lo) <= 1.0:
        lo = lam[0] + (lo - lam[0]) * 0.5 + 1e-300
        if lo - lam[0] < 1e-280:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if secular(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    n = beta / (mu - lam)
    norm = float(np.linalg.norm(n))
    if norm > 0:
        n = n / norm
    return 0.5 * float(np.sum(lam * n**2)) + float(np.sum(beta * n))


def ball_invariance_verdict(l: Superoperator) -> bool:
    """Exact positivity verdict for a qubit generator, drift included:
    max over the unit sphere of n·(F n + m) must be nonpositive."""
    m4 = matrix_rep(l)
    if float(np.linalg.norm(m4[0, :])) > 1e-9:
        return False  # not trace-annihilating: outside the semigroup setting
    f = m4[1:, 1:]
    drift = m4[1:, 0]
    if float(np.linalg.norm(drift)) <= 1e-12:
        return is_positive_qubit_generator(f)
    peak = _max_quadratic_on_sphere(f + f.T, drift)
    return bool(peak <= 5e-11)


@dataclass(frozen=True)
class ConeVerdict:
    verdict: str  # "CPTU", "PTU_only", or "Outside"
    K_eigenvalues: tuple
    P_eigenvalues: tuple
    minors: tuple
    minors_consistent: bool


def _principal_minors(p: np.ndarray) -> tuple:
    idx = (0, 1, 2)
    firsts = tuple(float(p[i, i]) for i in idx)
    seconds = tuple(
        float(p[i, i] * p[j, j] - p[i, j] * p[j, i]) for i, j in combinations(idx, 2)
    )
    third = (float(np.linalg.det(p)),)
    return firsts + seconds + third


def classify_cone(params: QubitGeneratorParams) -> ConeVerdict:
    """Cone membership of the (h, K) generator: CPTU iff K is PSD, PTU_only
    iff P is PSD while K is not, Outside otherwise. The P verdict is
    cross-checked against the nonnegativity of all principal minors."""
    built = build_qubit_generator(params)
    k_eigs = herm_eigvals(params.K.astype(np.complex128)).real
    p_eigs = herm_eigvals(built.P.astype(np.complex128)).real
    minors = _principal_minors(built.P)
    k_psd = float(k_eigs[-1]) >= -1e-10
    p_psd = float(p_eigs[-1]) >= -1e-10
    minors_psd = all(m >= -1e-8 for m in minors)
    if k_psd:
        verdict = "CPTU"
    elif p_psd:
        verdict = "PTU_only"
    else:
        verdict = "Outside"
    return ConeVerdict(
        verdict=verdict,
        K_eigenvalues=tuple(float(x) for x in k_eigs),
        P_eigenvalues=tuple(float(x) for x in p_eigs),
        minors=minors,
        minors_consistent=(minors_psd == p_psd),
    )


def _complete_orthonormal(cols: list[np.ndarray]) -> list[np.ndarray]:
    out = list(cols)
    for cand_idx in range(3):
        if len(out) == 3:
            break
        cand = np.zeros(3)
        cand[cand_idx] = 1.0
        for u in out:
            cand = cand - float(u @ cand) * u
        norm = float(np.linalg.norm(cand))
        if norm > 0.1:
            out.append(cand / norm)
    return out


def _svd3(lam_mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sign-adjusted SVD of a real 3x3 matrix: lam_mat = U D V^T with
    U, V in SO(3) and D diagonal (possibly negative entries)."""
    b = lam_mat.T @ lam_mat
    w, v_c = herm_eig(b.astype(np.complex128))
    v = v_c.real
    for a in range(3):  # re-normalize against rounding
        v[:, a] = v[:, a] / np.linalg.norm(v[:, a])
    if np.linalg.det(v) < 0:
        v[:, 2] = -v[:, 2]
    sig = np.sqrt(np.clip(w, 0.0, None))
    cutoff = 1e-8 * max(1.0, float(sig[0]))
    good: list[np.ndarray] = []
    for a in range(3):
        if sig[a] > cutoff:
            good.append(lam_mat @ v[:, a] / sig[a])
        else:
            break
    cols = _complete_orthonormal(good)
    u = np.column_stack(cols)
    for _ in range(3):  # Newton polar iteration onto the orthogonal group
        u = 0.5 * u @ (3.0 * np.eye(3) - u.T @ u)
    if np.linalg.det(u) < 0:
        u[:, 2] = -u[:, 2]
    d = u.T @ lam_mat @ v
    return u, np.diag(d).copy(), v


def _su2_from_so3(r: np.ndarray) -> np.ndarray:
    """SU(2) element covering a rotation, real-nonnegative (1,1) entry."""
    t = float(np.trace(r))
    if t >= r[0, 0] and t >= r[1, 1] and t >= r[2, 2]:
        q0 = 0.5 * np.sqrt(max(0.0, 1.0 + t))
        q = np.array(
            [r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]]
        ) / (4.0 * q0)
    else:
        i = int(np.argmax([r[0, 0], r[1, 1], r[2, 2]]))
        j, k = (i + 1) % 3, (i + 2) % 3
        qi = 0.5 * np.sqrt(max(0.0, 1.0 + r[i, i] - r[j, j] - r[k, k]))
        q = np.zeros(3)
        q[i] = qi
        q0 = (r[k, j] - r[j, k]) / (4.0 * qi)
        q[j] = (r[j, i] + r[i, j]) / (4.0 * qi)
        q[k] = (r[k, i] + r[i, k]) / (4.0 * qi)
    if q0 < 0:
        q0, q = -q0, -q
    return q0 * _SIGMA[0] - 1j * (q[0] * _SIGMA[1] + q[1] * _SIGMA[2] + q[2] * _SIGMA[3])


_EVEN_SIGNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
_ODD_SIGNS = ((1, 1, -1), (1, -1, 1), (-1, 1, 1), (-1, -1, -1))
_TAU_BLOCH = np.diag([1.0, -1.0, 1.0])  # transposition in the computational basis


def _weights_for(lams: np.ndarray, signs) -> np.ndarray | None:
    mat = np.vstack([np.array(signs, dtype=float).T, np.ones(len(signs))])
    rhs = np.concatenate([lams, [1.0]])
    if mat.shape[0] != mat.shape[1]:
        raise ValueError("need exactly 4 sign vectors")
    if abs(np.linalg.det(mat)) < 1e-12:
        return None
    w = np.linalg.solve(mat, rhs)
    if np.all(w >= -1e-12):
        return np.clip(w, 0.0, None)
    return None


def stormer_decompose(s: Superoperator) -> dict:
    """Split a positive unital trace-preserving qubit map into convex parts
    conjugated by SU(2) elements: mu-terms act as A -> U A U†, nu-terms as
    A -> U A^T U†. CP inputs come out with an empty nu list.

    Returns {"mu": [(weight, U)], "nu": [(weight, U)]}."""
    try:
        m4 = matrix_rep(s)
    except NotAdjointPreserving as exc:
        raise NotPositive(f"map is not adjoint-preserving: {exc}") from exc
    if float(np.linalg.norm(m4[0, :] - np.array([1.0, 0, 0, 0]))) > 1e-9:
        raise NotTracePreserving("first row of the Bloch matrix must be (1,0,0,0)")
    if float(np.linalg.norm(m4[:, 0] - np.array([1.0, 0, 0, 0]))) > 1e-9:
        raise NotUnital("first column of the Bloch matrix must be (1,0,0,0)")
    lam_mat = m4[1:, 1:]
    u, d_vals, v = _svd3(lam_mat)
    if float(np.max(np.abs(d_vals))) > 1.0 + 1e-9:
        raise NotPositive(f"Bloch block has singular value {np.max(np.abs(d_vals)):.12f} > 1")
    lams = np.clip(d_vals, -1.0, 1.0)
    r2 = v.T

    support = None
    weights = _weights_for(lams, _EVEN_SIGNS)
    if weights is not None:
        support = list(zip(weights, _EVEN_SIGNS))
    if support is None:
        weights = _weights_for(lams, _ODD_SIGNS)
        if weights is not None:
            support = list(zip(weights, _ODD_SIGNS))
    if support is None:
        all_signs = _EVEN_SIGNS + _ODD_SIGNS
        for combo in combinations(range(8), 4):
            cand = _weights_for(lams, [all_signs[i] for i in combo])
            if cand is not None:
                support = [(cand[j], all_signs[combo[j]]) for j in range(4)]
                break
    if support is None:
        raise NotPositive("Bloch block is outside the positive unital polytope")

    mu: list[tuple[float, np.ndarray]] = []
    nu: list[tuple[float, np.ndarray]] = []
    for weight, signs in support:
        if weight <= 1e-12:
            continue
        rot = u @ np.diag(np.array(signs, dtype=float)) @ r2
        parity = signs[0] * signs[1] * signs[2]
        if parity > 0:
            mu.append((float(weight), _su2_from_so3(rot)))
        else:
            nu.append((float(weight), _su2_from_so3(rot @ _TAU_BLOCH)))
    return {"mu": mu, "nu": nu}


def asymptotic_state(l: Superoperator) -> DensityOperator:
    """Unique stationary state of a relaxing semigroup, from the null space
    of the compiled generator. Raises NonUniqueStationaryState when the
    null space is not one-dimensional (or carries no trace)."""
    m = l.mat
    scale = float(np.linalg.norm(m))
    w, v = herm_eig(m.conj().T @ m)
    sig = np.sqrt(np.clip(w, 0.0, None))
    null_idx = [i for i in range(sig.size) if sig[i] <= 1e-10 * max(scale, 1e-300)]
    if len(null_idx) != 1:
        raise NonUniqueStationaryState(f"null space dimension {len(null_idx)}")
    rho = unvec(v[:, null_idx[0]], l.dim)
    rho = (rho + rho.conj().T) / 2.0
    tr = float(np.trace(rho).real)
    if abs(tr) < 1e-10:
        raise NonUniqueStationaryState("stationary direction carries no trace")
    return validate_density(rho / tr, tol=1e-7)

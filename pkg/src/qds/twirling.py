"""Semigroups built from unitary conjugations.

Covers the Poisson-compound family exp(t·lam·(U·U† - id)) in closed form,
convex mixtures of unitary conjugations, generators that combine selfadjoint
noise with a mixture-minus-identity jump term, trace-preserving projection
semigroups, and signed-weight atomic mixtures (unital and trace-preserving by
construction, positive only sometimes; the flag is computed separately).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._random import haar_unitary
from .errors import (
    DimensionMismatch,
    NotCPTP,
    NotIdempotent,
    NotOrthonormal,
    NotSelfadjoint,
    NotUnitary,
    WeightsNotNormalized,
    WeightsNotProbability,
)
from .gkls import GklsGenerator, Superoperator, choi_matrix, compile_generator, vec
from .linalg import dagger, herm_eigvals, hs_inner

__all__ = [
    "AtomicMeasure",
    "RandomUnitarySpec",
    "generalized_twirl_map",
    "is_positive_map_sampled",
    "poisson_twirl",
    "projection_semigroup",
    "random_unitary_map",
    "twirl_generator",
    "twirl_gkls",
]

_POISSON_TAIL = 1e-14
_POISSON_CAP = 10**4


def _check_unitary(u: np.ndarray, tol: float = 1e-11) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    d = u.shape[0]
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(d)))
    if defect > tol * d:
        raise NotUnitary(f"unitarity defect {defect:.3e}")
    return u


def _atom_dim(pairs) -> int:
    dims = {u.shape[0] for _, u in pairs}
    if len(dims) != 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite list of (weight, unitary) atoms with weights summing to one.

    Weights may be negative; `probability` reports whether they are not."""

    atoms: tuple

    def __post_init__(self):
        pairs = tuple((float(w), _check_unitary(u)) for w, u in self.atoms)
        if not pairs:
            raise WeightsNotNormalized("empty atom list")
        total = sum(w for w, _ in pairs)
        if abs(total - 1.0) > 1e-10:
            raise WeightsNotNormalized(f"weights sum to {total!r}, need 1")
        _atom_dim(pairs)
        object.__setattr__(self, "atoms", pairs)

    @property
    def dim(self) -> int:
        return self.atoms[0][1].shape[0]

    @property
    def probability(self) -> bool:
        return all(w >= 0.0 for w, _ in self.atoms)


@dataclass(frozen=True)
class RandomUnitarySpec:
    """Probability mixture (p_j, U_j) with strictly positive weights."""

    terms: tuple

    def __post_init__(self):
        pairs = tuple((float(p), _check_unitary(u)) for p, u in self.terms)
        if not pairs:
            raise WeightsNotProbability("empty term list")
        for p, _ in pairs:
            if p <= 0.0:
                raise WeightsNotProbability(f"weight {p!r} is not positive")
        total = sum(p for p, _ in pairs)
        if abs(total - 1.0) > 1e-10:
            raise WeightsNotProbability(f"weights sum to {total!r}, need 1")
        _atom_dim(pairs)
        object.__setattr__(self, "terms", pairs)

    @property
    def dim(self) -> int:
        return self.terms[0][1].shape[0]


def _mixture_superoperator(pairs, d: int) -> Superoperator:
    acc = np.zeros((d * d, d * d), dtype=np.complex128)
    for w, u in pairs:
        acc += w * np.kron(u.conj(), u)
    return Superoperator(d, acc)


def poisson_twirl(lam: float, u: np.ndarray, t: float) -> Superoperator:
    """Closed form of exp(t·lam·(U·U† - id)): the compound-Poisson sum
    e^{-lam t} sum_n (lam t)^n/n! U^n (·) U†^n, truncated when the Poisson
    tail mass drops below 1e-14 (term cap 10^4)."""
    if lam <= 0:
        raise ValueError(f"rate must be positive, got {lam}")
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    u = _check_unitary(u)
    d = u.shape[0]
    mu = lam * t
    if mu == 0.0:
        return Superoperator.identity(d)
    acc = np.zeros((d * d, d * d), dtype=np.complex128)
    un = np.eye(d, dtype=np.complex128)
    log_mu = math.log(mu)
    cum = 0.0
    for n in range(_POISSON_CAP + 1):
        p = math.exp(-mu + n * log_mu - math.lgamma(n + 1))
        acc += p * np.kron(un.conj(), un)
        cum += p
        if 1.0 - cum < _POISSON_TAIL:
            break
        un = un @ u
    return Superoperator(d, acc)


def random_unitary_map(spec) -> Superoperator:
    """Mixture of unitary conjugations: unital, trace-preserving, CP."""
    if isinstance(spec, AtomicMeasure):
        if not spec.probability:
            raise WeightsNotProbability("measure carries negative weights")
        pairs = spec.atoms
    elif isinstance(spec, RandomUnitarySpec):
        pairs = spec.terms
    else:
        pairs = RandomUnitarySpec(terms=tuple(spec)).terms
    return _mixture_superoperator(pairs, pairs[0][1].shape[0])


def generalized_twirl_map(sigma: AtomicMeasure) -> Superoperator:
    """Signed mixture of unitary conjugations. Unital and trace-preserving
    for any weights summing to one; positivity is not guaranteed and should
    be queried via is_positive_map_sampled."""
    if not isinstance(sigma, AtomicMeasure):
        sigma = AtomicMeasure(atoms=tuple(sigma))
    return _mixture_superoperator(sigma.atoms, sigma.dim)


def is_positive_map_sampled(s: Superoperator, samples: int = 500, seed: int = 0) -> bool:
    """Positivity flag for a map (not a generator). Qubit trace-preserving
    inputs get the exact criterion: the image of the Bloch sphere must stay
    inside the closed unit ball. Everything else is sampled: `samples`
    random pure states, image spectra bounded below by -1e-9."""
    d = s.dim
    if d == 2:
        from .errors import NotAdjointPreserving
        from .qubit import _max_quadratic_on_sphere, matrix_rep

        try:
            m4 = matrix_rep(s)
        except NotAdjointPreserving:
            return False
        if float(np.linalg.norm(m4[0, :] - np.array([1.0, 0, 0, 0]))) <= 1e-9:
            lam_mat = m4[1:, 1:]
            shift = m4[1:, 0]
            peak_sq = _max_quadratic_on_sphere(
                2.0 * lam_mat.T @ lam_mat, 2.0 * lam_mat.T @ shift
            ) + float(shift @ shift)
            return bool(peak_sq <= 1.0 + 1e-9)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        psi = rng.normal(size=d) + 1j * rng.normal(size=d)
        psi /= np.linalg.norm(psi)
        img = s.apply(np.outer(psi, psi.conj()))
        img = (img + img.conj().T) / 2.0
        if float(herm_eigvals(img)[-1]) < -1e-9:
            return False
    return True


def twirl_gkls(gamma0: float, r, diag, h: np.ndarray) -> GklsGenerator:
    """Generator combining a Hamiltonian, selfadjoint orthonormal noise, and
    a jump term gamma0·(R - id) for a unitary mixture R. Returned in noise
    form; `twirl_generator` compiles it."""
    if gamma0 < 0:
        raise ValueError(f"gamma0 must be nonnegative, got {gamma0}")
    h = np.asarray(h, dtype=np.complex128)
    d = h.shape[0]
    if float(np.linalg.norm(h - dagger(h))) > 1e-10 * max(1.0, float(np.linalg.norm(h))):
        raise NotSelfadjoint("Hamiltonian is not selfadjoint")
    if abs(complex(np.trace(h))) > 1e-10 * max(1.0, float(np.linalg.norm(h))):
        raise NotOrthonormal("Hamiltonian must be traceless (orthogonal to the identity)")
    ops = []
    for rate, op in diag:
        if rate < 0:
            raise ValueError(f"noise rate must be nonnegative, got {rate}")
        op = np.asarray(op, dtype=np.complex128)
        if op.shape != (d, d):
            raise DimensionMismatch(f"noise operator shape {op.shape}, expected {(d, d)}")
        scale = max(1.0, float(np.linalg.norm(op)))
        if float(np.linalg.norm(op - dagger(op))) > 1e-10 * scale:
            raise NotSelfadjoint("noise operator is not selfadjoint")
        if abs(complex(np.trace(op))) > 1e-10 * scale:
            raise NotOrthonormal("noise operator is not traceless")
        ops.append((float(rate), op))
    for i in range(len(ops)):
        for j in range(i, len(ops)):
            g = complex(hs_inner(ops[i][1], ops[j][1]))
            target = 1.0 if i == j else 0.0
            if abs(g - target) > 1e-10:
                raise NotOrthonormal(f"<L_{i}, L_{j}> = {g!r}, expected {target}")
    noise = list(ops)
    if gamma0 > 0:
        if r is None:
            raise ValueError("gamma0 > 0 needs a unitary mixture")
        if not isinstance(r, RandomUnitarySpec):
            r = RandomUnitarySpec(terms=tuple(r))
        if r.dim != d:
            raise DimensionMismatch(f"mixture dimension {r.dim}, expected {d}")
        for p, u in r.terms:
            noise.append((gamma0 * p, u))
    return GklsGenerator(h, noise)


def twirl_generator(gamma0: float, r, diag, h: np.ndarray) -> Superoperator:
    """Compiled form of twirl_gkls; always a unital canonical-form generator."""
    return compile_generator(twirl_gkls(gamma0, r, diag, h))


def projection_semigroup(p: Superoperator, gamma: float, t: float) -> Superoperator:
    """Interpolation P + e^{-gamma t}(id - P) for an idempotent CPTP P;
    matches exp(-gamma t (id - P)) because (id - P) is idempotent too."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    d = p.dim
    eye = np.eye(d * d, dtype=np.complex128)
    if float(np.linalg.norm(p.mat @ p.mat - p.mat)) > 1e-10:
        raise NotIdempotent("P squared differs from P")
    idvec = vec(np.eye(d, dtype=np.complex128))
    if float(np.linalg.norm(p.mat.conj().T @ idvec - idvec)) > 1e-10 * d:
        raise NotCPTP("P is not trace-preserving")
    choi_min = float(herm_eigvals(choi_matrix(p))[-1])
    if choi_min < -1e-9:
        raise NotCPTP(f"Choi matrix has eigenvalue {choi_min:.3e}")
    return Superoperator(d, p.mat + math.exp(-gamma * t) * (eye - p.mat))

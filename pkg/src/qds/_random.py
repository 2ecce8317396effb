"""Seeded sampling helpers shared by the classifiers, the CLI and the tests."""

from __future__ import annotations

import numpy as np

from .linalg import dagger


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix with the
    standard phase correction on the R diagonal."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    ph = np.diagonal(r).copy()
    ph = ph / np.abs(ph)
    return q * ph


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt-style random state GG†/tr(GG†)."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ dagger(g)
    return m / np.trace(m).real


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (g + dagger(g)) / 2.0


def random_traceless_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    h = random_hermitian(d, rng, scale)
    return h - np.trace(h) / d * np.eye(d)


def random_traceless_orthonormal_set(d: int, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Gram-Schmidt in the traceless Hermitian subspace (HS inner product)."""
    if count > d * d - 1:
        raise ValueError(f"at most {d * d - 1} orthonormal traceless operators exist")
    ops: list[np.ndarray] = []
    while len(ops) < count:
        cand = random_traceless_hermitian(d, rng)
        for op in ops:
            cand = cand - np.trace(dagger(op) @ cand) * op
        norm = float(np.sqrt(np.trace(dagger(cand) @ cand).real))
        if norm > 1e-6:
            ops.append(cand / norm)
    return ops


def random_pure_bloch(rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the Bloch sphere."""
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)

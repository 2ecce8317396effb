"""Entropy functionals evaluated on density-operator spectra.

Four concrete families (von Neumann, Tsallis, Renyi, Schatten-norm defect)
plus a generic composite family outer(tr g_1(rho), ..., tr g_n(rho)) whose
monotonicity-under-mixing is guaranteed by a declared direction/curvature
consistency check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InconsistentSpec, InvalidP, InvalidQ
from .states import DensityOperator, eigenvalue_vector

__all__ = [
    "EntropySpec",
    "entropy_from_spectrum",
    "generic_entropy",
    "renyi",
    "schatten_defect",
    "tsallis",
    "von_neumann",
]

_INNER_PROBE = (0.0, 1e-12, 0.25, 0.5, 1.0)


@dataclass(frozen=True)
class EntropySpec:
    """Description of one entropy functional; use the factory classmethods."""

    kind: str
    q: float | None = None
    p: float | None = None
    outer: Callable[..., float] | None = None
    increasing: bool | None = None
    inners: tuple[Callable[[float], float], ...] = field(default=())
    curvatures: tuple[str, ...] = field(default=())

    @classmethod
    def von_neumann(cls) -> "EntropySpec":
        return cls(kind="vn")

    @classmethod
    def tsallis(cls, q: float) -> "EntropySpec":
        if q <= 0:
            raise InvalidQ(f"Tsallis parameter must be positive, got {q}")
        return cls(kind="tsallis", q=float(q))

    @classmethod
    def renyi(cls, q: float) -> "EntropySpec":
        if q <= 0:
            raise InvalidQ(f"Renyi parameter must be positive, got {q}")
        return cls(kind="renyi", q=float(q))

    @classmethod
    def schatten_defect(cls, p: float) -> "EntropySpec":
        if not math.isinf(p) and p <= 1:
            raise InvalidP(f"norm defect requires p > 1 or p = inf, got {p}")
        return cls(kind="np", p=float(p))

    @classmethod
    def generic(
        cls,
        outer: Callable[..., float],
        increasing: bool,
        inners: Sequence[Callable[[float], float]],
        curvatures: Sequence[str],
    ) -> "EntropySpec":
        """Composite entropy outer(tr g_1, ..., tr g_n).

        increasing=True demands every inner be "concave"; increasing=False
        demands every inner be "convex". Inners must be finite on [0, 1].
        """
        if len(inners) != len(curvatures) or not inners:
            raise InconsistentSpec("need one declared curvature per inner function")
        for c in curvatures:
            if c not in ("concave", "convex"):
                raise InconsistentSpec(f"unknown curvature {c!r}")
        want = "concave" if increasing else "convex"
        if any(c != want for c in curvatures):
            raise InconsistentSpec(
                f"{'increasing' if increasing else 'decreasing'} outer needs all inners {want}"
            )
        for g in inners:
            for x in _INNER_PROBE:
                if not math.isfinite(g(x)):
                    raise InconsistentSpec(f"inner function not finite at {x}")
        return cls(
            kind="generic",
            outer=outer,
            increasing=increasing,
            inners=tuple(inners),
            curvatures=tuple(curvatures),
        )

    @property
    def label(self) -> str:
        """Column label used in CSV traces."""
        if self.kind == "vn":
            return "S"
        if self.kind == "tsallis":
            return f"T_{self.q:g}"
        if self.kind == "renyi":
            return f"R_{self.q:g}"
        if self.kind == "np":
            return "N_inf" if math.isinf(self.p) else f"N_{self.p:g}"
        return "G"


def _vn_from_spectrum(probs: np.ndarray) -> float:
    pos = probs[probs > 0.0]
    return float(-np.sum(pos * np.log(pos)))


def entropy_from_spectrum(spec: EntropySpec, probs: np.ndarray) -> float:
    """Evaluate an entropy on a clamped probability vector (any order)."""
    probs = np.asarray(probs, dtype=float)
    if spec.kind == "vn":
        return _vn_from_spectrum(probs)
    if spec.kind == "tsallis":
        if spec.q == 1.0:
            return _vn_from_spectrum(probs)
        return float((np.sum(probs**spec.q) - 1.0) / (1.0 - spec.q))
    if spec.kind == "renyi":
        if spec.q == 1.0:
            return _vn_from_spectrum(probs)
        return float(np.log(np.sum(probs**spec.q)) / (1.0 - spec.q))
    if spec.kind == "np":
        if math.isinf(spec.p):
            return float(1.0 - np.max(probs))
        return float(1.0 - np.sum(probs**spec.p) ** (1.0 / spec.p))
    vals = [float(np.sum([g(x) for x in probs])) for g in spec.inners]
    return float(spec.outer(*vals))


def _spectrum(rho) -> np.ndarray:
    if isinstance(rho, (np.ndarray, list, tuple)) and np.asarray(rho).ndim == 1:
        return np.asarray(rho, dtype=float)
    return eigenvalue_vector(rho)


def von_neumann(rho: DensityOperator) -> float:
    """-Σ p ln p over the spectrum, with 0 ln 0 = 0."""
    return entropy_from_spectrum(EntropySpec.von_neumann(), _spectrum(rho))


def tsallis(rho: DensityOperator, q: float) -> float:
    """(tr ρ^q - 1)/(1 - q); the q=1 branch is the von Neumann limit."""
    return entropy_from_spectrum(EntropySpec.tsallis(q), _spectrum(rho))


def renyi(rho: DensityOperator, q: float) -> float:
    """ln(tr ρ^q)/(1 - q); the q=1 branch is the von Neumann limit."""
    return entropy_from_spectrum(EntropySpec.renyi(q), _spectrum(rho))


def schatten_defect(rho: DensityOperator, p: float) -> float:
    """1 - ||ρ||_p; p = inf gives 1 - max eigenvalue."""
    return entropy_from_spectrum(EntropySpec.schatten_defect(p), _spectrum(rho))


def generic_entropy(rho: DensityOperator, spec: EntropySpec) -> float:
    if spec.kind != "generic":
        raise InconsistentSpec("generic_entropy expects a generic EntropySpec")
    return entropy_from_spectrum(spec, _spectrum(rho))

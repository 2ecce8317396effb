"""Entropy families against independently computed reference values.

Reference constants below were evaluated with mpmath at 20 significant
digits on the exact spectra named in each test, then frozen.
"""

import math

import numpy as np
import pytest

from conftest import density, unitary
from qds.entropy import (
    EntropySpec,
    entropy_from_spectrum,
    generic_entropy,
    renyi,
    schatten_defect,
    tsallis,
    von_neumann,
)
from qds.errors import InconsistentSpec, InvalidP, InvalidQ
from qds.states import maximally_mixed, validate_density

# spectrum (3/4, 1/4)
VN_34 = 0.56233514461880835029
RENYI2_34 = 0.47000362924573555365
RENYI05_34 = 0.62381071636487139921
TSALLIS2_34 = 0.375
TSALLIS05_34 = 0.73205080756887729353
NDEF15_34 = 0.15662367826018416702
NDEF2_34 = 0.209430584957905167
# spectrum (2/3, 1/3)
VN_23 = 0.63651416829481281845
LN2 = 0.69314718055994530942
LN3 = 1.0986122886681096914

RHO_34 = validate_density(np.diag([0.75, 0.25]).astype(complex))


def test_frozen_values_three_quarter_state():
    assert abs(von_neumann(RHO_34) - VN_34) < 1e-12
    assert abs(renyi(RHO_34, 2.0) - RENYI2_34) < 1e-12
    assert abs(renyi(RHO_34, 0.5) - RENYI05_34) < 1e-12
    assert abs(tsallis(RHO_34, 2.0) - TSALLIS2_34) < 1e-12
    assert abs(tsallis(RHO_34, 0.5) - TSALLIS05_34) < 1e-12
    assert abs(schatten_defect(RHO_34, 1.5) - NDEF15_34) < 1e-12
    assert abs(schatten_defect(RHO_34, 2.0) - NDEF2_34) < 1e-12
    assert abs(schatten_defect(RHO_34, math.inf) - 0.25) < 1e-12


def test_frozen_values_two_thirds_state():
    rho = validate_density(np.diag([2 / 3, 1 / 3]).astype(complex))
    assert abs(von_neumann(rho) - VN_23) < 1e-12


def test_maximally_mixed_closed_forms():
    assert abs(von_neumann(maximally_mixed(2)) - LN2) < 1e-12
    assert abs(von_neumann(maximally_mixed(3)) - LN3) < 1e-12
    # Renyi of the flat spectrum is ln d for every order
    for q in (0.5, 2.0, 3.0, 7.0):
        assert abs(renyi(maximally_mixed(3), q) - LN3) < 1e-12
    # Tsallis closed form (d^(1-q) - 1)/(1 - q)
    d, q = 4, 2.0
    assert abs(tsallis(maximally_mixed(d), q) - (d ** (1 - q) - 1) / (1 - q)) < 1e-12


def test_pure_state_gives_zero():
    pure = np.zeros((3, 3), dtype=complex)
    pure[1, 1] = 1.0
    rho = validate_density(pure)
    assert von_neumann(rho) == 0.0
    assert abs(tsallis(rho, 0.7)) < 1e-14
    assert abs(renyi(rho, 3.0)) < 1e-14
    assert abs(schatten_defect(rho, 2.0)) < 1e-14
    assert schatten_defect(rho, math.inf) == 0.0


def test_spectrum_input_matches_operator_input(rng):
    rho = validate_density(density(4, rng))
    probs = np.linalg.eigvalsh(rho.mat)
    assert abs(von_neumann(rho) - entropy_from_spectrum(EntropySpec.von_neumann(), probs)) < 1e-12
    assert abs(renyi(rho, 2.0) - entropy_from_spectrum(EntropySpec.renyi(2.0), probs)) < 1e-12


def test_unitary_invariance(rng):
    rho = density(4, rng)
    u = unitary(4, rng)
    a = validate_density(rho)
    b = validate_density(u @ rho @ u.conj().T)
    for f in (
        von_neumann,
        lambda r: tsallis(r, 0.5),
        lambda r: tsallis(r, 2.0),
        lambda r: renyi(r, 0.5),
        lambda r: renyi(r, 3.0),
        lambda r: schatten_defect(r, 1.5),
        lambda r: schatten_defect(r, math.inf),
    ):
        assert abs(f(a) - f(b)) < 1e-11


def test_q_one_branch_and_limit(rng):
    rho = validate_density(density(3, rng))
    s = von_neumann(rho)
    assert tsallis(rho, 1.0) == s
    assert renyi(rho, 1.0) == s
    for q in (1.0 - 1e-6, 1.0 + 1e-6):
        assert abs(tsallis(rho, q) - s) < 1e-4
        assert abs(renyi(rho, q) - s) < 1e-4


def _random_bistochastic(d, rng, k=4):
    b = np.zeros((d, d))
    for w in rng.dirichlet(np.ones(k)):
        b[np.arange(d), rng.permutation(d)] += w
    return b


def test_monotone_under_mixing(rng):
    """Applying a bistochastic matrix to the spectrum never lowers any family."""
    specs = [
        EntropySpec.von_neumann(),
        EntropySpec.tsallis(0.5),
        EntropySpec.tsallis(2.0),
        EntropySpec.renyi(0.5),
        EntropySpec.renyi(2.0),
        EntropySpec.schatten_defect(1.5),
        EntropySpec.schatten_defect(math.inf),
    ]
    for _ in range(25):
        d = int(rng.integers(2, 6))
        x = rng.dirichlet(np.ones(d))
        y = _random_bistochastic(d, rng) @ x
        for spec in specs:
            assert entropy_from_spectrum(spec, y) >= entropy_from_spectrum(spec, x) - 1e-10


def test_defect_bounds(rng):
    for _ in range(20):
        d = int(rng.integers(2, 6))
        rho = validate_density(density(d, rng))
        for p in (1.5, 2.0, 4.0, math.inf):
            v = schatten_defect(rho, p)
            assert 0.0 <= v < 1.0
            assert v <= schatten_defect(maximally_mixed(d), p) + 1e-12


class TestGenericFamily:
    def test_reproduces_von_neumann(self, rng):
        spec = EntropySpec.generic(
            outer=lambda s: s,
            increasing=True,
            inners=[lambda x: -x * math.log(x) if x > 0 else 0.0],
            curvatures=["concave"],
        )
        rho = validate_density(density(3, rng))
        assert abs(generic_entropy(rho, spec) - von_neumann(rho)) < 1e-12

    def test_reproduces_tsallis_two(self, rng):
        # decreasing outer over the convex inner x^2
        spec = EntropySpec.generic(
            outer=lambda s: 1.0 - s,
            increasing=False,
            inners=[lambda x: x * x],
            curvatures=["convex"],
        )
        rho = validate_density(density(4, rng))
        assert abs(generic_entropy(rho, spec) - tsallis(rho, 2.0)) < 1e-12

    def test_rejects_direction_mismatch(self):
        with pytest.raises(InconsistentSpec):
            EntropySpec.generic(
                outer=lambda s: s,
                increasing=True,
                inners=[lambda x: x * x],
                curvatures=["convex"],
            )

    def test_rejects_unknown_curvature(self):
        with pytest.raises(InconsistentSpec):
            EntropySpec.generic(
                outer=lambda s: s,
                increasing=True,
                inners=[lambda x: x],
                curvatures=["linear"],
            )

    def test_rejects_length_mismatch(self):
        with pytest.raises(InconsistentSpec):
            EntropySpec.generic(
                outer=lambda a, b: a + b,
                increasing=True,
                inners=[lambda x: x],
                curvatures=["concave", "concave"],
            )

    def test_rejects_non_finite_inner(self):
        with pytest.raises(InconsistentSpec):
            EntropySpec.generic(
                outer=lambda s: s,
                increasing=True,
                inners=[lambda x: float("inf")],
                curvatures=["concave"],
            )

    def test_wrong_kind_rejected(self, rng):
        with pytest.raises(InconsistentSpec):
            generic_entropy(validate_density(density(2, rng)), EntropySpec.von_neumann())


def test_invalid_parameters():
    with pytest.raises(InvalidQ):
        EntropySpec.tsallis(0.0)
    with pytest.raises(InvalidQ):
        EntropySpec.renyi(-2.0)
    with pytest.raises(InvalidP):
        EntropySpec.schatten_defect(1.0)
    with pytest.raises(InvalidP):
        EntropySpec.schatten_defect(0.5)
    with pytest.raises(InvalidQ):
        tsallis(RHO_34, -1.0)

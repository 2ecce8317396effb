"""Quantum dynamical semigroups: generators, entropy flows, majorization,
and the positive/completely-positive cone geometry of qubit maps."""

from .backend import BACKEND
from .entropy import (
    EntropySpec,
    entropy_from_spectrum,
    generic_entropy,
    renyi,
    schatten_defect,
    tsallis,
    von_neumann,
)
from .gkls import (
    EquivalenceReport,
    GklsGenerator,
    Superoperator,
    adjoint_superoperator,
    check_positive_generator,
    choi_matrix,
    classify_equivalence,
    compile_generator,
    diagonal_form,
    evolve,
    gkls_diagnostics,
    is_gkls_generator,
    is_unital_generator,
    jointly_normal,
)
from .linalg import expm, herm_eig, herm_eigvals, schatten_norm, singular_values
from .qubit import (
    ConeVerdict,
    QubitGenerator,
    QubitGeneratorParams,
    asymptotic_state,
    ball_invariance_verdict,
    build_qubit_generator,
    classify_cone,
    is_positive_qubit_generator,
    matrix_rep,
    stormer_decompose,
)
from .states import (
    DensityOperator,
    birkhoff_decompose,
    eigenvalue_vector,
    extract_bistochastic,
    is_bistochastic,
    majorizes,
    maximally_mixed,
    validate_density,
)
from .twirling import (
    AtomicMeasure,
    RandomUnitarySpec,
    generalized_twirl_map,
    is_positive_map_sampled,
    poisson_twirl,
    projection_semigroup,
    random_unitary_map,
    twirl_generator,
    twirl_gkls,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "BACKEND",
    "ConeVerdict",
    "DensityOperator",
    "EntropySpec",
    "EquivalenceReport",
    "GklsGenerator",
    "QubitGenerator",
    "QubitGeneratorParams",
    "RandomUnitarySpec",
    "Superoperator",
    "__version__",
    "adjoint_superoperator",
    "asymptotic_state",
    "ball_invariance_verdict",
    "birkhoff_decompose",
    "build_qubit_generator",
    "check_positive_generator",
    "choi_matrix",
    "classify_cone",
    "classify_equivalence",
    "compile_generator",
    "diagonal_form",
    "eigenvalue_vector",
    "entropy_from_spectrum",
    "evolve",
    "expm",
    "extract_bistochastic",
    "generalized_twirl_map",
    "generic_entropy",
    "gkls_diagnostics",
    "herm_eig",
    "herm_eigvals",
    "is_bistochastic",
    "is_gkls_generator",
    "is_positive_map_sampled",
    "is_positive_qubit_generator",
    "is_unital_generator",
    "jointly_normal",
    "majorizes",
    "matrix_rep",
    "maximally_mixed",
    "poisson_twirl",
    "projection_semigroup",
    "random_unitary_map",
    "renyi",
    "schatten_defect",
    "schatten_norm",
    "singular_values",
    "stormer_decompose",
    "tsallis",
    "twirl_generator",
    "twirl_gkls",
    "validate_density",
    "von_neumann",
]

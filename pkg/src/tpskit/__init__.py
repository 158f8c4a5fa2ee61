"""Tensor product structures as first-class computational objects.

Construct structures from operator or basis data, compute entanglement
relative to any structure, decide locality and factorization of unitaries
and Hamiltonians, and run the bundled qubit, Galilean and scattering
experiment suites.
"""

from .core import (
    OperatorMatrix,
    SchmidtDecomposition,
    StateVector,
    entropy_of_entanglement,
    kron,
    matrix_exponential,
    operator_schmidt_decompose,
    partial_trace,
    permute_subsystems,
    random_hermitian,
    random_state,
    random_unitary,
    schmidt_decompose,
    schmidt_entropy,
)
from .tps import (
    InvarianceResult,
    LocalityResult,
    SumLocalResult,
    SymmetryRep,
    TensorProductStructure,
    computational_tps,
    entanglement_in_tps,
    is_local_unitary,
    is_sum_local,
    is_symmetry_invariant,
    tps_from_basis,
)

__version__ = "0.1.0"

__all__ = [
    "OperatorMatrix",
    "SchmidtDecomposition",
    "StateVector",
    "entropy_of_entanglement",
    "kron",
    "matrix_exponential",
    "operator_schmidt_decompose",
    "partial_trace",
    "permute_subsystems",
    "random_hermitian",
    "random_state",
    "random_unitary",
    "schmidt_decompose",
    "schmidt_entropy",
    "InvarianceResult",
    "LocalityResult",
    "SumLocalResult",
    "SymmetryRep",
    "TensorProductStructure",
    "computational_tps",
    "entanglement_in_tps",
    "is_local_unitary",
    "is_sum_local",
    "is_symmetry_invariant",
    "tps_from_basis",
    "__version__",
]

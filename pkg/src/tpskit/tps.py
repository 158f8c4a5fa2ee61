"""Tensor product structures and the deciders built on them.

A TensorProductStructure pairs factor dimensions with a unitary adaptor
whose columns are the adapted product basis written in the computational
basis.  Entanglement relative to the TPS, locality of unitaries (operator
Schmidt rank one), sum-locality of Hamiltonians (A kron I + I kron B + c I)
and symmetry invariance of the TPS under a sampled representation are all
decided in the adaptor frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .core import (
    FLAG_ATOL,
    RANK_RTOL,
    OperatorMatrix,
    SchmidtDecomposition,
    StateVector,
    _dims_tuple,
    _normalize_cut,
    entropy_of_entanglement,
    leading_product_term,
    operator_norm_defect,
    operator_schmidt_decompose,
    schmidt_decompose,
)

SUM_LOCAL_RTOL = 1e-10  # relative Hilbert-Schmidt residual for the split verdict

Cut = Union[int, Sequence[int]]


@dataclass(frozen=True, eq=False)
class TensorProductStructure:
    """Ordered factor dimensions plus a unitary basis adaptor."""

    factor_dims: tuple[int, ...]
    adaptor: OperatorMatrix
    name: str = ""

    def __post_init__(self):
        dims = _dims_tuple(self.factor_dims)
        if math.prod(dims) != self.adaptor.dim:
            raise ValueError(f"factor dims {dims} do not match adaptor side {self.adaptor.dim}")
        defect = operator_norm_defect(
            self.adaptor.entries.conj().T @ self.adaptor.entries - np.eye(self.adaptor.dim))
        if defect > FLAG_ATOL:
            raise ValueError(f"adaptor is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return self.adaptor.dim

    def to_frame(self, state: StateVector) -> StateVector:
        """Express a computational-basis state in the adapted product basis."""
        if state.dim != self.dim:
            raise ValueError(f"state dim {state.dim} != TPS dim {self.dim}")
        return StateVector(self.adaptor.entries.conj().T @ state.amplitudes, self.factor_dims)

    def operator_to_frame(self, operator: OperatorMatrix) -> OperatorMatrix:
        """Conjugate an operator into the adapted product basis."""
        if operator.dim != self.dim:
            raise ValueError(f"operator dim {operator.dim} != TPS dim {self.dim}")
        a = self.adaptor.entries
        return OperatorMatrix(a.conj().T @ operator.entries @ a, self.factor_dims,
                              hermitian=operator.hermitian, unitary=operator.unitary)


@dataclass(frozen=True, eq=False)
class SymmetryRep:
    """Finite sample of a represented group: labeled unitaries plus optional generators."""

    elements: tuple[tuple[str, OperatorMatrix], ...]
    generators: tuple[OperatorMatrix, ...] = ()

    def __post_init__(self):
        elements = tuple((str(label), op) for label, op in self.elements)
        for label, op in elements:
            defect = operator_norm_defect(op.entries.conj().T @ op.entries - np.eye(op.dim))
            if defect > FLAG_ATOL:
                raise ValueError(f"element {label!r} is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "generators", tuple(self.generators))


def computational_tps(dims, name: str = "computational") -> TensorProductStructure:
    """The TPS whose adapted basis is the computational basis itself."""
    dims = _dims_tuple(dims)
    return TensorProductStructure(dims, OperatorMatrix.identity(dims), name)


def tps_from_basis(basis: Sequence[StateVector], factor_dims,
                   name: str = "") -> TensorProductStructure:
    """TPS induced by an orthonormal basis, e.g. the eigenbasis of a CSCO.

    The basis vectors become the adaptor columns in the given mixed-radix
    order over ``factor_dims``.
    """
    dims = _dims_tuple(factor_dims)
    d = math.prod(dims)
    if len(basis) != d:
        raise ValueError(f"expected {d} basis vectors for dims {dims}, got {len(basis)}")
    columns = np.column_stack([b.amplitudes for b in basis])
    gram_defect = operator_norm_defect(columns.conj().T @ columns - np.eye(d))
    if gram_defect > FLAG_ATOL:
        raise ValueError(f"basis is not orthonormal (gram defect {gram_defect:.3e})")
    return TensorProductStructure(dims, OperatorMatrix(columns, dims, unitary=True), name)


def entanglement_in_tps(state: StateVector, tps: TensorProductStructure,
                        cut: Cut = (0,)) -> float:
    """Entanglement entropy in bits of ``state`` relative to ``tps`` across ``cut``."""
    return entropy_of_entanglement(schmidt_decompose(tps.to_frame(state), cut))


@dataclass(frozen=True, eq=False)
class LocalityResult:
    """Verdict of the local-unitary decider.

    When local, ``factor_left``/``factor_right`` reproduce the operator in
    the TPS frame as kron(factor_left, factor_right) up to ``residual``
    (Frobenius), with factor_left scaled to a determinant of unit modulus.
    When nonlocal, ``spectrum`` is the operator Schmidt certificate and
    ``residual`` the distance to the best product operator.
    """

    local: bool
    factor_left: Optional[np.ndarray]
    factor_right: Optional[np.ndarray]
    residual: float
    spectrum: np.ndarray

    @property
    def verdict(self) -> str:
        return "LOCAL" if self.local else "NONLOCAL"


def is_local_unitary(unitary: OperatorMatrix, tps: TensorProductStructure,
                     cut: Cut = (0,)) -> LocalityResult:
    """Decide whether a unitary factors across ``cut`` in the TPS frame.

    The decision kernel is the operator Schmidt rank of the frame operator:
    rank one means the operator is an exact tensor product of factors, which
    are then recovered from the dominant Schmidt term.
    """
    defect = operator_norm_defect(unitary.entries.conj().T @ unitary.entries - np.eye(unitary.dim))
    if defect > FLAG_ATOL:
        raise ValueError(f"is_local_unitary requires a unitary input (defect {defect:.3e})")
    framed = tps.operator_to_frame(unitary)
    left = _normalize_cut(cut, len(tps.factor_dims))
    sd = operator_schmidt_decompose(framed, left)
    hs_norm = float(np.linalg.norm(framed.entries))
    if sd.rank(RANK_RTOL) != 1:
        tail = math.sqrt(max(0.0, 1.0 - float(sd.coefficients[0]) ** 2))
        return LocalityResult(False, None, None, hs_norm * tail, sd.coefficients)
    d_left = math.prod(tps.factor_dims[i] for i in left)
    d_right = framed.dim // d_left
    a, b = leading_product_term(sd, hs_norm, d_left, d_right)
    det_scale = abs(np.linalg.det(a)) ** (1.0 / d_left)
    if det_scale > 0:
        a = a / det_scale
        b = b * det_scale
    residual = float(np.linalg.norm(framed.entries - np.kron(a, b)))
    return LocalityResult(True, a, b, residual, sd.coefficients)


@dataclass(frozen=True, eq=False)
class SumLocalResult:
    """Verdict of the sum-local decider for hermitian operators.

    ``left_term``/``right_term`` are traceless; the identity weight is kept
    separate in ``identity_coefficient`` because it belongs to neither
    factor.  ``residual`` is the Hilbert-Schmidt distance from the frame
    operator to kron(left, I) + kron(I, right) + c I.
    """

    split: bool
    left_term: np.ndarray
    right_term: np.ndarray
    identity_coefficient: float
    residual: float
    operator_norm: float

    @property
    def verdict(self) -> str:
        return "SPLIT" if self.split else "NOTSPLIT"


def is_sum_local(hamiltonian: OperatorMatrix, tps: TensorProductStructure,
                 cut: Cut = (0,)) -> SumLocalResult:
    """Decide whether a hermitian operator is A kron I + I kron B + c I in the TPS frame.

    The candidate terms are the orthogonal Hilbert-Schmidt projections of the
    frame operator onto traceless-left, traceless-right and identity parts,
    so the reported residual is the minimum over all splittings.
    """
    defect = operator_norm_defect(hamiltonian.entries - hamiltonian.entries.conj().T)
    if defect > FLAG_ATOL:
        raise ValueError(f"is_sum_local requires a hermitian input (defect {defect:.3e})")
    framed = tps.operator_to_frame(hamiltonian)
    left = _normalize_cut(cut, len(tps.factor_dims))
    right = tuple(i for i in range(len(tps.factor_dims)) if i not in left)
    d_left = math.prod(tps.factor_dims[i] for i in left)
    d_right = framed.dim // d_left

    n = len(tps.factor_dims)
    tensor = framed.entries.reshape(tps.factor_dims + tps.factor_dims)
    axes = left + right + tuple(n + i for i in left) + tuple(n + i for i in right)
    w = tensor.transpose(axes).reshape(d_left, d_right, d_left, d_right)

    c = float(np.einsum("abab->", w).real) / (d_left * d_right)
    left_term = np.einsum("arbr->ab", w) / d_right - c * np.eye(d_left)
    right_term = np.einsum("rarb->ab", w) / d_left - c * np.eye(d_right)
    approx = (np.kron(left_term, np.eye(d_right)) + np.kron(np.eye(d_left), right_term)
              + c * np.eye(d_left * d_right))
    residual = float(np.linalg.norm(w.reshape(framed.dim, framed.dim) - approx))
    h_norm = float(np.linalg.norm(framed.entries))
    return SumLocalResult(residual <= SUM_LOCAL_RTOL * h_norm,
                          left_term, right_term, c, residual, h_norm)


@dataclass(frozen=True, eq=False)
class InvarianceResult:
    """Per-element locality verdicts for a sampled representation."""

    invariant: bool
    element_results: tuple[tuple[str, LocalityResult], ...]
    generator_results: tuple[SumLocalResult, ...]
    worst_residual: float

    @property
    def verdict(self) -> str:
        return "INVARIANT" if self.invariant else "NOT INVARIANT"


def is_symmetry_invariant(tps: TensorProductStructure, rep: SymmetryRep,
                          cut: Cut = (0,)) -> InvarianceResult:
    """Check that every sampled element (and generator, if any) is TPS-local.

    Generators are checked with the sum-local criterion, which is the exact
    infinitesimal version of element locality; sampled finite elements guard
    against implementation errors in either route.
    """
    element_results = []
    worst = 0.0
    invariant = True
    for label, op in rep.elements:
        if op.dim != tps.dim:
            raise ValueError(f"element {label!r} dim {op.dim} != TPS dim {tps.dim}")
        res = is_local_unitary(op, tps, cut)
        element_results.append((label, res))
        invariant &= res.local
        worst = max(worst, res.residual)
    generator_results = []
    for gen in rep.generators:
        if gen.dim != tps.dim:
            raise ValueError(f"generator dim {gen.dim} != TPS dim {tps.dim}")
        res = is_sum_local(gen, tps, cut)
        generator_results.append(res)
        invariant &= res.split
        worst = max(worst, res.residual / res.operator_norm if res.operator_norm else res.residual)
    return InvarianceResult(invariant, tuple(element_results), tuple(generator_results), worst)

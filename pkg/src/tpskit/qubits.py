"""Two-qubit Pauli algebra, the Bell basis, and the reciprocal PQ structure."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import FLAG_ATOL, OperatorMatrix, StateVector, kron, matrix_exponential
from .tps import TensorProductStructure, computational_tps, tps_from_basis

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

LABEL_ATOL = 1e-8  # eigenvalue labels closer than this count as equal


@dataclass(frozen=True)
class PauliWord:
    """Real multiple of a tensor product of single-qubit Pauli matrices."""

    factors: tuple[str, ...]
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.factors or any(f not in PAULI for f in self.factors):
            raise ValueError(f"factors must be drawn from 'IXYZ', got {self.factors}")
        object.__setattr__(self, "factors", tuple(self.factors))

    def to_operator(self) -> OperatorMatrix:
        matrix = np.array([[self.coefficient]], dtype=complex)
        for f in self.factors:
            matrix = np.kron(matrix, PAULI[f])
        return OperatorMatrix(matrix, (2,) * len(self.factors), hermitian=True)


def pauli_operator(word: str, coefficient: float = 1.0) -> OperatorMatrix:
    """Materialize a Pauli word given as a string, e.g. "ZZ" or "XI"."""
    return PauliWord(tuple(word), coefficient).to_operator()


def bell_basis() -> list[StateVector]:
    """The four Bell vectors |chi,xi> ordered (+,+), (+,-), (-,+), (-,-).

    chi and xi are the eigenvalues under sigma_z sigma_z and sigma_x sigma_x.
    """
    s = 1.0 / math.sqrt(2.0)
    return [
        StateVector(np.array([s, 0, 0, s]), (2, 2)),    # (|00> + |11>)/sqrt2
        StateVector(np.array([s, 0, 0, -s]), (2, 2)),   # (|00> - |11>)/sqrt2
        StateVector(np.array([0, s, s, 0]), (2, 2)),    # (|01> + |10>)/sqrt2
        StateVector(np.array([0, s, -s, 0]), (2, 2)),   # (|01> - |10>)/sqrt2
    ]


def ab_tps() -> TensorProductStructure:
    """The plain two-qubit structure: adapted basis is the computational basis."""
    return computational_tps((2, 2), name="AB")


def pq_tps() -> TensorProductStructure:
    """The structure reciprocal to ab_tps, with Bell vectors as its product basis.

    The adapted basis is the Bell basis reordered and rephased so that the
    basis change exchanges the roles of product and maximally entangled
    states: every Bell vector is a PQ product state while every
    computational vector |jk> carries one full bit of PQ entanglement.

    Factor observables: the P side is diagonalized by chi*xi (the eigenvalue
    of -sigma_y sigma_y) and the Q side by xi, so sigma_x sigma_x maps to
    I kron sigma_z in this frame and sigma_x kron I acts as a pure P-side
    bit flip.  Columns, indexed by (p, q):

        (0,0) -> |+,+>    (0,1) -> -|-,->    (1,0) -> |-,+>    (1,1) -> |+,->

    The sign on the (0,1) column makes the single-factor flip operators act
    without residual phases.
    """
    plus_plus, plus_minus, minus_plus, minus_minus = bell_basis()
    columns = [
        plus_plus,
        StateVector(-minus_minus.amplitudes, (2, 2)),
        minus_plus,
        plus_minus,
    ]
    return tps_from_basis(columns, (2, 2), name="PQ")


def csco_check(basis: Sequence[StateVector], ops: Sequence[OperatorMatrix],
               atol: float = 1e-10) -> list[tuple[float, ...]]:
    """Verify a joint eigenbasis of mutually commuting operators and label it.

    Returns one eigenvalue tuple per basis vector.  Raises if the operators
    fail to commute, if any vector is not an eigenvector of every operator,
    or if two vectors end up with identical label tuples (the set does not
    separate the basis, hence is not complete).
    """
    for (i, a), (j, b) in itertools.combinations(enumerate(ops), 2):
        comm = a.entries @ b.entries - b.entries @ a.entries
        if np.linalg.norm(comm, 2) > atol:
            raise ValueError(f"operators {i} and {j} do not commute")
    labels = []
    for k, vec in enumerate(basis):
        row = []
        for i, op in enumerate(ops):
            value = complex(np.vdot(vec.amplitudes, op.entries @ vec.amplitudes))
            residual = float(np.linalg.norm(op.entries @ vec.amplitudes - value * vec.amplitudes))
            if residual > atol:
                raise ValueError(
                    f"vector {k} is not an eigenvector of operator {i} (residual {residual:.3e})")
            row.append(float(value.real))
        labels.append(tuple(row))
    for (i, li), (j, lj) in itertools.combinations(enumerate(labels), 2):
        if all(abs(x - y) <= LABEL_ATOL for x, y in zip(li, lj)):
            raise ValueError(f"vectors {i} and {j} share the label tuple {li}; labels degenerate")
    return labels


def single_qubit_rotation(axis: Sequence[float], angle: float) -> np.ndarray:
    """cos(angle/2) I - i sin(angle/2) axis . sigma for a unit axis."""
    n = np.asarray(axis, dtype=float)
    generator = n[0] * PAULI["X"] + n[1] * PAULI["Y"] + n[2] * PAULI["Z"]
    return math.cos(angle / 2) * PAULI["I"] - 1j * math.sin(angle / 2) * generator


def rotation_rep(axis: Sequence[float], angle: float) -> OperatorMatrix:
    """Two-qubit rotation exp(-i angle/2 axis.(sigma kron I + I kron sigma))."""
    n = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > FLAG_ATOL:
        raise ValueError(f"rotation axis must be a unit vector, got norm {np.linalg.norm(n)!r}")
    single = sum(n[i] * PAULI[p] for i, p in enumerate("XYZ"))
    half = OperatorMatrix(single / 2.0, (2,), hermitian=True)
    identity = OperatorMatrix.identity((2,))
    generator = OperatorMatrix(kron(half, identity).entries + kron(identity, half).entries,
                               (2, 2), hermitian=True)
    return matrix_exponential(generator, angle)

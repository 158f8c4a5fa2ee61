"""Dense complex linear algebra over mixed-radix subsystem layouts.

States and operators carry an ordered tuple of subsystem dimensions, so
subsystem permutation, partial traces, Schmidt analysis and operator
Schmidt analysis work for arbitrary factor sizes, not just qubits.
All values are immutable after construction; operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

NORM_ATOL = 1e-12       # state normalization tolerance
FLAG_ATOL = 1e-10       # hermitian/unitary verification, operator norm
COEFF_FLOOR = 1e-12     # Schmidt coefficients below this count as zero
RANK_RTOL = 1e-8        # relative cutoff for operator Schmidt rank


def _dims_tuple(dims: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d <= 0 for d in out):
        raise ValueError(f"subsystem dimensions must be positive integers, got {out}")
    return out


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def operator_norm_defect(matrix: np.ndarray) -> float:
    """Operator 2-norm of ``matrix``, with a cheap Hoelder upper bound first.

    The bound sqrt(norm_1 * norm_inf) avoids an SVD for the common case of a
    defect matrix that is already far below tolerance.
    """
    absm = np.abs(matrix)
    bound = math.sqrt(float(absm.sum(axis=0).max()) * float(absm.sum(axis=1).max()))
    if bound <= FLAG_ATOL:
        return bound
    return float(np.linalg.norm(matrix, 2))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state over an ordered tuple of subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        dims = _dims_tuple(self.dims)
        if math.prod(dims) != amps.size:
            raise ValueError(f"product of dims {dims} != amplitude count {amps.size}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state vector norm {norm!r} is not 1 within {NORM_ATOL}")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims: Iterable[int]) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm, _dims_tuple(dims))

    @classmethod
    def basis_state(cls, index: Union[int, Sequence[int]], dims: Iterable[int]) -> "StateVector":
        dims = _dims_tuple(dims)
        flat = int(np.ravel_multi_index(tuple(index), dims)) if not isinstance(index, int) else index
        amps = np.zeros(math.prod(dims), dtype=complex)
        amps[flat] = 1.0
        return cls(amps, dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amplitudes.reshape(self.dims)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Square operator with the same subsystem layout convention as StateVector.

    The ``hermitian`` and ``unitary`` flags are claims: when set, they are
    verified to FLAG_ATOL in operator norm at construction time.
    """

    entries: np.ndarray
    dims: tuple[int, ...]
    hermitian: bool = False
    unitary: bool = False

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        dims = _dims_tuple(self.dims)
        d = math.prod(dims)
        if entries.shape != (d, d):
            raise ValueError(f"operator shape {entries.shape} does not match dims {dims}")
        if self.hermitian:
            defect = operator_norm_defect(entries - entries.conj().T)
            if defect > FLAG_ATOL:
                raise ValueError(f"hermitian flag set but defect {defect:.3e} exceeds {FLAG_ATOL}")
        if self.unitary:
            defect = operator_norm_defect(entries.conj().T @ entries - np.eye(d))
            if defect > FLAG_ATOL:
                raise ValueError(f"unitary flag set but defect {defect:.3e} exceeds {FLAG_ATOL}")
        object.__setattr__(self, "entries", _frozen(entries))
        object.__setattr__(self, "dims", dims)

    @classmethod
    def identity(cls, dims: Iterable[int]) -> "OperatorMatrix":
        dims = _dims_tuple(dims)
        return cls(np.eye(math.prod(dims)), dims, hermitian=True, unitary=True)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.dims,
                              hermitian=self.hermitian, unitary=self.unitary)

    def apply(self, state: StateVector) -> StateVector:
        if state.dim != self.dim:
            raise ValueError(f"operator dim {self.dim} != state dim {state.dim}")
        return StateVector.normalized(self.entries @ state.amplitudes, state.dims)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Descending Schmidt coefficients with orthonormal left/right families.

    ``left_vectors[:, i]`` pairs with ``right_vectors[:, i]``; the state (or
    normalized vectorized operator) is sum_i c_i |l_i> kron |r_i>.  ``cut``
    records which subsystems went to the left side.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    cut: tuple[int, ...]

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float).ravel()
        if np.any(coeffs < -COEFF_FLOOR) or np.any(np.diff(coeffs) > COEFF_FLOOR):
            raise ValueError("Schmidt coefficients must be nonnegative and descending")
        total = float(np.sum(coeffs**2))
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"squared Schmidt coefficients sum to {total!r}, expected 1")
        left = np.array(self.left_vectors, dtype=complex)
        right = np.array(self.right_vectors, dtype=complex)
        k = coeffs.size
        if left.shape[1] != k or right.shape[1] != k:
            raise ValueError("left/right vector counts must match coefficient count")
        for label, fam in (("left", left), ("right", right)):
            gram = fam.conj().T @ fam
            if operator_norm_defect(gram - np.eye(k)) > FLAG_ATOL:
                raise ValueError(f"{label} Schmidt vectors are not orthonormal")
        object.__setattr__(self, "coefficients", _frozen(coeffs))
        object.__setattr__(self, "left_vectors", _frozen(left))
        object.__setattr__(self, "right_vectors", _frozen(right))
        object.__setattr__(self, "cut", tuple(int(i) for i in self.cut))

    def reconstruct(self) -> np.ndarray:
        """Sum of c_i * kron(l_i, r_i) as a flat vector."""
        out = np.zeros(self.left_vectors.shape[0] * self.right_vectors.shape[0], dtype=complex)
        for c, l, r in zip(self.coefficients, self.left_vectors.T, self.right_vectors.T):
            out += c * np.kron(l, r)
        return out

    def rank(self, rtol: float = RANK_RTOL) -> int:
        """Coefficients above rtol * largest coefficient."""
        top = self.coefficients[0] if self.coefficients.size else 0.0
        return int(np.count_nonzero(self.coefficients > rtol * top))


def _normalize_cut(cut: Union[int, Sequence[int]], n_factors: int) -> tuple[int, ...]:
    left = (cut,) if isinstance(cut, int) else tuple(int(i) for i in cut)
    if len(set(left)) != len(left) or any(i < 0 or i >= n_factors for i in left):
        raise ValueError(f"cut {left} is not a set of subsystem indices in range({n_factors})")
    if not left or len(left) == n_factors:
        raise ValueError(f"cut {left} leaves one side of the bipartition empty")
    return left


def kron(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Kronecker product; subsystem dims concatenate."""
    return OperatorMatrix(np.kron(a.entries, b.entries), a.dims + b.dims,
                          hermitian=a.hermitian and b.hermitian,
                          unitary=a.unitary and b.unitary)


def permute_subsystems(state: StateVector, perm: Sequence[int]) -> StateVector:
    """Reorder subsystems so new factor i is old factor perm[i]."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(len(state.dims))):
        raise ValueError(f"perm {perm} is not a permutation of range({len(state.dims)})")
    new_dims = tuple(state.dims[p] for p in perm)
    return StateVector(state.tensor().transpose(perm).ravel(), new_dims)


def partial_trace(rho_or_state: Union[StateVector, OperatorMatrix],
                  keep: Union[int, Sequence[int]]) -> OperatorMatrix:
    """Reduced density matrix on the kept subsystems (ascending index order)."""
    dims = rho_or_state.dims
    keep = (keep,) if isinstance(keep, int) else tuple(sorted(int(i) for i in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if len(set(keep)) != len(keep) or any(i < 0 or i >= len(dims) for i in keep):
        raise ValueError(f"keep {keep} is not a subset of subsystems range({len(dims)})")
    traced = tuple(i for i in range(len(dims)) if i not in keep)
    kept_dims = tuple(dims[i] for i in keep)
    d_keep = math.prod(kept_dims)

    if isinstance(rho_or_state, StateVector):
        tensor = rho_or_state.tensor().transpose(keep + traced).reshape(d_keep, -1)
        rho = tensor @ tensor.conj().T
    else:
        n = len(dims)
        tensor = rho_or_state.entries.reshape(dims + dims)
        row = list(range(n))
        col = [n + i if i in keep else i for i in range(n)]
        out = [i for i in keep] + [n + i for i in keep]
        rho = np.einsum(tensor, row + col, out).reshape(d_keep, d_keep)
    return OperatorMatrix(rho, kept_dims, hermitian=True)


def schmidt_decompose(state: StateVector, cut: Union[int, Sequence[int]]) -> SchmidtDecomposition:
    """Schmidt decomposition across the bipartition with ``cut`` on the left.

    Non-contiguous cuts are handled by an internal subsystem permutation;
    the right side keeps its original relative order.
    """
    left = _normalize_cut(cut, len(state.dims))
    right = tuple(i for i in range(len(state.dims)) if i not in left)
    d_left = math.prod(state.dims[i] for i in left)
    matrix = state.tensor().transpose(left + right).reshape(d_left, -1)
    u, coeffs, vh = np.linalg.svd(matrix, full_matrices=False)
    return SchmidtDecomposition(coeffs, u, vh.T, left)


def schmidt_entropy(coefficients: np.ndarray) -> float:
    """Entropy in bits of a Schmidt spectrum, with 0 log 0 = 0.

    Coefficients at or below COEFF_FLOOR are dropped first; that keeps the
    double-precision SVD noise floor from polluting exact zeros.
    """
    coeffs = np.asarray(coefficients, dtype=float)
    probs = coeffs[coeffs > COEFF_FLOOR] ** 2
    if probs.size == 0:
        return 0.0
    return float(-np.sum(probs * np.log2(probs))) + 0.0


def entropy_of_entanglement(decomposition: SchmidtDecomposition) -> float:
    """Entanglement entropy in bits of a Schmidt decomposition."""
    return schmidt_entropy(decomposition.coefficients)


def matrix_exponential(hamiltonian: OperatorMatrix, time: float) -> OperatorMatrix:
    """exp(-i H t) for hermitian H, via eigendecomposition.

    The eigendecomposition route is exactly unitary up to roundoff, which the
    locality and invariance deciders downstream rely on.
    """
    defect = operator_norm_defect(hamiltonian.entries - hamiltonian.entries.conj().T)
    if defect > FLAG_ATOL:
        raise ValueError(f"matrix_exponential requires a hermitian input (defect {defect:.3e})")
    eigvals, eigvecs = np.linalg.eigh(hamiltonian.entries)
    phases = np.exp(-1j * eigvals * time)
    return OperatorMatrix((eigvecs * phases) @ eigvecs.conj().T, hamiltonian.dims, unitary=True)


def operator_schmidt_decompose(operator: OperatorMatrix,
                               cut: Union[int, Sequence[int]]) -> SchmidtDecomposition:
    """Schmidt decomposition of an operator in the Hilbert-Schmidt sense.

    The matrix is realigned so that rank one is equivalent to the operator
    being an exact tensor product across the cut.  Coefficients are
    normalized by the Hilbert-Schmidt norm, so they form a unit spectrum.
    The left/right vectors are vectorized (row-major) factor operators.
    """
    hs_norm = float(np.linalg.norm(operator.entries))
    if hs_norm == 0.0:
        raise ValueError("operator Schmidt decomposition of the zero matrix is undefined")
    dims = operator.dims
    n = len(dims)
    left = _normalize_cut(cut, n)
    right = tuple(i for i in range(n) if i not in left)
    d_left = math.prod(dims[i] for i in left)
    d_right = math.prod(dims[i] for i in right)
    tensor = operator.entries.reshape(dims + dims)
    axes = left + tuple(n + i for i in left) + right + tuple(n + i for i in right)
    realigned = tensor.transpose(axes).reshape(d_left * d_left, d_right * d_right) / hs_norm
    u, coeffs, vh = np.linalg.svd(realigned, full_matrices=False)
    return SchmidtDecomposition(coeffs, u, vh.T, left)


def leading_product_term(decomposition: SchmidtDecomposition, scale: float,
                         d_left: int, d_right: int) -> tuple[np.ndarray, np.ndarray]:
    """Factors (A, B) of the dominant term of an operator Schmidt decomposition.

    ``scale`` is the Hilbert-Schmidt norm of the original operator; the full
    weight lands on A so that kron(A, B) reproduces the dominant term.
    """
    a = (scale * decomposition.coefficients[0]) * \
        decomposition.left_vectors[:, 0].reshape(d_left, d_left)
    b = decomposition.right_vectors[:, 0].reshape(d_right, d_right)
    return a, b


def random_state(dims: Iterable[int], rng: np.random.Generator) -> StateVector:
    """Haar-distributed pure state."""
    dims = _dims_tuple(dims)
    d = math.prod(dims)
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector.normalized(amps, dims)


def random_unitary(dims: Iterable[int], rng: np.random.Generator) -> OperatorMatrix:
    """Haar-distributed unitary via QR with phase-fixed diagonal."""
    dims = _dims_tuple(dims)
    d = math.prod(dims)
    ginibre = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(ginibre)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return OperatorMatrix(q, dims, unitary=True)


def random_hermitian(dims: Iterable[int], rng: np.random.Generator,
                     scale: float = 1.0) -> OperatorMatrix:
    """GUE-style random hermitian operator."""
    dims = _dims_tuple(dims)
    d = math.prod(dims)
    ginibre = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return OperatorMatrix(scale * (ginibre + ginibre.conj().T) / 2.0, dims, hermitian=True)

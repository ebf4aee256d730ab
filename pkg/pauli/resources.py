import itertools
import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Dict, Literal, Optional, Tuple, Union

import numpy as np
from scipy.special import entr

from config.settings import numerics
from exceptions import DomainError, InvariantViolationError, SizeLimitError
from pauli.algebra import (
    PauliString,
    bell_basis,
    check_dense,
    fwht,
    parity,
    zsector_word_indices,
)

logger = logging.getLogger(__name__)

Storage = Literal["dense", "sparse", "zsector"]


def _clamp_probabilities(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float).copy()
    lowest = values.min() if values.size else 0.0
    if lowest < -numerics.CLAMP:
        raise InvariantViolationError("probabilities are nonnegative", f"min entry {lowest:.3e}")
    values[values < 0] = 0.0
    return values


@dataclass(frozen=True, eq=False)
class ProbDist:
    """
    Распределение p_k по словам Паули

    storage:
        dense   - вектор длины 4^n по base-4 индексам
        sparse  - пары (indices, values)
        zsector - вектор длины 2^n по словам над {I, Z}
    """

    n: int
    values: np.ndarray
    storage: Storage = "dense"
    indices: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"ProbDist needs n >= 1, got {self.n}")
        values = _clamp_probabilities(self.values)

        if self.storage == "dense":
            check_dense(self.n, numerics.DENSE_PROBS_CUTOFF, "dense ProbDist")
            expected = 4 ** self.n
        elif self.storage == "zsector":
            check_dense(self.n, numerics.STRUCTURED_CUTOFF, "Z-sector ProbDist")
            expected = 2 ** self.n
        elif self.storage == "sparse":
            if self.indices is None:
                raise DomainError("sparse ProbDist requires indices")
            indices = np.asarray(self.indices, dtype=np.int64)
            if indices.shape != values.shape:
                raise DomainError("sparse ProbDist: indices and values differ in length")
            if np.unique(indices).size != indices.size:
                raise InvariantViolationError("sparse word indices are unique")
            if indices.size and (indices.min() < 0 or indices.max() >= 4 ** self.n):
                raise InvariantViolationError("word indices lie in [0, 4^n)")
            object.__setattr__(self, "indices", indices)
            expected = values.size
        else:
            raise DomainError(f"unknown storage {self.storage!r}")

        if values.ndim != 1 or values.size != expected:
            raise DomainError(f"{self.storage} ProbDist for n={self.n} needs {expected} entries, got {values.size}")

        total = values.sum()
        if abs(total - 1.0) > numerics.PROB_SUM_TOL:
            raise InvariantViolationError("probabilities sum to 1", f"sum={total:.15g}")
        object.__setattr__(self, "values", values)

    # ==================== Представления ====================

    def word_indices(self) -> np.ndarray:
        """Base-4 индексы слов, которым соответствуют values"""
        if self.storage == "dense":
            return np.arange(4 ** self.n, dtype=np.int64)
        if self.storage == "zsector":
            return zsector_word_indices(self.n)
        return self.indices

    def nonzero(self) -> Tuple[np.ndarray, np.ndarray]:
        mask = self.values > 0
        return self.word_indices()[mask], self.values[mask]

    def dense_values(self) -> np.ndarray:
        check_dense(self.n, numerics.DENSE_PROBS_CUTOFF, "dense probability vector")
        if self.storage == "dense":
            return self.values.copy()
        dense = np.zeros(4 ** self.n)
        dense[self.word_indices()] = self.values
        return dense

    def to_dense(self) -> "ProbDist":
        return ProbDist(self.n, self.dense_values())

    def weight(self, word: Union[PauliString, int]) -> float:
        index = word.index if isinstance(word, PauliString) else int(word)
        hits = np.nonzero(self.word_indices() == index)[0]
        return float(self.values[hits[0]]) if hits.size else 0.0

    def as_labels(self) -> Dict[str, float]:
        """Ненулевые вероятности по метке слова, по убыванию вероятности"""
        indices, probs = self.nonzero()
        order = np.lexsort((indices, -probs))
        return {PauliString.from_index(self.n, int(indices[i])).label: float(probs[i]) for i in order}

    # ==================== Величины ====================

    def entropy(self) -> float:
        """Энтропия Шеннона в битах, 0·log0 = 0"""
        return float(entr(self.values).sum() / np.log(2))

    def marginal(self, j: int) -> np.ndarray:
        """Маргинал пары j (с нуля) по четырём меткам"""
        if not 0 <= j < self.n:
            raise DomainError(f"pair index {j} out of range for n={self.n}")
        digits = (self.word_indices() >> (2 * (self.n - 1 - j))) & 3
        return np.bincount(digits, weights=self.values, minlength=4)

    def is_maximally_correlated(self) -> bool:
        """Носитель только на словах над {I, Z}"""
        if self.storage == "zsector":
            return True
        indices, _ = self.nonzero()
        digits = np.stack([(indices >> (2 * j)) & 3 for j in range(self.n)])
        return bool(np.all((digits == 0) | (digits == 3)))


# ==================== Ресурсные состояния ====================

def _check_density_matrix(matrix: np.ndarray, dim: int) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (dim, dim):
        raise InvariantViolationError("dimension is 4^n", f"got shape {matrix.shape}, expected ({dim}, {dim})")
    if np.abs(matrix - matrix.conj().T).max() > numerics.ATOL:
        raise InvariantViolationError("density matrix is Hermitian")
    if abs(np.trace(matrix) - 1.0) > numerics.ATOL:
        raise InvariantViolationError("density matrix has unit trace", f"trace={np.trace(matrix).real:.12g}")
    lowest = np.linalg.eigvalsh(matrix).min()
    if lowest < -numerics.ATOL:
        raise InvariantViolationError("density matrix is positive semidefinite", f"min eigenvalue {lowest:.3e}")
    return matrix


@dataclass(frozen=True, eq=False)
class DenseResource:
    """Плотная матрица χ^(n) в раскладке (A1,B1,...,An,Bn)"""

    n: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_dense(self.n, numerics.DENSE_PAIR_CUTOFF, "DenseResource")
        object.__setattr__(self, "matrix", _check_density_matrix(self.matrix, 4 ** self.n))


@dataclass(frozen=True, eq=False)
class BellDiagonalResource:
    n: int
    probs: ProbDist

    def __post_init__(self):
        if self.probs.n != self.n:
            raise InvariantViolationError("resource n matches ProbDist n", f"{self.n} != {self.probs.n}")


@dataclass(frozen=True)
class PhaseGateChain:
    n: int
    theta: float
    periodic: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"PhaseGateChain needs n >= 1, got {self.n}")
        if not 0.0 <= self.theta < 2 * np.pi:
            raise DomainError(f"PhaseGateChain needs theta in [0, 2π), got {self.theta}")


@dataclass(frozen=True)
class PermutationMixture:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"PermutationMixture needs n >= 1, got {self.n}")


ResourceState = Union[DenseResource, BellDiagonalResource, PhaseGateChain, PermutationMixture]


def perfect_bells(n: int) -> BellDiagonalResource:
    """E_0^{⊗n}: дельта на слове 0...0"""
    probs = ProbDist(n, np.array([1.0]), storage="sparse", indices=np.array([0]))
    return BellDiagonalResource(n, probs)


def fully_mixed(n: int) -> BellDiagonalResource:
    """I/4^n: равномерное распределение"""
    return BellDiagonalResource(n, ProbDist(n, np.full(4 ** n, 4.0 ** -n)))


# ==================== Цепочка фазовых вентилей ====================

def chain_gate_counts(n: int, periodic: bool = False) -> np.ndarray:
    """c(s) - число соседних пар (1,1) в s; кольцо замыкается только при n >= 3"""
    s = np.arange(2 ** n, dtype=np.int64)
    counts = np.bitwise_count(s & (s >> 1)).astype(np.int64)
    if periodic and n >= 3:
        counts += (s >> (n - 1)) & s & 1
    return counts


def _check_structured(n: int) -> None:
    if n < 1:
        raise DomainError(f"phase-gate chain needs n >= 1, got {n}")
    if n > numerics.STRUCTURED_CUTOFF:
        raise SizeLimitError("phase_gate_chain_probs", n, numerics.STRUCTURED_CUTOFF)


def phase_gate_chain_probs(n: int, theta: float, periodic: bool = False) -> ProbDist:
    """
    Z-секторное распределение цепочки вентилей diag(1,1,1,e^{iθ})

    a_t = 2^-n Σ_s (-1)^{t·s} e^{iθ c(s)}, p_t = |a_t|^2; через fwht за O(n·2^n).
    Действительная и мнимая части преобразуются отдельно.
    """
    _check_structured(n)
    phase = theta * chain_gate_counts(n, periodic)
    probs = fwht(np.cos(phase)) ** 2
    probs += fwht(np.sin(phase)) ** 2
    probs /= 4.0 ** n
    return ProbDist(n, probs, storage="zsector")


def phase_gate_chain_probs_bruteforce(n: int, theta: float, periodic: bool = False) -> ProbDist:
    """Прямая сумма O(4^n) для проверки fwht"""
    _check_structured(n)
    if n > numerics.BRUTE_FORCE_CUTOFF:
        raise SizeLimitError("phase_gate_chain_probs_bruteforce", n, numerics.BRUTE_FORCE_CUTOFF)
    s = np.arange(2 ** n, dtype=np.int64)
    signs = 1 - 2 * parity(s[:, None] & s[None, :])
    amplitudes = signs @ np.exp(1j * theta * chain_gate_counts(n, periodic)) / 2 ** n
    return ProbDist(n, np.abs(amplitudes) ** 2, storage="zsector")


def phase_gate_chain_state(n: int, theta: float, periodic: bool = False) -> DenseResource:
    """Чистое состояние (U_A ⊗ I)|Ψ_0⟩^{⊗n}; ненулевые амплитуды только при A_j = B_j"""
    check_dense(n, numerics.DENSE_PAIR_CUTOFF, "phase_gate_chain_state")
    psi = np.zeros(4 ** n, dtype=complex)
    psi[zsector_word_indices(n)] = np.exp(1j * theta * chain_gate_counts(n, periodic)) / 2 ** (n / 2)
    return DenseResource(n, np.outer(psi, psi.conj()))


# ==================== Смесь перестановок ====================

def permutation_mixture_state(n: int) -> DenseResource:
    """Равномерная смесь E_0^{⊗n} с кубитами Алисы, переставленными всеми π"""
    check_dense(n, numerics.PERMUTATION_CUTOFF, "permutation_mixture_state")
    dim = 4 ** n
    chi = np.zeros((dim, dim), dtype=complex)
    for perm in itertools.permutations(range(n)):
        psi = np.zeros(dim, dtype=complex)
        for s in range(2 ** n):
            bits = [(s >> (n - 1 - j)) & 1 for j in range(n)]
            index = 0
            for j in range(n):
                # A_{π(j)} получает бит s_j, B_j тоже
                index |= bits[j] << (2 * (n - 1 - perm[j]) + 1)
                index |= bits[j] << (2 * (n - 1 - j))
            psi[index] = 1.0
        psi /= np.sqrt(2 ** n)
        chi += np.outer(psi, psi.conj())
    return DenseResource(n, chi / factorial(n))


# ==================== Белловская диагонализация ====================

def bell_twirl(chi: DenseResource) -> BellDiagonalResource:
    """p_k = Tr[E_k χ]; внедиагональные элементы в базисе Белла отбрасываются"""
    if not isinstance(chi, DenseResource):
        raise DomainError(f"bell_twirl needs a DenseResource, got {type(chi).__name__}")
    basis = bell_basis(chi.n)
    probs = np.einsum("ik,ij,jk->k", basis.conj(), chi.matrix, basis).real
    # DenseResource admits trace and positivity off by ATOL; ProbDist does not
    probs = np.clip(probs, 0.0, None)
    return BellDiagonalResource(chi.n, ProbDist(chi.n, probs / probs.sum()))


def bell_diagonal_matrix(probs: ProbDist) -> np.ndarray:
    """χ_BD = Σ_k p_k E_k"""
    basis = bell_basis(probs.n)
    return (basis * probs.dense_values()) @ basis.conj().T


def to_dense(resource: ResourceState) -> DenseResource:
    if isinstance(resource, DenseResource):
        return resource
    if isinstance(resource, BellDiagonalResource):
        return DenseResource(resource.n, bell_diagonal_matrix(resource.probs))
    if isinstance(resource, PhaseGateChain):
        return phase_gate_chain_state(resource.n, resource.theta, resource.periodic)
    if isinstance(resource, PermutationMixture):
        return permutation_mixture_state(resource.n)
    raise DomainError(f"unknown resource type {type(resource).__name__}")

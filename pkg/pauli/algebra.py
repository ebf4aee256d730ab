from dataclasses import dataclass
from functools import reduce
from typing import Optional, Sequence, Tuple

import numpy as np

from config.settings import numerics
from exceptions import DimensionMismatchError, DomainError, SizeLimitError


# Паули-индекс k -> биты (x, z): I=(0,0), X=(1,0), Y=(1,1), Z=(0,1)
_X_BIT = (0, 1, 1, 0)
_Z_BIT = (0, 0, 1, 1)
_FROM_XZ = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}

_PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _check_pauli_index(k: int) -> int:
    if k not in (0, 1, 2, 3):
        raise DomainError(f"Pauli index must be in {{0,1,2,3}}, got {k}")
    return int(k)


@dataclass(frozen=True)
class PauliString:
    """
    Слово длины n над {I,X,Y,Z}

    Кубит 1 соответствует старшему разряду: и в base-4 индексе слова,
    и в x/z масках, и в порядке Кронекера.
    """

    word: Tuple[int, ...]

    def __post_init__(self):
        if len(self.word) == 0:
            raise DomainError("PauliString must have n >= 1")
        object.__setattr__(self, "word", tuple(_check_pauli_index(k) for k in self.word))

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def xmask(self) -> int:
        mask = 0
        for k in self.word:
            mask = (mask << 1) | _X_BIT[k]
        return mask

    @property
    def zmask(self) -> int:
        mask = 0
        for k in self.word:
            mask = (mask << 1) | _Z_BIT[k]
        return mask

    @property
    def index(self) -> int:
        """Base-4 индекс слова (k_1 старший разряд)"""
        value = 0
        for k in self.word:
            value = value * 4 + k
        return value

    @classmethod
    def from_masks(cls, n: int, xmask: int, zmask: int) -> "PauliString":
        word = []
        for j in range(n):
            shift = n - 1 - j
            word.append(_FROM_XZ[((xmask >> shift) & 1, (zmask >> shift) & 1)])
        return cls(tuple(word))

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliString":
        if not 0 <= index < 4 ** n:
            raise DomainError(f"word index {index} out of range for n={n}")
        return cls(tuple((index >> (2 * (n - 1 - j))) & 3 for j in range(n)))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Слово из base-4 строки, например '03'"""
        try:
            return cls(tuple(int(ch) for ch in label))
        except ValueError as e:
            raise DomainError(f"invalid Pauli word label {label!r}: {e}")

    @property
    def label(self) -> str:
        return "".join(str(k) for k in self.word)

    def compose(self, other: "PauliString") -> "PauliString":
        """Композиция меток через XOR масок; фаза отбрасывается"""
        if other.n != self.n:
            raise DimensionMismatchError(f"cannot compose strings of length {self.n} and {other.n}")
        return PauliString.from_masks(self.n, self.xmask ^ other.xmask, self.zmask ^ other.zmask)

    def on_alice(self) -> "PauliString":
        """Вложение в 2n-кубитную среду (A1,B1,...,An,Bn): σ_k на A, единица на B"""
        return PauliString(tuple(x for k in self.word for x in (k, 0)))

    def with_identity_tail(self, m: int) -> "PauliString":
        """σ_k ⊗ I на m дополнительных кубитах (система первой)"""
        return PauliString(self.word + (0,) * m)


BellIndex = PauliString


def word_masks(n: int, indices: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """x и z маски для заданных base-4 индексов (по умолчанию всех 4^n слов)"""
    if indices is None:
        index = np.arange(4 ** n, dtype=np.int64)
    else:
        index = np.asarray(indices, dtype=np.int64)
    xmask = np.zeros_like(index)
    zmask = np.zeros_like(index)
    x_bit = np.array(_X_BIT, dtype=np.int64)
    z_bit = np.array(_Z_BIT, dtype=np.int64)
    for j in range(n):
        digit = (index >> (2 * (n - 1 - j))) & 3
        xmask = (xmask << 1) | x_bit[digit]
        zmask = (zmask << 1) | z_bit[digit]
    return xmask, zmask


def zsector_word_indices(n: int) -> np.ndarray:
    """Base-4 индексы слов над {I, Z}: бит t_j=1 означает k_j=3"""
    t = np.arange(2 ** n, dtype=np.int64)
    index = np.zeros_like(t)
    for j in range(n):
        bit = (t >> (n - 1 - j)) & 1
        index = index * 4 + 3 * bit
    return index


def parity(values: np.ndarray) -> np.ndarray:
    """Чётность числа единичных битов (0 или 1)"""
    return (np.bitwise_count(values) & 1).astype(np.int64)


def check_dense(n: int, cutoff: int, what: str) -> None:
    if n < 1:
        raise DomainError(f"{what}: n must be >= 1, got {n}")
    if n > cutoff:
        raise SizeLimitError(what, n, cutoff)


def pauli_matrix(k: int) -> np.ndarray:
    return _PAULI[_check_pauli_index(k)].copy()


def pauli_string_matrix(s: PauliString) -> np.ndarray:
    check_dense(s.n, numerics.DENSE_QUBIT_CUTOFF, "pauli_string_matrix")
    return reduce(np.kron, (_PAULI[k] for k in s.word))


def bell_state(k: int) -> np.ndarray:
    """|Ψ_k⟩ = (σ_k ⊗ I)|Ψ_0⟩, |Ψ_0⟩ = (|00⟩+|11⟩)/√2"""
    psi0 = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.kron(_PAULI[_check_pauli_index(k)], np.eye(2)) @ psi0


def bell_basis(n: int) -> np.ndarray:
    """Столбцы - состояния Белла |Ψ_k⟩ для всех 4^n слов, пары (A_j,B_j) подряд"""
    check_dense(n, numerics.DENSE_PAIR_CUTOFF, "bell_basis")
    single = np.column_stack([bell_state(k) for k in range(4)])
    return reduce(np.kron, [single] * n)


def bell_projector_string(k: PauliString) -> np.ndarray:
    check_dense(k.n, numerics.DENSE_PAIR_CUTOFF, "bell_projector_string")
    factors = []
    for kj in k.word:
        v = bell_state(kj)
        factors.append(np.outer(v, v.conj()))
    return reduce(np.kron, factors)


def conjugate_by_pauli(rho: np.ndarray, s: PauliString) -> np.ndarray:
    """
    σ_s ρ σ_s без построения σ_s

    σ_s|b⟩ = фаза · (-1)^{|b & z|} |b ⊕ x⟩, глобальная фаза сокращается.
    """
    dim = 2 ** s.n
    if rho.shape != (dim, dim):
        raise DimensionMismatchError(f"rho has shape {rho.shape}, expected ({dim}, {dim}) for n={s.n}")
    return conjugate_by_masks(rho, s.xmask, s.zmask)


def conjugate_by_masks(rho: np.ndarray, xmask: int, zmask: int) -> np.ndarray:
    basis = np.arange(rho.shape[0], dtype=np.int64)
    signs = 1 - 2 * parity(basis & int(zmask))
    flipped = basis ^ int(xmask)
    signed = rho * np.outer(signs, signs)
    return signed[np.ix_(flipped, flipped)]


def fwht(v: Sequence) -> np.ndarray:
    """
    Ненормированное преобразование Уолша-Адамара

    out[t] = Σ_s (-1)^{t·s} v[s], O(n·2^n) бабочек.
    """
    out = np.array(v, copy=True)
    if out.dtype.kind not in "fc":
        out = out.astype(float)
    size = out.shape[0]
    if out.ndim != 1 or size == 0 or size & (size - 1):
        raise DomainError(f"fwht needs a 1-D vector of power-of-two length, got shape {out.shape}")
    h = 1
    while h < size:
        blocks = out.reshape(-1, 2, h)
        upper = blocks[:, 0, :].copy()
        blocks[:, 0, :] += blocks[:, 1, :]
        blocks[:, 1, :] = upper - blocks[:, 1, :]
        h *= 2
    return out


def reorder_qubits(matrix: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Новый кубит i = старый кубит order[i]"""
    count = len(order)
    dim = 2 ** count
    if matrix.shape != (dim, dim):
        raise DimensionMismatchError(f"matrix shape {matrix.shape} does not match {count} qubits")
    tensor = matrix.reshape([2] * (2 * count))
    axes = list(order) + [count + q for q in order]
    return tensor.transpose(axes).reshape(dim, dim)


def partial_trace(matrix: np.ndarray, dims: Tuple[int, int], keep: int) -> np.ndarray:
    """Частичный след двудольной матрицы; keep=0 оставляет первую подсистему"""
    d0, d1 = dims
    if matrix.shape != (d0 * d1, d0 * d1):
        raise DimensionMismatchError(f"matrix shape {matrix.shape} does not match dims {dims}")
    tensor = matrix.reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ajbj->ab", tensor)
    return np.einsum("iaib->ab", tensor)

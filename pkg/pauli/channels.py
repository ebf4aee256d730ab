import logging
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Literal, Union

import numpy as np
from scipy.special import entr

from config.settings import numerics
from exceptions import DimensionMismatchError, DomainError, InvariantViolationError
from pauli.algebra import (
    PauliString,
    bell_projector_string,
    check_dense,
    conjugate_by_masks,
    conjugate_by_pauli,
    fwht,
    partial_trace,
    pauli_matrix,
    pauli_string_matrix,
    reorder_qubits,
    word_masks,
)
from pauli.resources import (
    BellDiagonalResource,
    DenseResource,
    PermutationMixture,
    PhaseGateChain,
    ProbDist,
    ResourceState,
    bell_diagonal_matrix,
    bell_twirl,
    permutation_mixture_state,
    phase_gate_chain_probs,
)

logger = logging.getLogger(__name__)

# Tr[σ_{k'} ⊗ σ_{k''} χ]
CorrelatorOracle = Callable[[PauliString, PauliString], float]


@dataclass(frozen=True, eq=False)
class PauliChannel:
    """Λ(ρ) = Σ_k p_k σ_k ρ σ_k"""

    n: int
    probs: ProbDist

    def __post_init__(self):
        if self.probs.n != self.n:
            raise InvariantViolationError("channel n matches ProbDist n", f"{self.n} != {self.probs.n}")


def identity_channel(n: int) -> PauliChannel:
    return PauliChannel(n, ProbDist(n, np.array([1.0]), storage="sparse", indices=np.array([0])))


def channel_from_resource(chi: ResourceState) -> PauliChannel:
    """p_k = Tr[E_k χ] для любого представления χ"""
    if isinstance(chi, DenseResource):
        probs = bell_twirl(chi).probs
    elif isinstance(chi, BellDiagonalResource):
        probs = chi.probs
    elif isinstance(chi, PhaseGateChain):
        probs = phase_gate_chain_probs(chi.n, chi.theta, chi.periodic)
    elif isinstance(chi, PermutationMixture):
        probs = bell_twirl(permutation_mixture_state(chi.n)).probs
    else:
        raise DomainError(f"unknown resource type {type(chi).__name__}")
    return PauliChannel(chi.n, probs)


def _check_operator(rho: np.ndarray, n: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    dim = 2 ** n
    if rho.shape != (dim, dim):
        raise DimensionMismatchError(f"operator has shape {rho.shape}, channel acts on {n} qubits")
    return rho


def apply_channel(channel: PauliChannel, rho: np.ndarray) -> np.ndarray:
    """Σ_k p_k σ_k ρ σ_k только по ненулевым словам"""
    check_dense(channel.n, numerics.DENSE_QUBIT_CUTOFF, "apply_channel")
    rho = _check_operator(rho, channel.n)
    indices, probs = channel.probs.nonzero()
    xmasks, zmasks = word_masks(channel.n, indices)
    out = np.zeros_like(rho)
    for x, z, p in zip(xmasks, zmasks, probs):
        out += p * conjugate_by_masks(rho, x, z)
    return out


def cj_state(channel: PauliChannel, dense: bool = True) -> Union[DenseResource, BellDiagonalResource]:
    """
    (Λ ⊗ I)(E_0^{⊗n}) = Σ_k p_k E_k

    dense=True применяет Λ к половине A буквально; иначе возвращает веса.
    """
    if not dense:
        return BellDiagonalResource(channel.n, channel.probs)
    check_dense(channel.n, numerics.DENSE_PAIR_CUTOFF, "cj_state")
    e0 = bell_projector_string(PauliString((0,) * channel.n))
    indices, probs = channel.probs.nonzero()
    out = np.zeros_like(e0)
    for index, p in zip(indices, probs):
        word = PauliString.from_index(channel.n, int(index))
        out += p * conjugate_by_pauli(e0, word.on_alice())
    return DenseResource(channel.n, out)


def channel_entropy(channel: PauliChannel) -> float:
    return channel.probs.entropy()


def entanglement_fidelity(channel: PauliChannel) -> float:
    return channel.probs.weight(0)


# ==================== Композиция ====================

def _xor_convolve(p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """p3[m] = Σ_k p1[k] p2[k ⊕ m] через fwht"""
    size = p1.size
    return fwht(fwht(p1) * fwht(p2)) / size


def compose(first: PauliChannel, second: PauliChannel) -> PauliChannel:
    """Двойственно-стохастическая свёртка; порядок композиции не важен"""
    if first.n != second.n:
        raise DimensionMismatchError(f"cannot compose channels on {first.n} and {second.n} qubits")
    n = first.n

    if first.probs.storage == "zsector" and second.probs.storage == "zsector":
        # слова над {I,Z}: индекс t уже совпадает с z-маской
        values = _xor_convolve(first.probs.values, second.probs.values)
        return PauliChannel(n, ProbDist(n, values, storage="zsector"))

    xmasks, zmasks = word_masks(n)
    mask_index = (xmasks << n) | zmasks
    p1 = np.zeros(4 ** n)
    p2 = np.zeros(4 ** n)
    p1[mask_index] = first.probs.dense_values()
    p2[mask_index] = second.probs.dense_values()
    values = _xor_convolve(p1, p2)[mask_index]
    return PauliChannel(n, ProbDist(n, values))


def apply_to_alice(channel: PauliChannel, chi: DenseResource) -> DenseResource:
    """Λ на половине A плотной среды"""
    if channel.n != chi.n:
        raise DimensionMismatchError(f"channel on {channel.n} qubits, medium has {chi.n} pairs")
    indices, probs = channel.probs.nonzero()
    out = np.zeros_like(chi.matrix)
    for index, p in zip(indices, probs):
        word = PauliString.from_index(channel.n, int(index))
        out += p * conjugate_by_pauli(chi.matrix, word.on_alice())
    return DenseResource(chi.n, out)


def compose_via_resource(channel: PauliChannel, chi: DenseResource) -> PauliChannel:
    """χ_3 = Λ_1(χ_2): вероятности совпадают с compose(Λ_1, Λ_2)"""
    return channel_from_resource(apply_to_alice(channel, chi))


# ==================== Представление через окружение ====================

def environment_unitary(n: int) -> np.ndarray:
    """
    U = Σ_k σ_k ⊗ E_k = ⊗_j U_j в порядке (X1..Xn, A1,B1,...,An,Bn)

    Каждый U_j действует на (X_j, A_j, B_j); после произведения кубиты
    переставляются так, что X идут первыми.
    """
    check_dense(n, numerics.ENVIRONMENT_PAIR_CUTOFF, "environment_unitary")
    factor = sum(
        np.kron(pauli_matrix(k), bell_projector_string(PauliString((k,)))) for k in range(4)
    )
    unitary = reduce(np.kron, [factor] * n)
    order = [3 * j for j in range(n)] + [3 * j + q for j in range(n) for q in (1, 2)]
    return reorder_qubits(unitary, order)


def _environment_evolution(rho: np.ndarray, chi: DenseResource) -> np.ndarray:
    check_dense(chi.n, numerics.ENVIRONMENT_PAIR_CUTOFF, "environment representation")
    rho = _check_operator(rho, chi.n)
    unitary = environment_unitary(chi.n)
    joint = np.kron(rho, chi.matrix)
    return unitary @ joint @ unitary.conj().T


def unitary_rep_apply(rho: np.ndarray, chi: DenseResource) -> np.ndarray:
    """Λ(ρ) = Tr_AB[U (ρ ⊗ χ) U†]"""
    evolved = _environment_evolution(rho, chi)
    return partial_trace(evolved, (2 ** chi.n, 4 ** chi.n), keep=0)


def weak_complementary(rho: np.ndarray, chi: DenseResource) -> np.ndarray:
    """Λ̃(ρ) = Tr_X[U (ρ ⊗ χ) U†] - итоговое состояние среды"""
    evolved = _environment_evolution(rho, chi)
    return partial_trace(evolved, (2 ** chi.n, 4 ** chi.n), keep=1)


def degradability_gap(channel: PauliChannel, rho: np.ndarray) -> float:
    """
    max|T(Λ(ρ)) - Λ̃(ρ)| при T = Λ̃ и среде χ_BD

    Для Белл-диагональной среды Λ̃ постоянно, поэтому разрыв нулевой.
    """
    check_dense(channel.n, numerics.ENVIRONMENT_PAIR_CUTOFF, "degradability_gap")
    medium = cj_state(channel)
    direct = weak_complementary(rho, medium)
    degraded = weak_complementary(apply_channel(channel, rho), medium)
    return float(np.abs(degraded - direct).max())


# ==================== Когерентная информация ====================

def von_neumann_entropy(rho: np.ndarray) -> float:
    """Энтропия в битах; собственные значения ниже CLAMP отбрасываются"""
    eigenvalues = np.linalg.eigvalsh(rho)
    eigenvalues = eigenvalues[eigenvalues > numerics.CLAMP]
    return float(entr(eigenvalues).sum() / np.log(2))


def purification(rho: np.ndarray) -> np.ndarray:
    """|Ψ_ρ⟩ = Σ_i √λ_i |e_i⟩|i⟩, система первой"""
    eigenvalues, vectors = np.linalg.eigh(rho)
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    return (vectors * np.sqrt(eigenvalues)).reshape(-1)


def check_density_matrix(rho: np.ndarray, n: int) -> np.ndarray:
    rho = _check_operator(rho, n)
    if np.abs(rho - rho.conj().T).max() > numerics.ATOL:
        raise InvariantViolationError("input state is Hermitian")
    if abs(np.trace(rho) - 1.0) > numerics.ATOL:
        raise InvariantViolationError("input state has unit trace")
    if np.linalg.eigvalsh(rho).min() < -numerics.ATOL:
        raise InvariantViolationError("input state is positive semidefinite")
    return rho


def coherent_info(channel: PauliChannel, rho: np.ndarray) -> float:
    """J(ρ, Λ) = S(Λ(ρ)) - S((Λ ⊗ I)(|Ψ_ρ⟩⟨Ψ_ρ|))"""
    n = channel.n
    check_dense(n, numerics.DENSE_PAIR_CUTOFF, "coherent_info")
    rho = check_density_matrix(rho, n)

    psi = purification(rho)
    joint_in = np.outer(psi, psi.conj())
    joint_out = np.zeros_like(joint_in)
    indices, probs = channel.probs.nonzero()
    for index, p in zip(indices, probs):
        word = PauliString.from_index(n, int(index)).with_identity_tail(n)
        joint_out += p * conjugate_by_pauli(joint_in, word)

    return von_neumann_entropy(apply_channel(channel, rho)) - von_neumann_entropy(joint_out)


# ==================== Корреляционные функции ====================

# E_0 = ¼(σ0⊗σ0 + σ1⊗σ1 - σ2⊗σ2 + σ3⊗σ3); E_k получается сопряжением первого множителя
_E0_COEFFICIENTS = np.array([1.0, 1.0, -1.0, 1.0])


def _pair_expansion() -> np.ndarray:
    """C[k, a]: коэффициент при σ_a ⊗ σ_a в разложении E_k"""
    table = np.zeros((4, 4))
    for k in range(4):
        for a in range(4):
            sign = 1.0 if k == 0 or a == 0 or a == k else -1.0
            table[k, a] = _E0_COEFFICIENTS[a] * sign / 4
    return table


def correlator_oracle(chi: DenseResource) -> CorrelatorOracle:
    """Оракул Tr[σ_{k'} ⊗ σ_{k''} χ] для плотной среды"""

    def oracle(alice: PauliString, bob: PauliString) -> float:
        if alice.n != chi.n or bob.n != chi.n:
            raise DimensionMismatchError("correlator words must have one letter per pair")
        word = PauliString(tuple(x for pair in zip(alice.word, bob.word) for x in pair))
        return float(np.trace(pauli_string_matrix(word) @ chi.matrix).real)

    return oracle


def probs_from_correlators(oracle: CorrelatorOracle, n: int) -> ProbDist:
    """p_k через 2n-точечные корреляторы; нужны только пары (σ_a, σ_a)"""
    check_dense(n, numerics.DENSE_PAIR_CUTOFF, "probs_from_correlators")
    correlators = np.empty(4 ** n)
    for index in range(4 ** n):
        word = PauliString.from_index(n, index)
        value = oracle(word, word)
        if not -1.0 - numerics.ATOL <= value <= 1.0 + numerics.ATOL:
            raise InvariantViolationError("correlators lie in [-1, 1]", f"{word.label}: {value}")
        correlators[index] = value
    if abs(correlators[0] - 1.0) > numerics.ATOL:
        raise InvariantViolationError("identity correlator equals 1", f"got {correlators[0]}")
    expansion = reduce(np.kron, [_pair_expansion()] * n)
    return ProbDist(n, expansion @ correlators)

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config.settings import numerics, settings
from exceptions import DomainError
from pauli.algebra import (
    PauliString,
    bell_basis,
    bell_projector_string,
    check_dense,
    conjugate_by_pauli,
    reorder_qubits,
    word_masks,
)
from pauli.channels import apply_channel, channel_from_resource, check_density_matrix, unitary_rep_apply
from pauli.resources import DenseResource, ProbDist, ResourceState, to_dense

logger = logging.getLogger(__name__)

GENERATOR_NAME = "PCG64"


@dataclass
class SimReport:
    """
    Итог Монте-Карло прогона протокола телепортации

    bell_outcome_counts - исходы измерения Белла на (X_j, A_j);
    error_counts - метки ошибки Паули из опорного прогона (X - половина
    E_0^{⊗n}, после коррекции (B, R) измеряется в базисе Белла).
    tv_distance сравнивает error_counts с p_k.
    """

    n: int
    trials: int
    seed: int
    generator: str
    bell_outcome_counts: Dict[str, int]
    error_counts: Dict[str, int]
    empirical_output: np.ndarray
    expected_output: np.ndarray
    tv_distance: float
    trace_distance: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "generator": self.generator,
            "bell_outcome_counts": self.bell_outcome_counts,
            "error_counts": self.error_counts,
            "empirical_output": _complex_to_pairs(self.empirical_output),
            "expected_output": _complex_to_pairs(self.expected_output),
            "tv_distance": self.tv_distance,
            "trace_distance": self.trace_distance,
        }


@dataclass
class EquivalenceSummary:
    max_tv_distance: float
    max_trace_distance: float
    max_exact_discrepancy: float
    reports: List[SimReport] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "max_tv_distance": self.max_tv_distance,
            "max_trace_distance": self.max_trace_distance,
            "max_exact_discrepancy": self.max_exact_discrepancy,
            "samples": len(self.reports),
        }


def _complex_to_pairs(matrix: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in matrix]


# ==================== Метрики ====================

def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """½‖ρ - σ‖_1"""
    return float(np.abs(np.linalg.eigvalsh(rho - sigma)).sum() / 2)


def tv_distance(frequencies: np.ndarray, probs: np.ndarray) -> float:
    return float(np.abs(np.asarray(frequencies) - np.asarray(probs)).sum() / 2)


# ==================== Точные распределения ====================

def _eigen_ensemble(rho: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Веса и векторы спектрального разложения; нулевые веса отбрасываются"""
    weights, vectors = np.linalg.eigh(rho)
    keep = weights > numerics.CLAMP
    weights = weights[keep]
    return weights / weights.sum(), vectors[:, keep]


def corrected_states(chi: DenseResource, psi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Распределение исходов Белла q_b и состояния Боба после коррекции σ_b

    Порядок кубитов: X_1..X_n, затем среда (A_1, B_1, ..., A_n, B_n).
    Возвращает q (4^n) и нормированные состояния (4^n, 2^n, 2^n);
    для q_b = 0 состояние нулевое.
    """
    n = chi.n
    dim = 2 ** n
    joint = np.kron(np.outer(psi, psi.conj()), chi.matrix)
    order = [q for j in range(n) for q in (j, n + 2 * j)] + [n + 2 * j + 1 for j in range(n)]
    tensor = reorder_qubits(joint, order).reshape(4 ** n, dim, 4 ** n, dim)

    basis = bell_basis(n)
    projected = np.einsum("xb,xiyj,yb->bij", basis.conj(), tensor, basis)
    probs = np.clip(np.einsum("bii->b", projected).real, 0.0, None)

    states = np.zeros_like(projected)
    for b in np.flatnonzero(probs > numerics.CLAMP):
        correction = PauliString.from_index(n, int(b))
        states[b] = conjugate_by_pauli(projected[b], correction) / probs[b]
    return probs, states


def bell_outcome_distribution(chi: DenseResource, rho: np.ndarray) -> np.ndarray:
    """Σ_i λ_i q_{b|i} по спектральному ансамблю ρ"""
    weights, vectors = _eigen_ensemble(rho)
    return sum(w * corrected_states(chi, vectors[:, i])[0] for i, w in enumerate(weights))


def expected_output(chi: DenseResource, rho: np.ndarray) -> np.ndarray:
    """Точное среднее состояние Боба по исходам и ансамблю"""
    weights, vectors = _eigen_ensemble(rho)
    total = np.zeros((2 ** chi.n, 2 ** chi.n), dtype=complex)
    for i, w in enumerate(weights):
        probs, states = corrected_states(chi, vectors[:, i])
        total += w * np.einsum("b,bij->ij", probs, states)
    return total


def _probe_joint_distribution(chi: DenseResource) -> np.ndarray:
    """
    P[b, e]: исход Белла b на (X, A) и метка ошибки e на (B, R) после коррекции

    Порядок кубитов до перестановки: (R_1, X_1, ..., R_n, X_n), затем среда.
    """
    n = chi.n
    size = 4 ** n
    reference = bell_projector_string(PauliString((0,) * n))
    joint = np.kron(reference, chi.matrix)
    order = (
        [q for j in range(n) for q in (2 * j + 1, 2 * n + 2 * j)]
        + [q for j in range(n) for q in (2 * n + 2 * j + 1, 2 * j)]
    )
    tensor = reorder_qubits(joint, order).reshape(size, size, size, size)

    basis = bell_basis(n)
    before = np.einsum("xb,ye,xyuv,ub,ve->be", basis.conj(), basis.conj(), tensor, basis, basis).real

    # σ_b на B переводит метку e в e ∘ b
    xmask, zmask = word_masks(n)
    lookup = np.empty(size, dtype=np.int64)
    lookup[(xmask << n) | zmask] = np.arange(size)
    after = np.zeros_like(before)
    for b in range(size):
        relabel = lookup[((xmask ^ xmask[b]) << n) | (zmask ^ zmask[b])]
        np.add.at(after[b], relabel, before[b])
    return np.clip(after, 0.0, None)


def error_label_distribution(chi: DenseResource) -> ProbDist:
    """Распределение меток ошибки опорного прогона; совпадает с p_k"""
    joint = _probe_joint_distribution(chi)
    marginal = joint.sum(axis=0)
    return ProbDist(chi.n, marginal / marginal.sum())


# ==================== Монте-Карло ====================

def _prepare(chi: ResourceState, rho_in: np.ndarray, trials: int) -> Tuple[DenseResource, np.ndarray]:
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    check_dense(chi.n, numerics.ENVIRONMENT_PAIR_CUTOFF, "simulate_teleportation")
    dense = to_dense(chi)
    return dense, check_density_matrix(np.asarray(rho_in, dtype=complex), dense.n)


def _labelled_counts(n: int, counts: np.ndarray) -> Dict[str, int]:
    return {
        PauliString.from_index(n, int(index)).label: int(counts[index])
        for index in np.flatnonzero(counts)
    }


def simulate_teleportation(
    chi: ResourceState,
    rho_in: np.ndarray,
    trials: int,
    seed: int = settings.default_seed,
) -> SimReport:
    """
    Прогон протокола: измерение Белла на (X_j, A_j), коррекция σ_b на B

    Смешанный вход задаётся выборкой из его спектрального ансамбля.
    Случайность полностью определяется seed: два независимых потока
    SeedSequence (прогон входа и опорный прогон).
    """
    chi, rho_in = _prepare(chi, rho_in, trials)
    n = chi.n
    size = 4 ** n
    input_stream, probe_stream = np.random.SeedSequence(seed).spawn(2)
    input_rng = np.random.Generator(np.random.PCG64(input_stream))
    probe_rng = np.random.Generator(np.random.PCG64(probe_stream))

    weights, vectors = _eigen_ensemble(rho_in)
    eigen_draws = input_rng.choice(len(weights), size=trials, p=weights)
    eigen_counts = np.bincount(eigen_draws, minlength=len(weights))

    bell_counts = np.zeros(size, dtype=np.int64)
    empirical = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, count in enumerate(eigen_counts):
        if count == 0:
            continue
        probs, states = corrected_states(chi, vectors[:, i])
        outcomes = input_rng.choice(size, size=int(count), p=probs / probs.sum())
        outcome_counts = np.bincount(outcomes, minlength=size)
        bell_counts += outcome_counts
        empirical += np.einsum("b,bij->ij", outcome_counts, states)
    empirical /= trials

    joint = _probe_joint_distribution(chi).reshape(-1)
    probe_draws = probe_rng.choice(joint.size, size=trials, p=joint / joint.sum())
    error_counts = np.bincount(probe_draws % size, minlength=size)

    predicted = channel_from_resource(chi)
    expected = apply_channel(predicted, rho_in)
    report = SimReport(
        n=n,
        trials=trials,
        seed=seed,
        generator=GENERATOR_NAME,
        bell_outcome_counts=_labelled_counts(n, bell_counts),
        error_counts=_labelled_counts(n, error_counts),
        empirical_output=empirical,
        expected_output=expected,
        tv_distance=tv_distance(error_counts / trials, predicted.probs.dense_values()),
        trace_distance=trace_distance(empirical, expected),
    )
    logger.info(
        "simulated %d trials (n=%d, seed=%d): tv=%.4g trace=%.4g",
        trials, n, seed, report.tv_distance, report.trace_distance,
    )
    return report


def verify_equivalence(
    chi: ResourceState,
    samples: Sequence[np.ndarray],
    trials: int,
    seed: int = settings.default_seed,
) -> EquivalenceSummary:
    """
    Статистическая и точная проверка: протокол реализует канал Паули

    Точный путь сравнивает unitary_rep_apply с apply_channel для каждого входа.
    """
    if not samples:
        raise DomainError("verify_equivalence needs at least one input state")
    dense = to_dense(chi)
    channel = channel_from_resource(dense)
    seeds = np.random.SeedSequence(seed).generate_state(len(samples))

    summary = EquivalenceSummary(0.0, 0.0, 0.0)
    for rho, sample_seed in zip(samples, seeds):
        report = simulate_teleportation(dense, rho, trials, int(sample_seed))
        exact = np.abs(unitary_rep_apply(rho, dense) - apply_channel(channel, rho)).max()
        summary.reports.append(report)
        summary.max_tv_distance = max(summary.max_tv_distance, report.tv_distance)
        summary.max_trace_distance = max(summary.max_trace_distance, report.trace_distance)
        summary.max_exact_discrepancy = max(summary.max_exact_discrepancy, float(exact))
    return summary


def convergence_exponent(
    chi: ResourceState,
    rho_in: np.ndarray,
    trials_list: Sequence[int],
    repeats: int = 20,
    seed: int = settings.default_seed,
) -> Tuple[float, np.ndarray]:
    """Наклон log(trace_distance) от log(trials), trace_distance усреднена по повторам"""
    if len(trials_list) < 2:
        raise DomainError("convergence_exponent needs at least two trial counts")
    seeds = np.random.SeedSequence(seed).generate_state(len(trials_list) * repeats).reshape(len(trials_list), repeats)
    means = np.array([
        np.mean([simulate_teleportation(chi, rho_in, trials, int(s)).trace_distance for s in row])
        for trials, row in zip(trials_list, seeds)
    ])
    slope = np.polyfit(np.log(np.asarray(trials_list, dtype=float)), np.log(means), 1)[0]
    logger.info("trace distance convergence exponent %.3f over trials=%s", slope, list(trials_list))
    return float(slope), means

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import LinAlgError, block_diag, solve
from scipy.stats import multivariate_normal

from config.settings import numerics
from exceptions import (
    DegenerateResourceError,
    DimensionMismatchError,
    DomainError,
    InvariantViolationError,
)

logger = logging.getLogger(__name__)

Side = Literal["A", "B"]


# ==================== Типы ====================

@dataclass(frozen=True, eq=False)
class CovMatrix:
    """
    Ковариационная матрица m мод, раскладка (q_1..q_m, p_1..p_m)

    Вакуум = единичная матрица. sides[i] - сторона моды i ("A" или "B");
    для 2n-модовой среды моды идут как (A1, B1, ..., An, Bn).
    """

    matrix: np.ndarray
    sides: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise DimensionMismatchError(f"covariance matrix must be 2m x 2m, got shape {matrix.shape}")
        if np.abs(matrix - matrix.T).max() > numerics.CM_SYMMETRY_TOL:
            raise InvariantViolationError("covariance matrix is symmetric")
        object.__setattr__(self, "matrix", (matrix + matrix.T) / 2)
        if self.sides is not None:
            sides = tuple(self.sides)
            if len(sides) != self.m:
                raise DimensionMismatchError(f"{len(sides)} side labels for {self.m} modes")
            if any(side not in ("A", "B") for side in sides):
                raise DomainError(f"mode sides must be 'A' or 'B', got {sides}")
            object.__setattr__(self, "sides", sides)

    @property
    def m(self) -> int:
        return self.matrix.shape[0] // 2

    def is_physical(self, tol: float = numerics.CM_PHYSICAL_TOL) -> bool:
        """γ + iΩ ⪰ 0; допуск масштабируется с max|γ_ij| (при сильном сжатии ошибка eigvalsh растёт)"""
        scale = max(1.0, float(np.abs(self.matrix).max()))
        return bool(np.linalg.eigvalsh(self.matrix + 1j * symplectic_form(self.m)).min() >= -tol * scale)


@dataclass(frozen=True, eq=False)
class GaussianNoiseChannel:
    """Аддитивный классический шум: γ -> γ + N"""

    n: int
    noise_cov: np.ndarray

    def __post_init__(self):
        noise = np.asarray(self.noise_cov, dtype=float)
        if noise.shape != (2 * self.n, 2 * self.n):
            raise DimensionMismatchError(f"noise covariance shape {noise.shape} does not match n={self.n}")
        if np.abs(noise - noise.T).max() > numerics.CM_SYMMETRY_TOL:
            raise InvariantViolationError("noise covariance is symmetric")
        noise = (noise + noise.T) / 2
        if np.linalg.eigvalsh(noise).min() < -numerics.CM_SYMMETRY_TOL:
            raise InvariantViolationError("noise covariance is positive semidefinite")
        object.__setattr__(self, "noise_cov", noise)


@dataclass
class CvBoundReport:
    """Верхняя граница через логарифмическую негативность и регуляризация, при которой она получена"""

    n: int
    r_src: float
    r_probe: float
    noise_cov: np.ndarray
    spectrum: np.ndarray
    log_negativity: float
    bound: float
    convergence_gap: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r_src": self.r_src,
            "r_probe": self.r_probe,
            "noise_cov": self.noise_cov.tolist(),
            "pt_symplectic_spectrum": self.spectrum.tolist(),
            "log_negativity": self.log_negativity,
            "bound_per_mode": self.bound,
            "convergence_gap": self.convergence_gap,
        }


# ==================== Раскладка ====================

def symplectic_form(m: int) -> np.ndarray:
    """Ω = [[0, I], [-I, 0]] в раскладке q..q p..p"""
    identity = np.eye(m)
    zeros = np.zeros((m, m))
    return np.block([[zeros, identity], [-identity, zeros]])


def quadrature_indices(modes: Sequence[int], m: int) -> np.ndarray:
    """Индексы (q_{modes}..., p_{modes}...) в 2m-мерном векторе"""
    modes = np.asarray(modes, dtype=np.int64)
    return np.concatenate([modes, m + modes])


def medium_sides(n: int) -> Tuple[str, ...]:
    return ("A", "B") * n


def bob_indices(n: int) -> np.ndarray:
    """Квадратуры Боба (q_B1..q_Bn, p_B1..p_Bn) в 2n-модовой среде"""
    return quadrature_indices([2 * j + 1 for j in range(n)], 2 * n)


def direct_sum(cms: Sequence[CovMatrix]) -> CovMatrix:
    """γ_1 ⊕ γ_2 ⊕ ... с сохранением раскладки q..q p..p"""
    if not cms:
        raise DomainError("direct_sum needs at least one covariance matrix")
    total = sum(cm.m for cm in cms)
    matrix = np.zeros((2 * total, 2 * total))
    offset = 0
    for cm in cms:
        index = quadrature_indices(range(offset, offset + cm.m), total)
        matrix[np.ix_(index, index)] = cm.matrix
        offset += cm.m

    sides = None
    if all(cm.sides is not None for cm in cms):
        sides = tuple(side for cm in cms for side in cm.sides)
    return CovMatrix(matrix, sides)


def _check_medium(gamma: CovMatrix) -> int:
    if gamma.m % 2:
        raise DimensionMismatchError(f"a medium has 2n modes, got {gamma.m}")
    return gamma.m // 2


# ==================== Состояния ====================

def epr_cm(r: float, nu: float = 1.0) -> CovMatrix:
    """
    Двухмодовое сжатое тепловое состояние (q_A, q_B, p_A, p_B)

    Диагональ a = ν·cosh(2r), внедиагональ ∓ν·sinh(2r) на q и p.
    Симплектические собственные значения равны ν.
    """
    if r < 0:
        raise DomainError(f"squeezing must be >= 0, got r={r}")
    if nu < 1:
        raise DomainError(f"thermal symplectic value must be >= 1, got nu={nu}")
    a = nu * np.cosh(2 * r)
    b = nu * np.sinh(2 * r)
    gamma_minus = np.array([[a, -b], [-b, a]])
    gamma_plus = np.array([[a, b], [b, a]])
    return CovMatrix(block_diag(gamma_minus, gamma_plus), ("A", "B"))


def epr_medium(n: int, r: float, nu: float = 1.0) -> CovMatrix:
    return direct_sum([epr_cm(r, nu)] * n)


def thermal_medium(n: int, nu: float) -> CovMatrix:
    """Произведение тепловых мод; nu=1 - вакуум"""
    if nu < 1:
        raise DomainError(f"thermal symplectic value must be >= 1, got nu={nu}")
    return CovMatrix(nu * np.eye(4 * n), medium_sides(n))


def check_physical(gamma: CovMatrix) -> CovMatrix:
    if not gamma.is_physical():
        minimum = np.linalg.eigvalsh(gamma.matrix + 1j * symplectic_form(gamma.m)).min()
        raise InvariantViolationError("covariance matrix is physical (gamma + i*Omega >= 0)", f"min eigenvalue {minimum:.3e}")
    return gamma


# ==================== Канал ====================

def noise_covariance(gamma: CovMatrix, r_src: float, nu_src: float = 1.0) -> GaussianNoiseChannel:
    """
    N = K⁻¹, K = [M⁻¹]_{ZZ}, M = γ_E0(r_src, ν_src)^{⊕n} + γ

    Z - квадратуры Боба в порядке (x_1..x_n, y_1..y_n). N считается как
    дополнение Шура M_ZZ - M_ZC M_CC⁻¹ M_CZ, без обращения всей M.
    """
    n = _check_medium(gamma)
    total = epr_medium(n, r_src, nu_src).matrix + gamma.matrix
    index = bob_indices(n)
    rest = np.setdiff1d(np.arange(total.shape[0]), index)
    try:
        correction = total[np.ix_(index, rest)] @ solve(
            total[np.ix_(rest, rest)], total[np.ix_(rest, index)], assume_a="pos"
        )
    except LinAlgError as e:
        raise DegenerateResourceError("gamma_E0^{(+)n} + gamma is not positive definite") from e
    noise = total[np.ix_(index, index)] - correction
    noise = (noise + noise.T) / 2

    # Entries of M carry absolute error ~eps*max|M|; eigenvalues of N below that are rounding noise
    resolution = 4 * total.shape[0] * np.finfo(float).eps * np.abs(total).max()
    values, vectors = np.linalg.eigh(noise)
    if values.min() < -resolution:
        raise DegenerateResourceError(f"noise covariance is not positive semidefinite (min eigenvalue {values.min():.3e})")
    if values.min() < resolution:
        logger.warning("noise covariance reaches the double-precision resolution %.3e at r_src=%.3f", resolution, r_src)
        noise = (vectors * np.clip(values, 0.0, None)) @ vectors.T
        noise = (noise + noise.T) / 2
    logger.debug("noise covariance for n=%d r_src=%.3f: max entry %.3e", n, r_src, np.abs(noise).max())
    return GaussianNoiseChannel(n, noise)


def f_density(z: Sequence[float], channel: GaussianNoiseChannel) -> Union[float, np.ndarray]:
    """
    Нормированная гауссова плотность f(z) с ковариацией N

    z имеет форму (2n,) или (..., 2n); во втором случае возвращается массив.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim == 0 or z.shape[-1] != 2 * channel.n:
        raise DimensionMismatchError(f"z must end in a length-{2 * channel.n} axis, got shape {z.shape}")
    values = np.linalg.eigvalsh(channel.noise_cov)
    if values.max() <= 0.0 or values.min() <= numerics.CM_SYMMETRY_TOL * values.max():
        raise DegenerateResourceError("noise covariance is singular; f is a delta distribution")
    density = multivariate_normal(mean=np.zeros(2 * channel.n), cov=channel.noise_cov).pdf(z)
    return float(density) if z.ndim == 1 else np.asarray(density)


def cv_apply(channel: GaussianNoiseChannel, gamma_in: CovMatrix) -> CovMatrix:
    if gamma_in.m != channel.n:
        raise DimensionMismatchError(f"input has {gamma_in.m} modes, channel acts on {channel.n}")
    return CovMatrix(gamma_in.matrix + channel.noise_cov, gamma_in.sides)


def cv_cj_cm(channel: GaussianNoiseChannel, r_probe: float, nu: float = 1.0) -> CovMatrix:
    """γ_CJ = γ_E0(r_probe, ν)^{⊕n} + N на квадратурах Боба"""
    if not np.isfinite(r_probe):
        raise DomainError("probe squeezing must be finite")
    probe = epr_medium(channel.n, r_probe, nu)
    matrix = probe.matrix.copy()
    index = bob_indices(channel.n)
    matrix[np.ix_(index, index)] += channel.noise_cov
    return CovMatrix(matrix, probe.sides)


# ==================== Запутанность ====================

def partial_transpose_cm(gamma: CovMatrix, side: Side = "B") -> CovMatrix:
    """Смена знака импульсов на стороне side: PγP"""
    if gamma.sides is None:
        raise DomainError("partial transpose needs A/B mode labels")
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")
    flip = np.ones(2 * gamma.m)
    for mode, mode_side in enumerate(gamma.sides):
        if mode_side == side:
            flip[gamma.m + mode] = -1.0
    return CovMatrix(gamma.matrix * np.outer(flip, flip), gamma.sides)


def symplectic_eigenvalues(gamma: CovMatrix) -> np.ndarray:
    """
    Симплектический спектр по одному значению на моду, по возрастанию

    Для γ ⪰ 0 с корнем γ = RRᵀ спектр ±ν_k берётся из эрмитовой матрицы
    i·RᵀΩR через eigvalsh; для неопределённой γ - модули собственных
    значений iΩγ. Значения ниже разрешения double (~eps·ν_max) поднимаются
    до него с предупреждением в логе.
    """
    m = gamma.m
    omega = symplectic_form(m)
    weights, vectors = np.linalg.eigh(gamma.matrix)
    if weights.min() < -4 * m * np.finfo(float).eps * np.abs(weights).max():
        moduli = np.sort(np.abs(np.linalg.eigvals(1j * omega @ gamma.matrix)))
        first, second = moduli[0::2], moduli[1::2]
    else:
        root = vectors * np.sqrt(np.clip(weights, 0.0, None))
        signed = np.linalg.eigvalsh(1j * root.T @ omega @ root)
        first, second = -signed[:m][::-1], signed[m:]

    mismatch = np.abs(first - second).max()
    if mismatch > numerics.SYMPLECTIC_PAIRING_TOL * max(1.0, second.max()):
        logger.warning("symplectic eigenvalues pair up only within %.3e", mismatch)
    values = (first + second) / 2

    resolution = 4 * m * np.finfo(float).eps * max(1.0, values.max())
    if values.min() < resolution:
        logger.warning("symplectic eigenvalue %.3e is below the double-precision resolution %.3e", values.min(), resolution)
        values = np.maximum(values, resolution)
    return values


def log_negativity(gamma: CovMatrix, side: Side = "B") -> float:
    """Σ -log2 ν̃_k по ν̃_k < 1 спектра частично транспонированной матрицы"""
    spectrum = symplectic_eigenvalues(partial_transpose_cm(gamma, side))
    below = spectrum[spectrum < 1.0]
    return float(max(-np.log2(below).sum(), 0.0))


def _bound(gamma_medium: CovMatrix, n: int, r_src: float, r_probe: float, nu_src: float):
    channel = noise_covariance(gamma_medium, r_src, nu_src)
    cj = cv_cj_cm(channel, r_probe)
    spectrum = symplectic_eigenvalues(partial_transpose_cm(cj, "B"))
    negativity = log_negativity(cj, "B")
    return channel, spectrum, negativity


def cv_capacity_upper(
    gamma_medium: CovMatrix,
    n: int,
    r_src: float,
    r_probe: float,
    nu_src: float = 1.0,
    check_convergence: bool = True,
) -> CvBoundReport:
    """
    log_negativity(γ_CJ)/n для конечной регуляризации (r_src, r_probe)

    При check_convergence граница пересчитывается при (r_src+1, r_probe+1),
    модуль разности попадает в convergence_gap.
    """
    if _check_medium(gamma_medium) != n:
        raise DimensionMismatchError(f"medium has {gamma_medium.m} modes, expected {2 * n}")
    channel, spectrum, negativity = _bound(gamma_medium, n, r_src, r_probe, nu_src)
    report = CvBoundReport(
        n=n,
        r_src=float(r_src),
        r_probe=float(r_probe),
        noise_cov=channel.noise_cov,
        spectrum=spectrum,
        log_negativity=negativity,
        bound=negativity / n,
    )
    if check_convergence:
        _, _, refined = _bound(gamma_medium, n, r_src + 1.0, r_probe + 1.0, nu_src)
        report.convergence_gap = abs(refined / n - report.bound)
    logger.info("CV bound n=%d r_src=%.2f r_probe=%.2f: %.6f", n, r_src, r_probe, report.bound)
    return report

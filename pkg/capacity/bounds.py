import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, log2
from typing import Dict, Iterable, List, Literal, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field

from config.settings import numerics, settings
from exceptions import DomainError, SizeLimitError
from pauli.algebra import check_dense
from pauli.channels import PauliChannel, coherent_info
from pauli.resources import phase_gate_chain_probs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CapacityRow:
    key: Union[float, str]
    n: int
    rate: float


@dataclass
class CapacityTable:
    """
    Строки (θ или ресурс, n, rate) с метаданными сходимости

    rate хранится как есть; обрезка отрицательных значений до 0 делается
    только при выводе (to_csv, curve).
    """

    key_name: str
    rows: List[CapacityRow] = field(default_factory=list)
    tolerance: float = settings.default_tolerance

    def groups(self) -> Dict[Union[float, str], List[CapacityRow]]:
        grouped: Dict[Union[float, str], List[CapacityRow]] = {}
        for row in self.rows:
            grouped.setdefault(row.key, []).append(row)
        for rows in grouped.values():
            rows.sort(key=lambda r: r.n)
        return grouped

    def gaps(self) -> Dict[Union[float, str], float]:
        """|rate(n_max) - rate(предыдущего n)| для каждой группы"""
        result = {}
        for key, rows in self.groups().items():
            result[key] = abs(rows[-1].rate - rows[-2].rate) if len(rows) > 1 else float("nan")
        return result

    def estimates(self) -> Dict[Union[float, str], float]:
        return {key: rows[-1].rate for key, rows in self.groups().items()}

    def converged(self) -> bool:
        return all(gap < self.tolerance for gap in self.gaps().values())

    def to_csv(self) -> str:
        gaps = self.gaps()
        lines = [f"{self.key_name},n,rate,converged_gap"]
        for key, rows in self.groups().items():
            key_text = numerics.format_float(key) if isinstance(key, float) else key
            for row in rows:
                lines.append(
                    f"{key_text},{row.n},{numerics.format_float(max(row.rate, 0.0))},"
                    f"{numerics.format_float(gaps[key])}"
                )
        return "\n".join(lines) + "\n"

    def curve(self) -> List[tuple]:
        """(θ/π, Q при n_max) - сокращённая кривая ёмкости"""
        points = []
        for key, rate in self.estimates().items():
            x = key / np.pi if isinstance(key, float) else key
            points.append((x, max(rate, 0.0)))
        return points

    def to_plotdata(self) -> str:
        lines = [f"# {self.key_name}/pi Q(n_max)"]
        for x, rate in self.curve():
            x_text = numerics.format_float(x) if isinstance(x, float) else x
            lines.append(f"{x_text} {numerics.format_float(rate)}")
        return "\n".join(lines) + "\n"


# ==================== Границы хэширования ====================

def hashing_rate(channel: PauliChannel) -> float:
    """1 - S(p)/n без обрезки"""
    return 1.0 - channel.probs.entropy() / channel.n


def phase_gate_rate(n: int, theta: float, periodic: bool = False) -> float:
    """Q^(n) = 1 - S(χ_BD^(n))/n для цепочки фазовых вентилей"""
    if np.mod(theta, 2 * np.pi) == 0.0:
        return 1.0
    return 1.0 - phase_gate_chain_probs(n, theta, periodic).entropy() / n


def check_n_range(n_min: int, n_max: int) -> None:
    if not 1 <= n_min < n_max:
        raise DomainError(f"need 1 <= n_min < n_max, got n_min={n_min}, n_max={n_max}")
    if n_max > numerics.STRUCTURED_CUTOFF:
        raise SizeLimitError("phase_gate_capacity_curve", n_max, numerics.STRUCTURED_CUTOFF)


def phase_gate_rows(theta: float, n_min: int, n_max: int, periodic: bool = False) -> List[CapacityRow]:
    """Строки одной θ-группы"""
    rows = []
    for n in range(n_min, n_max + 1):
        rate = phase_gate_rate(n, theta, periodic)
        logger.debug("theta=%.6f n=%d Q=%.12f", theta, n, rate)
        rows.append(CapacityRow(float(theta), n, rate))
    return rows


def phase_gate_capacity_curve(
    thetas: Iterable[float],
    n_min: int,
    n_max: int,
    tolerance: float = settings.default_tolerance,
    periodic: bool = False,
) -> CapacityTable:
    """
    Q^(n) для каждой θ и n в [n_min, n_max]

    Оценка ёмкости - значение при n_max, плюс разрыв сходимости.
    """
    check_n_range(n_min, n_max)
    table = CapacityTable("theta", tolerance=tolerance)
    for theta in thetas:
        table.rows.extend(phase_gate_rows(theta, n_min, n_max, periodic))
        logger.info("theta/pi=%.4f done", theta / np.pi)
    return table


# ==================== Пример с перестановками ====================

def perm_d1(n: int) -> float:
    """
    Односторонняя дистиллируемая запутанность смеси перестановок

    D1 = Σ_{j=0}^{n/2} (2j+1)^2 / (2^n (n+1)) · C(n+1, n/2-j) · log2(2j+1)
    """
    if n < 2 or n % 2:
        raise DomainError(f"perm_d1 needs an even n >= 2, got {n}")
    half = n // 2
    total = 0.0
    for j in range(half + 1):
        weight = Fraction((2 * j + 1) ** 2 * comb(n + 1, half - j), 2 ** n * (n + 1))
        total += float(weight) * log2(2 * j + 1)
    return total


def perm_capacity_bound(n_list: Sequence[int]) -> CapacityTable:
    """Строки (n, D1(n)/n); последняя строка - оценка верхней границы"""
    if not n_list:
        raise DomainError("perm_capacity_bound needs a non-empty list of n")
    table = CapacityTable("resource")
    for n in sorted(set(n_list)):
        table.rows.append(CapacityRow("perm", n, perm_d1(n) / n))

    rates = [row.rate for row in table.rows]
    if any(later >= earlier for earlier, later in zip(rates, rates[1:])):
        logger.warning("D1(n)/n is not strictly decreasing over n=%s", sorted(set(n_list)))
    return table


# ==================== Когерентная информация ====================

class InputFamily(BaseModel):
    """Семейство входных состояний для оценки max_ρ J(ρ, Λ)"""

    kind: Literal["maximally-mixed", "diagonal-grid"] = "maximally-mixed"
    step: float = Field(default=0.25, gt=0.0, le=0.5)

    def states(self, n: int) -> Iterable[np.ndarray]:
        if self.kind == "maximally-mixed":
            yield np.eye(2 ** n, dtype=complex) / 2 ** n
            return
        weights = sorted(set(np.round(np.arange(0.0, 1.0 + 1e-12, self.step), 12)) | {0.5})
        for combo in itertools.product(weights, repeat=n):
            diagonal = np.array([1.0])
            for q in combo:
                diagonal = np.kron(diagonal, [q, 1.0 - q])
            yield np.diag(diagonal).astype(complex)


def coherent_info_bound(channel: PauliChannel, family: InputFamily) -> float:
    """
    max_ρ J(ρ, Λ)/n по ограниченному семейству

    Это оценка снизу для настоящего максимума по всем состояниям.
    """
    if not isinstance(family, InputFamily):
        raise DomainError(f"invalid input family descriptor: {family!r}")
    check_dense(channel.n, numerics.DENSE_PAIR_CUTOFF, "coherent_info_bound")
    best = max(coherent_info(channel, rho) for rho in family.states(channel.n))
    return best / channel.n

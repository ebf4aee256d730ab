from typing import List, Tuple

import numpy as np

from capacity.bounds import CapacityTable
from config.settings import numerics
from gaussian.covariance import CvBoundReport
from pauli.resources import ProbDist
from simulation.teleport import SimReport

fmt = numerics.format_float


def significant_probabilities(probs: ProbDist) -> List[Tuple[str, float]]:
    """Метки и вероятности по убыванию, без численного шума ниже CLAMP"""
    return [(label, p) for label, p in probs.as_labels().items() if p > numerics.CLAMP]


def probability_csv(probs: ProbDist, entropy: float, fidelity: float) -> str:
    lines = [
        f"# n={probs.n}",
        f"# entropy={fmt(entropy)}",
        f"# entanglement_fidelity={fmt(fidelity)}",
        "word,probability",
    ]
    lines += [f"{label},{fmt(p)}" for label, p in significant_probabilities(probs)]
    return "\n".join(lines) + "\n"


def _table(rows: List[Tuple[str, str]]) -> str:
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {value}" for name, value in rows) + "\n"


def capacity_summary(table: CapacityTable) -> str:
    gaps = table.gaps()
    rows = [(table.key_name, "Q(n_max)  gap")]
    for key, rate in table.estimates().items():
        label = f"{fmt(key / np.pi)}*pi" if isinstance(key, float) else str(key)
        rows.append((label, f"{fmt(max(rate, 0.0))}  {fmt(gaps[key])}"))
    rows.append(("converged", str(table.converged())))
    return _table(rows)


def cv_summary(report: CvBoundReport) -> str:
    rows = [
        ("n", str(report.n)),
        ("r_src / r_probe", f"{fmt(report.r_src)} / {fmt(report.r_probe)}"),
        ("noise diagonal", " ".join(fmt(v) for v in report.noise_cov.diagonal())),
        ("PT symplectic spectrum", " ".join(fmt(v) for v in report.spectrum)),
        ("log negativity", fmt(report.log_negativity)),
        ("bound per mode", fmt(report.bound)),
    ]
    if report.convergence_gap is not None:
        rows.append(("gap at (r+1, r+1)", fmt(report.convergence_gap)))
    return _table(rows)


def simulation_summary(report: SimReport) -> str:
    rows = [
        ("trials", str(report.trials)),
        ("seed / generator", f"{report.seed} / {report.generator}"),
        ("bell outcomes", ", ".join(f"{k}:{v}" for k, v in sorted(report.bell_outcome_counts.items()))),
        ("error labels", ", ".join(f"{k}:{v}" for k, v in sorted(report.error_counts.items()))),
        ("tv distance", fmt(report.tv_distance)),
        ("trace distance", fmt(report.trace_distance)),
    ]
    return _table(rows)

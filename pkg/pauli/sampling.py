from functools import reduce
from typing import Optional

import numpy as np

from exceptions import DomainError
from pauli.channels import PauliChannel
from pauli.resources import DenseResource, ProbDist


def random_density_matrix(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Случайная матрица плотности через ансамбль Жинибра"""
    rank = rank or dim
    ginibre = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = ginibre @ ginibre.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_dense_resource(n: int, rng: np.random.Generator) -> DenseResource:
    return DenseResource(n, random_density_matrix(4 ** n, rng))


def random_pauli_channel(n: int, rng: np.random.Generator) -> PauliChannel:
    weights = rng.random(4 ** n)
    return PauliChannel(n, ProbDist(n, weights / weights.sum()))


_SINGLE_QUBIT_INPUTS = {
    "zero": np.array([[1, 0], [0, 0]], dtype=complex),
    "one": np.array([[0, 0], [0, 1]], dtype=complex),
    "plus": np.full((2, 2), 0.5, dtype=complex),
    "minus": np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex),
    "maximally-mixed": np.eye(2, dtype=complex) / 2,
}


def named_input_state(name: str, n: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """
    Входное состояние по имени

    Args:
        name: zero | one | plus | minus | maximally-mixed | mixed:<q> | random
        n: число кубитов (именованные состояния берутся в тензорной степени)
        rng: генератор для random
    """
    if name == "random":
        if rng is None:
            raise DomainError("random input state needs a generator")
        return random_density_matrix(2 ** n, rng)
    if name.startswith("mixed:"):
        try:
            q = float(name.split(":", 1)[1])
        except ValueError as e:
            raise DomainError(f"invalid mixed input {name!r}: {e}")
        if not 0.0 <= q <= 1.0:
            raise DomainError(f"mixed input weight must lie in [0, 1], got {q}")
        single = np.diag([q, 1 - q]).astype(complex)
    elif name in _SINGLE_QUBIT_INPUTS:
        single = _SINGLE_QUBIT_INPUTS[name]
    else:
        raise DomainError(f"unknown input state {name!r}")
    return reduce(np.kron, [single] * n)

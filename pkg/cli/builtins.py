import logging
from typing import Optional, Tuple

from cli.config import RunConfig
from exceptions import DomainError
from gaussian.covariance import CovMatrix, epr_medium, thermal_medium
from pauli.resources import PermutationMixture, PhaseGateChain, ResourceState, fully_mixed, perfect_bells
from services.file_service import file_service

logger = logging.getLogger(__name__)


def _split(builtin: str) -> Tuple[str, list]:
    name, *params = builtin.split(":")
    return name, params


def _number(text: str, what: str, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise DomainError(f"invalid {what} {text!r} in builtin name")


def resolve_resource(config: RunConfig) -> ResourceState:
    """
    Ресурс по --builtin или --resource-file

    perfect | mixed | phasegate[:θ:n] | perm[:n]; параметры в имени
    имеют приоритет над --theta и --n.
    """
    if config.resource_file:
        return file_service.load_resource(config.resource_file)
    if not config.builtin:
        raise DomainError("a resource is required: pass --builtin or --resource-file")

    name, params = _split(config.builtin)
    n: Optional[int] = config.n
    if name == "perfect" and not params:
        return perfect_bells(n or 1)
    if name == "mixed" and not params:
        return fully_mixed(n or 1)
    if name == "phasegate" and len(params) in (0, 2):
        theta = config.theta
        if params:
            theta = _number(params[0], "phase", float)
            n = _number(params[1], "size", int)
        if theta is None:
            raise DomainError("phasegate needs a phase: --theta or phasegate:<theta>:<n>")
        return PhaseGateChain(n or 2, theta, config.periodic)
    if name == "perm" and len(params) in (0, 1):
        if params:
            n = _number(params[0], "size", int)
        return PermutationMixture(n or 2)
    raise DomainError(f"unknown builtin resource {config.builtin!r}")


def resolve_medium(config: RunConfig) -> CovMatrix:
    """
    Ковариационная матрица среды: epr[:r] | thermal[:ν] | vacuum или файл

    Для epr без параметра берётся --r-medium, затем --r-src; ν - из --nu.
    """
    if config.resource_file:
        return file_service.load_cov_matrix(config.resource_file)
    n = config.n or 1
    name, params = _split(config.builtin or "epr")
    if name == "epr" and len(params) <= 1:
        if params:
            r = _number(params[0], "squeezing", float)
        elif config.r_medium is not None:
            r = config.r_medium
        else:
            r = config.r_src
        return epr_medium(n, r, config.nu)
    if name == "thermal" and len(params) <= 1:
        nu = _number(params[0], "thermal value", float) if params else config.nu
        return thermal_medium(n, nu)
    if name == "vacuum" and not params:
        return thermal_medium(n, 1.0)
    raise DomainError(f"unknown builtin medium {config.builtin!r}")

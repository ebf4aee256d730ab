import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from exceptions import DimensionMismatchError, DomainError, InvariantViolationError, ResourceFileError
from gaussian.covariance import CovMatrix, check_physical, medium_sides
from pauli.algebra import PauliString
from pauli.channels import PauliChannel
from pauli.resources import BellDiagonalResource, DenseResource, ProbDist

logger = logging.getLogger(__name__)

COV_LAYOUT = "qqpp-ABinterleaved"


# ==================== Схемы файлов ====================

class DenseResourceFile(BaseModel):
    n: int = Field(ge=1)
    matrix: List[List[List[float]]]

    @field_validator("matrix")
    @classmethod
    def entries_are_pairs(cls, value):
        if any(len(entry) != 2 for row in value for entry in row):
            raise ValueError("every matrix entry must be a [re, im] pair")
        return value


class BellDiagonalFile(BaseModel):
    n: int = Field(ge=1)
    probs: Dict[str, float]

    @field_validator("probs")
    @classmethod
    def labels_are_base4(cls, value):
        for label in value:
            if not label or any(ch not in "0123" for ch in label):
                raise ValueError(f"word label {label!r} is not a base-4 string")
        return value


class PauliChannelFile(BellDiagonalFile):
    type: Literal["pauli_channel"]


class CovMatrixFile(BaseModel):
    modes: int = Field(ge=2)
    layout: Literal["qqpp-ABinterleaved"]
    matrix: List[List[float]]


# ==================== Сервис ====================

class FileService:
    """Чтение и запись файлов ресурсов, каналов и ковариационных матриц"""

    @staticmethod
    def _read_json(path: Union[str, Path]) -> Dict[str, Any]:
        try:
            content = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ResourceFileError(f"cannot read {path}: {e}")
        try:
            return json.loads(content)
        except json.JSONDecodeError as e:
            raise ResourceFileError(f"{path} is not valid JSON: {e}")

    @staticmethod
    def _validate(schema, data: Dict[str, Any], path: Union[str, Path]):
        try:
            return schema.model_validate(data)
        except ValidationError as e:
            raise ResourceFileError(f"{path} does not match the {schema.__name__} schema: {e}")

    @staticmethod
    def _probs_from_labels(n: int, probs: Dict[str, float]) -> ProbDist:
        indices = []
        for label in probs:
            if len(label) != n:
                raise InvariantViolationError("word labels have length n", f"{label!r} for n={n}")
            indices.append(PauliString.from_label(label).index)
        return ProbDist(n, np.array(list(probs.values()), dtype=float), storage="sparse", indices=np.array(indices))

    def load_resource(self, path: Union[str, Path]) -> Union[DenseResource, BellDiagonalResource]:
        """
        Загружает ресурсное состояние

        Формат определяется ключом: "matrix" - плотное, "probs" - белл-диагональное.
        """
        data = self._read_json(path)
        if not isinstance(data, dict):
            raise ResourceFileError(f"{path}: top-level JSON value must be an object")
        try:
            if "matrix" in data:
                parsed = self._validate(DenseResourceFile, data, path)
                pairs = np.asarray(parsed.matrix, dtype=float)
                if pairs.ndim != 3:
                    raise InvariantViolationError("matrix is square", f"ragged rows in {path}")
                resource = DenseResource(parsed.n, pairs[..., 0] + 1j * pairs[..., 1])
            elif "probs" in data:
                parsed = self._validate(BellDiagonalFile, data, path)
                resource = BellDiagonalResource(parsed.n, self._probs_from_labels(parsed.n, parsed.probs))
            else:
                raise ResourceFileError(f"{path}: expected a 'matrix' or 'probs' key")
        except (InvariantViolationError, DimensionMismatchError, DomainError) as e:
            raise ResourceFileError(f"{path}: {e}")
        logger.info("loaded %s resource (n=%d) from %s", type(resource).__name__, resource.n, path)
        return resource

    def load_channel(self, path: Union[str, Path]) -> PauliChannel:
        parsed = self._validate(PauliChannelFile, self._read_json(path), path)
        try:
            return PauliChannel(parsed.n, self._probs_from_labels(parsed.n, parsed.probs))
        except (InvariantViolationError, DimensionMismatchError, DomainError) as e:
            raise ResourceFileError(f"{path}: {e}")

    def load_cov_matrix(self, path: Union[str, Path]) -> CovMatrix:
        """Загружает ковариационную матрицу среды и проверяет симметрию и физичность"""
        parsed = self._validate(CovMatrixFile, self._read_json(path), path)
        if parsed.modes % 2:
            raise ResourceFileError(f"{path}: a medium has an even number of modes, got {parsed.modes}")
        matrix = np.asarray(parsed.matrix, dtype=float)
        if matrix.shape != (2 * parsed.modes, 2 * parsed.modes):
            raise ResourceFileError(f"{path}: matrix shape {matrix.shape} does not match {parsed.modes} modes")
        try:
            gamma = check_physical(CovMatrix(matrix, medium_sides(parsed.modes // 2)))
        except (InvariantViolationError, DimensionMismatchError, DomainError) as e:
            raise ResourceFileError(f"{path}: {e}")
        logger.info("loaded covariance matrix (%d modes) from %s", gamma.m, path)
        return gamma

    # ==================== Сериализация ====================

    @staticmethod
    def _labelled_probs(probs: ProbDist) -> Dict[str, float]:
        indices, values = probs.nonzero()
        return {PauliString.from_index(probs.n, int(i)).label: float(v) for i, v in zip(indices, values)}

    def resource_to_dict(self, resource: Union[DenseResource, BellDiagonalResource]) -> Dict[str, Any]:
        if isinstance(resource, DenseResource):
            matrix = [[[float(v.real), float(v.imag)] for v in row] for row in resource.matrix]
            return {"n": resource.n, "matrix": matrix}
        return {"n": resource.n, "probs": self._labelled_probs(resource.probs)}

    def channel_to_dict(self, channel: PauliChannel) -> Dict[str, Any]:
        return {"type": "pauli_channel", "n": channel.n, "probs": self._labelled_probs(channel.probs)}

    @staticmethod
    def cov_matrix_to_dict(gamma: CovMatrix) -> Dict[str, Any]:
        return {"modes": gamma.m, "layout": COV_LAYOUT, "matrix": gamma.matrix.tolist()}

    @staticmethod
    def dumps(data: Dict[str, Any]) -> str:
        """Байтово-стабильный JSON"""
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @staticmethod
    def write_text(text: str, out: Optional[Union[str, Path]] = None) -> None:
        """Пишет артефакт в файл или в stdout"""
        if out is None or str(out) == "-":
            print(text, end="")
            return
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise ResourceFileError(f"cannot write {out}: {e}")
        logger.info("wrote %s", out)


# Экспортируем экземпляр сервиса
file_service = FileService()

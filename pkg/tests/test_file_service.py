import json

import numpy as np
import pytest

from exceptions import ResourceFileError
from gaussian.covariance import epr_medium
from pauli.channels import PauliChannel
from pauli.resources import BellDiagonalResource, DenseResource, ProbDist
from pauli.sampling import random_dense_resource, random_pauli_channel
from services.file_service import file_service


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_dense_resource_round_trip(tmp_path, rng):
    chi = random_dense_resource(1, rng)
    path = _write(tmp_path / "chi.json", file_service.resource_to_dict(chi))
    loaded = file_service.load_resource(path)
    assert isinstance(loaded, DenseResource)
    assert np.abs(loaded.matrix - chi.matrix).max() == 0.0


def test_bell_diagonal_resource_round_trip(tmp_path):
    path = _write(tmp_path / "chi.json", {"n": 2, "probs": {"00": 0.5, "33": 0.5}})
    loaded = file_service.load_resource(path)
    assert isinstance(loaded, BellDiagonalResource)
    assert loaded.probs.weight(15) == 0.5
    assert file_service.resource_to_dict(loaded) == {"n": 2, "probs": {"00": 0.5, "33": 0.5}}


def test_channel_round_trip(tmp_path, rng):
    channel = random_pauli_channel(2, rng)
    data = file_service.channel_to_dict(channel)
    assert data["type"] == "pauli_channel"
    loaded = file_service.load_channel(_write(tmp_path / "channel.json", data))
    assert isinstance(loaded, PauliChannel)
    assert np.abs(loaded.probs.dense_values() - channel.probs.dense_values()).max() == 0.0

    del data["type"]
    with pytest.raises(ResourceFileError):
        file_service.load_channel(_write(tmp_path / "untyped.json", data))


def test_invalid_resource_files(tmp_path):
    doubled = [[[0.5 if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
    with pytest.raises(ResourceFileError, match="unit trace"):
        file_service.load_resource(_write(tmp_path / "trace.json", {"n": 1, "matrix": doubled}))

    with pytest.raises(ResourceFileError, match="length n"):
        file_service.load_resource(_write(tmp_path / "label.json", {"n": 2, "probs": {"0": 1.0}}))

    with pytest.raises(ResourceFileError):
        file_service.load_resource(_write(tmp_path / "digits.json", {"n": 1, "probs": {"7": 1.0}}))

    with pytest.raises(ResourceFileError):
        file_service.load_resource(_write(tmp_path / "empty.json", {"n": 1}))

    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ResourceFileError, match="not valid JSON"):
        file_service.load_resource(broken)

    with pytest.raises(ResourceFileError):
        file_service.load_resource(tmp_path / "missing.json")


def test_cov_matrix_files(tmp_path):
    gamma = epr_medium(1, 1.0)
    loaded = file_service.load_cov_matrix(_write(tmp_path / "cm.json", file_service.cov_matrix_to_dict(gamma)))
    assert np.abs(loaded.matrix - gamma.matrix).max() < 1e-12
    assert loaded.sides == ("A", "B")

    squeezed = {"modes": 2, "layout": "qqpp-ABinterleaved", "matrix": (0.5 * np.eye(4)).tolist()}
    with pytest.raises(ResourceFileError, match="physical"):
        file_service.load_cov_matrix(_write(tmp_path / "unphysical.json", squeezed))

    skewed = np.eye(4)
    skewed[0, 1] = 0.3
    with pytest.raises(ResourceFileError, match="symmetric"):
        file_service.load_cov_matrix(_write(tmp_path / "skewed.json", {**squeezed, "matrix": skewed.tolist()}))

    with pytest.raises(ResourceFileError):
        file_service.load_cov_matrix(_write(tmp_path / "odd.json", {**squeezed, "modes": 3}))

    with pytest.raises(ResourceFileError):
        file_service.load_cov_matrix(_write(tmp_path / "layout.json", {**squeezed, "layout": "qpqp"}))


def test_dumps_is_stable(tmp_path, capsys):
    probs = ProbDist(1, np.array([0.25, 0.25, 0.25, 0.25]))
    data = file_service.channel_to_dict(PauliChannel(1, probs))
    text = file_service.dumps(data)
    assert text == file_service.dumps(json.loads(text))
    assert text.endswith("\n")

    file_service.write_text(text)
    assert capsys.readouterr().out == text
    file_service.write_text(text, tmp_path / "out.json")
    assert (tmp_path / "out.json").read_text(encoding="utf-8") == text

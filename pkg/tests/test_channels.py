import numpy as np
import pytest

from exceptions import DimensionMismatchError, InvariantViolationError
from pauli.algebra import PauliString, bell_basis
from pauli.channels import (
    PauliChannel,
    apply_channel,
    channel_entropy,
    channel_from_resource,
    cj_state,
    coherent_info,
    compose,
    compose_via_resource,
    correlator_oracle,
    degradability_gap,
    entanglement_fidelity,
    identity_channel,
    probs_from_correlators,
    unitary_rep_apply,
    weak_complementary,
)
from pauli.resources import DenseResource, ProbDist, bell_diagonal_matrix, bell_twirl, fully_mixed, to_dense
from pauli.sampling import random_pauli_channel


def test_channel_from_resource_examples():
    assert entanglement_fidelity(channel_from_resource(fully_mixed(1))) == 0.25
    assert abs(channel_entropy(channel_from_resource(fully_mixed(2))) - 4.0) < 1e-12
    assert entanglement_fidelity(identity_channel(3)) == 1.0


def test_channel_is_unital_and_trace_preserving(rng, random_state):
    for n in (1, 2, 3):
        channel = random_pauli_channel(n, rng)
        identity = np.eye(2 ** n)
        assert np.abs(apply_channel(channel, identity) - identity).max() < 1e-12
        out = apply_channel(channel, random_state(n))
        assert abs(np.trace(out) - 1.0) < 1e-12
        assert np.linalg.eigvalsh(out).min() > -1e-12


def test_apply_channel_dimension_check():
    with pytest.raises(DimensionMismatchError):
        apply_channel(identity_channel(2), np.eye(2))


def test_unitary_representation_matches_pauli_channel(random_media, random_state):
    for chi in random_media:
        rho = random_state(chi.n)
        expected = apply_channel(channel_from_resource(chi), rho)
        assert np.abs(unitary_rep_apply(rho, chi) - expected).max() < 1e-10


def test_weak_complementary_bell_diagonal_medium(random_media, random_state):
    for chi in random_media:
        twirled = to_dense(bell_twirl(chi))
        first = weak_complementary(random_state(chi.n), twirled)
        second = weak_complementary(random_state(chi.n), twirled)
        assert np.abs(first - twirled.matrix).max() < 1e-10
        assert np.abs(first - second).max() < 1e-10


def test_weak_complementary_general_medium(random_media, random_state):
    for chi in random_media:
        n = chi.n
        probs = channel_from_resource(chi).probs.dense_values()
        mixed_out = weak_complementary(np.eye(2 ** n) / 2 ** n, chi)
        assert np.abs(mixed_out - bell_diagonal_matrix(ProbDist(n, probs))).max() < 1e-10

        basis = bell_basis(n)
        out = weak_complementary(random_state(n), chi)
        diagonal = np.einsum("ik,ij,jk->k", basis.conj(), out, basis).real
        assert np.abs(diagonal - probs).max() < 1e-10


def test_degradability_gap_vanishes(rng, random_state):
    for n in (1, 2):
        channel = random_pauli_channel(n, rng)
        assert degradability_gap(channel, random_state(n)) < 1e-10


def test_compose_commutes_and_matches_sequential(rng, random_state):
    for n in (1, 2):
        for _ in range(5):
            first, second = random_pauli_channel(n, rng), random_pauli_channel(n, rng)
            forward = compose(first, second).probs.dense_values()
            backward = compose(second, first).probs.dense_values()
            assert np.abs(forward - backward).max() < 1e-10

            rho = random_state(n)
            sequential = apply_channel(first, apply_channel(second, rho))
            assert np.abs(apply_channel(compose(first, second), rho) - sequential).max() < 1e-10

            via_resource = compose_via_resource(first, cj_state(second)).probs.dense_values()
            assert np.abs(via_resource - forward).max() < 1e-10


def test_compose_zsector_fast_path(rng):
    from pauli.resources import phase_gate_chain_probs

    n = 3
    a = PauliChannel(n, phase_gate_chain_probs(n, 0.3 * np.pi))
    b = PauliChannel(n, phase_gate_chain_probs(n, 0.7 * np.pi))
    fast = compose(a, b)
    assert fast.probs.storage == "zsector"
    slow = compose(PauliChannel(n, a.probs.to_dense()), PauliChannel(n, b.probs.to_dense()))
    assert np.abs(fast.probs.dense_values() - slow.probs.dense_values()).max() < 1e-12


def test_cj_state_two_paths(rng):
    for n in (1, 2, 3):
        channel = random_pauli_channel(n, rng)
        literal = cj_state(channel).matrix
        reconstructed = bell_diagonal_matrix(cj_state(channel, dense=False).probs)
        assert np.abs(literal - reconstructed).max() < 1e-10


def test_probs_from_correlators(random_media):
    for chi in random_media:
        via_correlators = probs_from_correlators(correlator_oracle(chi), chi.n).dense_values()
        direct = channel_from_resource(chi).probs.dense_values()
        assert np.abs(via_correlators - direct).max() < 1e-10


def test_probs_from_correlators_rejects_bad_oracle():
    with pytest.raises(InvariantViolationError):
        probs_from_correlators(lambda a, b: 0.5, 1)


def test_coherent_info_at_maximally_mixed_input(rng):
    assert abs(coherent_info(identity_channel(1), np.eye(2) / 2) - 1.0) < 1e-10
    assert abs(coherent_info(channel_from_resource(fully_mixed(1)), np.eye(2) / 2) + 1.0) < 1e-10
    for n in (1, 2):
        channel = random_pauli_channel(n, rng)
        value = coherent_info(channel, np.eye(2 ** n) / 2 ** n)
        assert abs(value - (n - channel_entropy(channel))) < 1e-10


def test_pauli_channel_validation():
    with pytest.raises(InvariantViolationError):
        PauliChannel(2, ProbDist(1, np.full(4, 0.25)))
    word = PauliString((1, 3))
    channel = PauliChannel(2, ProbDist(2, np.array([1.0]), storage="sparse", indices=np.array([word.index])))
    rho = np.zeros((4, 4))
    rho[0, 0] = 1.0
    out = apply_channel(channel, rho)
    assert out[2, 2] == 1.0
    assert DenseResource(1, np.eye(4) / 4).n == 1


def test_cj_state_overlap_is_entanglement_fidelity(rng):
    for n in (1, 2, 3):
        channel = random_pauli_channel(n, rng)
        psi0 = bell_basis(n)[:, 0]
        overlap = (psi0.conj() @ cj_state(channel).matrix @ psi0).real
        assert abs(overlap - entanglement_fidelity(channel)) < 1e-12

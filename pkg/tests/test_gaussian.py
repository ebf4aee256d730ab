import numpy as np
import pytest
from scipy.integrate import trapezoid
from scipy.linalg import expm

from exceptions import DegenerateResourceError, DimensionMismatchError, DomainError, InvariantViolationError
from gaussian.covariance import (
    CovMatrix,
    GaussianNoiseChannel,
    check_physical,
    cv_apply,
    cv_capacity_upper,
    cv_cj_cm,
    direct_sum,
    epr_cm,
    epr_medium,
    f_density,
    log_negativity,
    noise_covariance,
    partial_transpose_cm,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_medium,
)

LOG2E = np.log2(np.e)


def test_epr_cm_basics():
    assert np.array_equal(epr_cm(0.0).matrix, np.eye(4))
    gamma = epr_cm(1.0, 1.0)
    assert np.abs(symplectic_eigenvalues(gamma) - 1.0).max() < 1e-10
    for r, nu in [(0.3, 1.0), (1.5, 2.0)]:
        assert abs(np.trace(epr_cm(r, nu).matrix) - 4 * nu * np.cosh(2 * r)) < 1e-9
    with pytest.raises(DomainError):
        epr_cm(-0.1)
    with pytest.raises(DomainError):
        epr_cm(1.0, 0.5)


@pytest.mark.parametrize("r", [0.0, 0.5, 2.0, 5.0, 10.0])
@pytest.mark.parametrize("nu", [1.0, 2.0, 10.0])
def test_epr_is_physical(r, nu):
    assert epr_cm(r, nu).is_physical()


def test_unphysical_matrices_are_rejected():
    assert not CovMatrix(0.5 * np.eye(2)).is_physical()
    with pytest.raises(InvariantViolationError):
        check_physical(CovMatrix(0.5 * np.eye(2)))
    with pytest.raises(InvariantViolationError):
        CovMatrix(np.array([[1.0, 0.2], [0.0, 1.0]]))
    with pytest.raises(DimensionMismatchError):
        CovMatrix(np.eye(3))
    with pytest.raises(DimensionMismatchError):
        CovMatrix(np.eye(4), ("A",))
    with pytest.raises(InvariantViolationError):
        GaussianNoiseChannel(1, -np.eye(2))


def test_symplectic_spectra():
    assert np.abs(symplectic_eigenvalues(CovMatrix(np.eye(6))) - 1.0).max() < 1e-12
    assert np.abs(symplectic_eigenvalues(thermal_medium(1, 3.0)) - 3.0).max() < 1e-12
    assert np.abs(symplectic_eigenvalues(epr_cm(0.7, 2.5)) - 2.5).max() < 1e-9


def test_symplectic_spectrum_is_invariant(rng):
    h = rng.normal(size=(4, 4))
    s = expm(symplectic_form(2) @ (0.3 * (h + h.T)))
    assert np.abs(s @ symplectic_form(2) @ s.T - symplectic_form(2)).max() < 1e-10

    gamma = epr_cm(0.5, 1.5)
    moved = CovMatrix(s @ gamma.matrix @ s.T, gamma.sides)
    assert np.abs(symplectic_eigenvalues(moved) - symplectic_eigenvalues(gamma)).max() < 1e-8


def test_partial_transpose():
    gamma = epr_cm(0.8)
    twice = partial_transpose_cm(partial_transpose_cm(gamma))
    assert np.array_equal(twice.matrix, gamma.matrix)
    with pytest.raises(DomainError):
        partial_transpose_cm(CovMatrix(np.eye(4)))


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_two_mode_squeezed_vacuum_negativity(r):
    gamma = epr_cm(r)
    spectrum = symplectic_eigenvalues(partial_transpose_cm(gamma, "B"))
    assert np.abs(spectrum - [np.exp(-2 * r), np.exp(2 * r)]).max() < 1e-8
    assert abs(log_negativity(gamma) - 2 * r * LOG2E) < 1e-6
    assert abs(log_negativity(gamma, "A") - 2 * r * LOG2E) < 1e-6


def test_separable_states_have_zero_negativity():
    assert log_negativity(thermal_medium(2, 1.5)) == 0.0
    product = direct_sum([CovMatrix(np.diag([0.5, 2.0]), ("A",)), CovMatrix(np.diag([3.0, 3.0]), ("B",))])
    assert product.sides == ("A", "B")
    spectrum = symplectic_eigenvalues(product)
    assert np.abs(symplectic_eigenvalues(partial_transpose_cm(product)) - spectrum).max() < 1e-12
    assert log_negativity(product) < 1e-12


def test_log_negativity_grows_with_squeezing():
    values = [log_negativity(epr_cm(r)) for r in (0.1, 0.4, 0.9, 1.6)]
    assert all(later > earlier for earlier, later in zip(values, values[1:]))


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("r", [0.2, 1.0, 3.0])
def test_noise_covariance_epr_closed_form(n, r):
    noise = noise_covariance(epr_medium(n, r), r).noise_cov
    assert np.abs(noise - 2.0 / np.cosh(2 * r) * np.eye(2 * n)).max() < 1e-9


def test_noise_covariance_shrinks_with_squeezing():
    norms = [np.linalg.norm(noise_covariance(epr_medium(1, r), r).noise_cov) for r in (1.0, 2.0, 4.0, 8.0)]
    assert all(later < earlier for earlier, later in zip(norms, norms[1:]))
    assert norms[-1] < 1e-3 * norms[0]


def test_noise_covariance_product_media():
    vacuum = noise_covariance(thermal_medium(1, 1.0), 4.0).noise_cov
    assert np.abs(vacuum - 2.0 * np.eye(2)).max() < 1e-9
    thermal = noise_covariance(thermal_medium(1, 2.0), 4.0).noise_cov
    assert np.all(np.diag(thermal) > 2.0)
    with pytest.raises(DimensionMismatchError):
        noise_covariance(CovMatrix(np.eye(6), ("A", "B", "A")), 1.0)


def test_noise_covariance_degenerate():
    cancelling = CovMatrix(-epr_cm(1.0).matrix, ("A", "B"))
    with pytest.raises(DegenerateResourceError):
        noise_covariance(cancelling, 1.0)


def test_f_density():
    channel = noise_covariance(epr_medium(1, 1.0), 1.0)
    noise = channel.noise_cov
    peak = f_density(np.zeros(2), channel)
    assert abs(peak - (2 * np.pi) ** -1 / np.sqrt(np.linalg.det(noise))) < 1e-12
    z = np.array([0.3, -0.2])
    assert abs(f_density(z, channel) - f_density(-z, channel)) < 1e-14

    sigma = np.sqrt(noise.diagonal().max())
    axis = np.linspace(-8 * sigma, 8 * sigma, 401)
    grid = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1)
    total = trapezoid(trapezoid(f_density(grid, channel), axis), axis)
    assert abs(total - 1.0) < 1e-3

    with pytest.raises(DimensionMismatchError):
        f_density(np.zeros(3), channel)
    with pytest.raises(DegenerateResourceError):
        f_density(np.zeros(2), GaussianNoiseChannel(1, np.zeros((2, 2))))


def test_cv_apply():
    gamma = CovMatrix(np.eye(2))
    assert np.array_equal(cv_apply(GaussianNoiseChannel(1, np.zeros((2, 2))), gamma).matrix, gamma.matrix)
    assert np.array_equal(cv_apply(GaussianNoiseChannel(1, 2 * np.eye(2)), gamma).matrix, 3 * np.eye(2))
    with pytest.raises(DimensionMismatchError):
        cv_apply(GaussianNoiseChannel(1, np.eye(2)), CovMatrix(np.eye(4)))


def test_cv_cj_cm():
    noiseless = cv_cj_cm(GaussianNoiseChannel(2, np.zeros((4, 4))), 1.5)
    assert np.array_equal(noiseless.matrix, epr_medium(2, 1.5).matrix)
    assert noiseless.sides == ("A", "B", "A", "B")

    breaking = GaussianNoiseChannel(1, 2 * np.eye(2))
    for r in (0.5, 2.0, 4.0):
        cj = cv_cj_cm(breaking, r)
        assert cj.is_physical()
        assert log_negativity(cj) < 1e-8

    mild = GaussianNoiseChannel(1, 0.5 * np.eye(2))
    values = [log_negativity(cv_cj_cm(mild, r)) for r in (0.5, 1.0, 2.0, 4.0)]
    assert all(later > earlier for earlier, later in zip(values, values[1:]))


def test_cv_capacity_upper_epr_medium():
    report = cv_capacity_upper(epr_medium(1, 4.0), 1, 4.0, 4.0)
    assert 9.5 < report.bound <= 2 * 4.0 * LOG2E
    assert report.convergence_gap is not None
    data = report.to_dict()
    assert data["bound_per_mode"] == report.bound
    assert len(data["pt_symplectic_spectrum"]) == 2

    bounds = [cv_capacity_upper(epr_medium(1, r), 1, 4.0, 4.0).bound for r in (4.0, 3.0, 2.0, 1.0)]
    assert all(later < earlier for earlier, later in zip(bounds, bounds[1:]))


def test_cv_capacity_upper_product_media():
    perfect = cv_capacity_upper(epr_medium(1, 4.0), 1, 4.0, 4.0).bound
    vacuum = cv_capacity_upper(thermal_medium(1, 1.0), 1, 4.0, 4.0).bound
    assert 0.0 <= vacuum <= perfect
    assert cv_capacity_upper(thermal_medium(1, 2.0), 1, 4.0, 4.0, check_convergence=False).bound == 0.0
    with pytest.raises(DimensionMismatchError):
        cv_capacity_upper(epr_medium(1, 1.0), 2, 1.0, 1.0)


def test_cv_capacity_upper_two_modes():
    single = cv_capacity_upper(epr_medium(1, 2.0), 1, 3.0, 3.0, check_convergence=False).bound
    double = cv_capacity_upper(epr_medium(2, 2.0), 2, 3.0, 3.0, check_convergence=False).bound
    assert abs(single - double) < 1e-6


@pytest.mark.parametrize("r", [4.0, 5.0, 6.0, 7.0, 8.0])
def test_log_negativity_at_strong_squeezing(r):
    expected = 2 * r * LOG2E
    assert abs(log_negativity(epr_cm(r)) - expected) < 1e-2 * expected


@pytest.mark.parametrize("r", [9.0, 10.0])
def test_log_negativity_beyond_double_precision(r, caplog):
    # cosh(2r)*eps exceeds exp(-2r): the matrix entries no longer resolve the small eigenvalue
    value = log_negativity(epr_cm(r))
    assert np.isfinite(value)
    assert 0.0 < value <= 2 * r * LOG2E
    assert "double-precision resolution" in caplog.text


def _pure_epr_bound(r):
    """Граница при r_src = r_probe = r_medium = r: N = 2/cosh(2r), ν̃_- = 6/(2c + N + √(N² + 4s²))"""
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    noise = 2.0 / c
    return -np.log2(6.0 / (2 * c + noise + np.sqrt(noise ** 2 + 4 * s ** 2)))


@pytest.mark.parametrize("r", [2.0, 4.0, 6.0, 8.0])
def test_cv_capacity_upper_closed_form(r):
    report = cv_capacity_upper(epr_medium(1, r), 1, r, r)
    assert abs(report.bound - _pure_epr_bound(r)) < 0.1
    assert np.isfinite(report.convergence_gap)


def test_noise_covariance_at_strong_squeezing():
    for r in (9.0, 10.0):
        noise = noise_covariance(epr_medium(1, r), r).noise_cov
        assert np.all(np.isfinite(noise))
        assert np.linalg.eigvalsh(noise).min() > -1e-12
        assert np.abs(noise).max() < 1e-5
    assert np.isfinite(cv_capacity_upper(epr_medium(1, 10.0), 1, 10.0, 10.0).bound)


def test_f_density_threshold_is_relative():
    r = 9.0
    channel = GaussianNoiseChannel(1, 2.0 / np.cosh(2 * r) * np.eye(2))
    peak = f_density(np.zeros(2), channel)
    assert abs(peak / ((2 * np.pi) ** -1 / np.linalg.det(channel.noise_cov) ** 0.5) - 1.0) < 1e-10
    with pytest.raises(DegenerateResourceError):
        f_density(np.zeros(2), GaussianNoiseChannel(1, np.diag([1.0, 0.0])))

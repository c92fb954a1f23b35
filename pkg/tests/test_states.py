import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbaker import _backend
from qbaker.errors import DimensionMismatchError, InvalidInputError, InvalidParameterError
from qbaker.operators import ModMultSpec, generalized_dft, tilde_baker
from qbaker.states import (
    distance_up_to_phase,
    husimi,
    momentum_representation,
    periodization_cutoff,
    torus_coherent_state,
)


def circular_gap(a, b):
    d = abs(a - b) % 1.0
    return min(d, 1 - d)


def test_real_centered_state_is_symmetric():
    psi = torus_coherent_state(0.5, 0.0, 1.0, 50)
    phase = psi[25] / abs(psi[25])
    real = psi / phase
    assert np.abs(real.imag).max() < 1e-12 and real.real.min() > 0
    assert np.argmax(np.abs(psi)) == 25
    for j in range(1, 25):
        assert abs(abs(psi[25 - j]) - abs(psi[25 + j])) < 1e-12


def test_tail_bound():
    psi = torus_coherent_state(0.5, 0.5, 1.0, 150)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    x = np.arange(150) / 150
    assert np.abs(psi[np.abs(x - 0.5) > 0.25]).max() < 1e-10


def test_self_overlap():
    psi = torus_coherent_state(0.1, 0.3, 2.0, 64)
    assert abs(np.vdot(psi, psi)) == pytest.approx(1.0, abs=1e-12)


def test_state_matches_explicit_gaussian_sum():
    x0, p0, sigma, D = 0.27, 0.61, 1.3, 40
    m = np.arange(D)
    amp = np.zeros(D, dtype=complex)
    for v in range(-6, 7):
        y = m / D + v
        amp += np.exp(2j * np.pi * D * p0 * y) * np.exp(-sigma * D * np.pi * (y - x0) ** 2)
    amp *= np.exp(-1j * np.pi * D * x0 * p0)
    amp /= np.linalg.norm(amp)
    np.testing.assert_allclose(torus_coherent_state(x0, p0, sigma, D), amp, atol=1e-12)


@pytest.mark.parametrize("sigma", [0.0, -1.0, float("nan")])
def test_rejects_nonpositive_sigma(sigma):
    with pytest.raises(InvalidParameterError):
        torus_coherent_state(0.5, 0.5, sigma, 10)


def test_rejects_too_small_sigma_times_dimension():
    with pytest.raises(InvalidParameterError):
        torus_coherent_state(0.5, 0.5, 0.05, 10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 0.999), st.floats(0, 0.999), st.floats(0.5, 3.0), st.integers(8, 120))
def test_cutoff_is_self_certifying(x0, p0, sigma, D):
    if sigma * D < 1:
        return
    V = periodization_cutoff(sigma, D)
    a = torus_coherent_state(x0, p0, sigma, D, cutoff=V)
    b = torus_coherent_state(x0, p0, sigma, D, cutoff=V + 1)
    assert np.abs(a - b).max() < 1e-14


@pytest.mark.parametrize("D", [50, 100, 400])
def test_localization_window(D):
    x0 = 0.9
    psi = torus_coherent_state(x0, 0.2, 1.0, D)
    far = np.array([circular_gap(m / D, x0) > 5 / np.sqrt(D) for m in range(D)])
    assert np.sum(np.abs(psi[far]) ** 2) < 1e-10


def test_nearby_centre_distance_below_threshold():
    """Shift (1/D, 1/D) at D = 400, sigma = 1 is required to stay below 0.1.

    The overlap of the two packets is exp(-pi/D), so the distance is 0.1251;
    see test_nearby_centre_distance_closed_form.
    """
    D = 400
    base = torus_coherent_state(0.4, 0.6, 1.0, D)
    distance = distance_up_to_phase(base, torus_coherent_state(0.4 + 1 / D, 0.6 + 1 / D, 1.0, D))
    assert distance < 0.1


@pytest.mark.parametrize("D,sigma", [(400, 1.0), (400, 2.0), (150, 0.5)])
def test_nearby_centre_distance_closed_form(D, sigma):
    """|<z|z + (eta, eps)>| = exp(-pi D (sigma eta^2 + eps^2 / sigma) / 2) for well-localized packets."""
    eta = eps = 1 / D
    base = torus_coherent_state(0.4, 0.6, sigma, D)
    shifted = torus_coherent_state(0.4 + eta, 0.6 + eps, sigma, D)
    overlap = np.exp(-np.pi * D * (sigma * eta**2 + eps**2 / sigma) / 2)
    assert distance_up_to_phase(base, shifted) == pytest.approx(np.sqrt(2 - 2 * overlap), rel=1e-9)


def test_distance_grows_with_centre_shift():
    D = 400
    base = torus_coherent_state(0.4, 0.6, 1.0, D)
    shifts = np.geomspace(1 / D, 1 / np.sqrt(D), 5)
    dist = [distance_up_to_phase(base, torus_coherent_state(0.4 + s, 0.6 + s, 1.0, D)) for s in shifts]
    assert all(b > a for a, b in zip(dist, dist[1:]))


def test_distance_examples():
    psi = torus_coherent_state(0.2, 0.7, 1.0, 30)
    assert distance_up_to_phase(psi, psi) < 1e-12
    assert distance_up_to_phase(psi, np.exp(1j * np.pi / 3) * psi) < 1e-12
    e0, e1 = np.eye(2)
    assert distance_up_to_phase(e0, e1) == pytest.approx(np.sqrt(2))


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * np.pi))
def test_distance_phase_invariance(theta):
    psi = torus_coherent_state(0.3, 0.3, 1.0, 32)
    assert distance_up_to_phase(psi, np.exp(1j * theta) * psi) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_distance_equals_closed_form(seed):
    rng = np.random.default_rng(seed)
    psi, phi = (v / np.linalg.norm(v) for v in rng.normal(size=(2, 12)) + 1j * rng.normal(size=(2, 12)))
    expected = np.sqrt(2 - 2 * abs(np.vdot(phi, psi)))
    assert distance_up_to_phase(psi, phi) == pytest.approx(expected, rel=1e-10)


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        distance_up_to_phase(np.ones(3) / np.sqrt(3), np.ones(4) / 2)


def test_momentum_examples():
    D = 16
    np.testing.assert_allclose(momentum_representation(np.ones(D) / np.sqrt(D)), np.eye(D)[0], atol=1e-15)
    np.testing.assert_allclose(np.abs(momentum_representation(np.eye(D)[0])), 1 / np.sqrt(D), atol=1e-15)


def test_momentum_matches_dft_matrix_and_preserves_norm():
    psi = torus_coherent_state(0.3, 0.7, 1.0, 45)
    phi = momentum_representation(psi)
    np.testing.assert_allclose(phi, generalized_dft(45) @ psi, atol=1e-13)
    assert np.linalg.norm(phi) == pytest.approx(1.0, abs=1e-12)


def test_momentum_orientation():
    """The plain DFT sends a packet at momentum p0 to index near D p0."""
    D, p0 = 100, 0.3
    peak = int(np.argmax(np.abs(momentum_representation(torus_coherent_state(0.5, p0, 1.0, D)))))
    assert circular_gap(peak / D, p0) <= 1 / D


def test_husimi_self_peak():
    grid = husimi(torus_coherent_state(0.5, 0.5, 1.0, 150), 150, 150)
    assert grid.peak() == (0.5, 0.5)
    assert grid.values.min() >= 0


def test_husimi_matches_explicit_overlaps():
    D = 24
    psi = torus_coherent_state(0.3, 0.8, 1.0, D)
    grid = husimi(psi, 6, 8)
    for i in range(6):
        for j in range(8):
            ref = abs(np.vdot(torus_coherent_state(i / 6, j / 8, 1.0, D), psi)) ** 2
            assert grid.values[i, j] == pytest.approx(ref, abs=1e-13)


def test_husimi_of_position_state_is_flat_in_momentum():
    grid = husimi(np.eye(50)[0], 50, 25)
    row = grid.values[0]
    assert np.ptp(row) < 1e-12 * row.max()
    assert np.argmax(grid.values[:, 0]) == 0


def test_husimi_of_evolved_state_lands_on_classical_image():
    psi = torus_coherent_state(0.5, 0.5, 1.0, 150)
    phi = tilde_baker(ModMultSpec(3, 50, "plus"), 1) @ psi
    x, p = husimi(phi, 150, 150).peak()
    assert np.hypot(circular_gap(x, 0.5), circular_gap(p, 1 / 6)) < 0.06


def test_husimi_unit_max():
    grid = husimi(torus_coherent_state(0.2, 0.2, 1.0, 20), 10, 10, normalization="unit-max")
    assert grid.values.max() == pytest.approx(1.0) and grid.normalization == "unit-max"


@pytest.mark.parametrize("nx,n_p,norm", [(1, 5, "raw"), (5, 1, "raw"), (5, 5, "peak")])
def test_husimi_rejects(nx, n_p, norm):
    with pytest.raises(InvalidInputError):
        husimi(np.ones(10) / np.sqrt(10), nx, n_p, normalization=norm)


@pytest.mark.skipif(_backend.compiled_husimi_kernel is None, reason="compiled kernel not built")
@pytest.mark.parametrize("threads", [1, 3])
def test_compiled_and_numpy_kernels_agree(threads):
    psi = torus_coherent_state(0.37, 0.81, 1.5, 60)
    a = _backend.compiled_husimi_kernel(psi, 31, 29, 1.5, 3, threads)
    b = _backend.python_husimi_kernel(psi, 31, 29, 1.5, 3, threads)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)


def test_husimi_thread_count_does_not_change_values():
    psi = torus_coherent_state(0.1, 0.6, 1.0, 40)
    np.testing.assert_allclose(husimi(psi, 20, 20, threads=1).values, husimi(psi, 20, 20, threads=4).values,
                               atol=1e-12)

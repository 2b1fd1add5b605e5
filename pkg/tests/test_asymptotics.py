import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgewalk.asymptotics import (
    AsymptoticParams,
    asymptotic_p_fixed_j,
    asymptotic_p_scaled,
    ballistic_front,
    front_margin,
    omega_minus,
    omega_plus,
    omega_plus_prime,
    omega_plus_second,
    scaled_envelope,
    stationary_points,
)
from edgewalk.spectral import cycle_eigenvalues

S2 = 1 / math.sqrt(2)
BALANCED = AsymptoticParams(S2, S2)


def params(mag, eta=0.0):
    return AsymptoticParams(mag, math.sqrt(1 - mag**2), eta)


def test_params_validation():
    with pytest.raises(ValueError):
        AsymptoticParams(1.0, 0.0)
    with pytest.raises(ValueError):
        AsymptoticParams(0.6, 0.6)
    p = AsymptoticParams.from_amplitudes(0.6 * cmath.exp(0.3j), 0.8j)
    assert p.eta == pytest.approx(0.3) and p.r_mag == pytest.approx(0.8)


def test_omega_exponentiates_to_eigenvalue():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        mag, eta, theta = rng.uniform(0.01, 0.99), rng.uniform(-math.pi, math.pi), rng.uniform(0, 2 * math.pi)
        p = params(mag, eta)
        lp, lm = cycle_eigenvalues(theta, mag * cmath.exp(1j * eta))
        assert abs(cmath.exp(1j * omega_plus(theta, p)) - lp) < 1e-12
        assert abs(cmath.exp(1j * omega_minus(theta, p)) - lm) < 1e-12


def test_omega_reference_values():
    assert omega_plus(0.0, BALANCED) == pytest.approx(math.pi / 4, abs=1e-15)
    assert omega_plus(0.0, BALANCED) == pytest.approx(BALANCED.mu, abs=1e-15)
    assert omega_plus(math.pi, BALANCED) == pytest.approx(math.pi - BALANCED.mu, abs=1e-15)
    p = params(0.6, 1.2)
    assert omega_plus_prime(1.2, p) == pytest.approx(0, abs=1e-15)
    assert omega_plus_second(1.2, p) == pytest.approx(0.6 / 0.8, abs=1e-14)


@pytest.mark.parametrize("mag,eta", [(S2, 0.0), (0.3, 1.0), (0.95, -2.0)])
def test_derivatives_match_finite_differences(mag, eta):
    p = params(mag, eta)
    theta = np.linspace(0, 2 * math.pi, 200)
    h = 1e-5
    fd1 = (omega_plus(theta + h, p) - omega_plus(theta - h, p)) / (2 * h)
    np.testing.assert_allclose(omega_plus_prime(theta, p), fd1, atol=1e-6)
    fd2 = (omega_plus_prime(theta + h, p) - omega_plus_prime(theta - h, p)) / (2 * h)
    np.testing.assert_allclose(omega_plus_second(theta, p), fd2, atol=1e-6)


def test_stationary_points_examples():
    p = params(0.6, 0.4)
    np.testing.assert_allclose(stationary_points(0.0, p), [0.4, 0.4 + math.pi], atol=1e-12)
    assert stationary_points(0.61, p) == []
    with pytest.raises(ValueError):
        stationary_points(-0.1, p)
    pts = stationary_points(1 / math.sqrt(3), BALANCED)
    assert len(pts) == 2
    for th in pts:
        assert abs(omega_plus_prime(th, BALANCED) + 1 / math.sqrt(3)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-math.pi, math.pi), st.floats(0, 0.999))
def test_stationary_residual(mag, eta, frac):
    p = params(mag, eta)
    alpha = frac * mag
    for th in stationary_points(alpha, p):
        assert 0 <= th < 2 * math.pi
        assert abs(omega_plus_prime(th, p) + alpha) < 1e-10


def test_gamma_reaches_quarter_turn_at_front():
    # the corrected form gives sin^2 gamma = 1 exactly at alpha = |t|, for any |t|
    for mag in (0.3, 0.6, 0.9):
        assert params(mag).gamma(mag) == pytest.approx(math.pi / 2, abs=1e-6)


def test_fixed_j_braces_average_to_one():
    p = params(0.6)
    for tau in (7, 100, 1001):
        mean = (asymptotic_p_fixed_j(0, tau, p) + asymptotic_p_fixed_j(1, tau, p)) / 2
        assert mean == pytest.approx(0.8 / (math.pi * tau * 0.6), rel=1e-12)


def test_fixed_j_window_average_and_scaling():
    window = [asymptotic_p_fixed_j(0, tau, BALANCED) for tau in range(990, 1011)]
    assert np.mean(window) == pytest.approx(1 / (1000 * math.pi), rel=0.01)
    assert np.mean(window) == pytest.approx(3.18e-4, abs=1e-6)
    doubled = [asymptotic_p_fixed_j(0, tau, BALANCED) for tau in range(1980, 2021)]
    assert np.mean(window) / np.mean(doubled) == pytest.approx(2, rel=0.02)
    with pytest.raises(ValueError):
        asymptotic_p_fixed_j(0, 0, BALANCED)


def test_scaled_reduces_to_fixed_at_zero():
    p = params(0.6)
    assert scaled_envelope(0.0, 500, p) == pytest.approx(0.8 / (math.pi * 500 * 0.6), rel=1e-14)
    assert p.nu(0.0) == pytest.approx(p.mu, abs=1e-15)
    assert p.gamma(0.0) == 0


def test_scaled_beyond_front_and_errors():
    res = asymptotic_p_scaled(0.9, 1000, BALANCED)
    assert res.p == 0 and res.super_polynomial_decay
    assert not asymptotic_p_scaled(0.5, 1000, BALANCED).super_polynomial_decay
    with pytest.raises(ValueError):
        asymptotic_p_scaled(-0.1, 1000, BALANCED)


def test_scaled_envelope_value():
    assert scaled_envelope(0.5, 1000, BALANCED) == pytest.approx(
        S2 / (math.pi * 1000 * 0.5 * 0.5), rel=1e-12
    )


def test_ballistic_front_examples():
    assert ballistic_front(1.0, 37) == 37
    assert ballistic_front(S2, 1000) == 708 + front_margin(1000)
    assert ballistic_front(S2, 50) == 36 + front_margin(50)
    assert ballistic_front(S2, 5) == 5  # capped by the light cone
    assert front_margin(1000, 1e-4) > front_margin(1000, 0.01)
    with pytest.raises(ValueError):
        ballistic_front(S2, 0)
    with pytest.raises(ValueError):
        ballistic_front(S2, 10, 1.5)

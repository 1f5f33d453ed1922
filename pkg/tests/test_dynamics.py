import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

import oracles
from anticross import (
    CoefficientBundle,
    DerivativeBundle,
    SuperpositionSpec,
    evolution_operator,
    evolve_superposition,
    hamiltonian_matrix,
    qfi_evolved,
    qfi_evolved_analytic,
    qfi_ground,
)
from anticross.dynamics import sinc
from anticross.hamiltonian import SIGMA_X, eigenvectors
from conftest import linear_model, zoo_models


def oracle_evolved_qfi(lam, spec, delta_fn=lambda l: 1.0, gamma_fn=lambda l: l):
    _, ref = oracles.evolved_state(0.0, delta_fn(lam), gamma_fn(lam), spec.theta, spec.phi, spec.time)
    return oracles.pure_state_qfi(
        lambda l: oracles.evolved_state(0.0, delta_fn(l), gamma_fn(l), spec.theta, spec.phi, spec.time, ref)[0], lam
    )


def test_unitarity_on_random_inputs():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        w, d, g = rng.uniform(-10, 10, 3)
        t = rng.uniform(0, 100)
        worst = max(worst, evolution_operator(CoefficientBundle(w, d, g), t).unitarity_error())
    assert worst < 1e-12


@settings(max_examples=50)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 20))
def test_closed_form_matches_expm(w, d, g, t):
    c = CoefficientBundle(w, d, g)
    assert np.allclose(evolution_operator(c, t).matrix, expm(-1j * hamiltonian_matrix(c) * t), atol=1e-11)


def test_evolution_operator_on_the_gamma_axis():
    u = evolution_operator(CoefficientBundle(0.0, 0.0, 1.0), math.pi / 2).matrix
    assert np.allclose(u, 1j * SIGMA_X, atol=1e-15)


def test_zero_time_is_identity():
    assert np.allclose(evolution_operator(CoefficientBundle(0.3, 1, 2), 0.0).matrix, np.eye(2))


def test_sinc_series_branch():
    assert sinc(0.0) == 1.0
    assert sinc(1e-5) == pytest.approx(math.sin(1e-5) / 1e-5, rel=1e-15)


def test_half_period_flips_the_relative_sign():
    c = CoefficientBundle(0.0, 1.0, 0.0)  # gap 2, so t = pi/2 gives relative phase pi
    s = evolve_superposition(c, SuperpositionSpec(math.pi / 2, 0.0, math.pi / 2))
    psi_m, psi_p = eigenvectors(c)
    target = (psi_m - psi_p) / math.sqrt(2)
    assert abs(np.vdot(target, s.vector)) == pytest.approx(1.0, abs=1e-14)


def test_evolved_vector_matches_propagator():
    c = CoefficientBundle(0.4, 0.8, -0.6)
    spec = SuperpositionSpec(1.1, 2.0, 3.7)
    psi_m, psi_p = eigenvectors(c)
    psi0 = math.cos(0.55) * psi_m + np.exp(2j) * math.sin(0.55) * psi_p
    assert np.allclose(evolve_superposition(c, spec).vector, evolution_operator(c, 3.7) @ psi0, atol=1e-13)


def test_spec_validation():
    with pytest.raises(ValueError):
        SuperpositionSpec(4.0)
    with pytest.raises(ValueError):
        SuperpositionSpec(1.0, 7.0)


# --------------------------------------------------------------- QFI of evolved states


def test_superposition_exceeds_ground_qfi():
    model = linear_model()
    spec = SuperpositionSpec(math.pi / 4, 0.0, 2.3)
    h0 = float(qfi_ground(model.coefficients(0.5), model.derivatives(0.5)))
    h = qfi_evolved(model, 0.5, spec)
    assert h0 == pytest.approx(0.64)
    assert h == pytest.approx(3.9872849486017863, rel=1e-6)
    assert h == pytest.approx(qfi_evolved_analytic(model.coefficients(0.5), model.derivatives(0.5), spec), rel=1e-7)


def test_imaginary_equal_superposition_at_time_zero_has_no_information():
    model = linear_model()
    assert qfi_evolved(model, 0.5, SuperpositionSpec(math.pi / 2, math.pi / 2, 0.0)) == pytest.approx(0.0, abs=1e-8)


@pytest.mark.parametrize(
    "spec",
    [
        SuperpositionSpec(0.0, 0.0, 0.0),
        SuperpositionSpec(0.0, 1.3, 7.0),
        SuperpositionSpec(math.pi, 0.4, 2.5),
        SuperpositionSpec(math.pi / 3, 0.0, 0.0),
        SuperpositionSpec(2.0, math.pi, 0.0),
    ],
)
def test_cases_that_keep_the_ground_qfi(spec):
    model = linear_model()
    for lam in (-1.2, 0.0, 0.5, 2.0):
        h0 = float(qfi_ground(model.coefficients(lam), model.derivatives(lam)))
        assert qfi_evolved(model, lam, spec) == pytest.approx(h0, rel=1e-6)
        assert qfi_evolved_analytic(model.coefficients(lam), model.derivatives(lam), spec) == pytest.approx(h0, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True), st.floats(0, 5))
def test_analytic_and_fidelity_match_state_oracle(lam, theta, phi, t):
    spec = SuperpositionSpec(theta, phi, t)
    model = linear_model()
    ref = oracle_evolved_qfi(lam, spec)
    analytic = qfi_evolved_analytic(model.coefficients(lam), model.derivatives(lam), spec)
    assert analytic == pytest.approx(ref, rel=1e-6, abs=1e-8)
    assert qfi_evolved(model, lam, spec) == pytest.approx(ref, rel=1e-5, abs=1e-7)


@pytest.mark.parametrize("model_idx", range(5))
def test_analytic_matches_fidelity_on_zoo(model_idx):
    model, (lo, hi) = zoo_models()[model_idx]
    rng = np.random.default_rng(model_idx)
    for _ in range(8):
        lam = float(rng.uniform(lo, hi))
        spec = SuperpositionSpec(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(0, 5)))
        a = qfi_evolved_analytic(model.coefficients(lam), model.derivatives(lam), spec)
        assert qfi_evolved(model, lam, spec) == pytest.approx(a, rel=1e-5, abs=1e-9)


def test_global_phase_convention_does_not_matter():
    model = linear_model()
    spec = SuperpositionSpec(1.0, 0.7, 1.9)
    plain = qfi_evolved(model, 0.3, spec)
    assert qfi_evolved(model, 0.3, spec, eigvec_phase=lambda x: 3 * x * x - 2 * x) == pytest.approx(plain, rel=1e-7)


def test_omega0_drops_out():
    spec = SuperpositionSpec(1.0, 0.7, 1.9)
    c, d = linear_model().coefficients(0.3), linear_model().derivatives(0.3)
    c2 = CoefficientBundle(4.0, c.delta, c.gamma)
    d2 = DerivativeBundle(2.5, d.d_delta, d.d_gamma)
    assert qfi_evolved_analytic(c2, d2, spec) == pytest.approx(qfi_evolved_analytic(c, d, spec), rel=1e-14)

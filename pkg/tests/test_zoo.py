import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from anticross import CoefficientBundle, DerivativeBundle, eigenvalues, function_model, qfi_fidelity_oracle, qfi_ground
from anticross.errors import ModelValidationWarning
from anticross.zoo import (
    PerturbationParams,
    RabiParams,
    ThreeLevelParams,
    perturbation_coefficients,
    perturbation_matrix,
    perturbation_model,
    perturbation_optimal_phi,
    perturbation_qfi_closed_form,
    perturbation_qfi_printed,
    rabi_coefficients,
    rabi_matrix,
    rabi_model,
    rabi_qfi_resonance,
    three_level_effective,
    three_level_hamiltonian,
    three_level_model,
    three_level_qfi_first_order,
)
from conftest import linear_model


def qfi(model, lam):
    return float(qfi_ground(model.coefficients(lam), model.derivatives(lam)))


# ------------------------------------------------------------------ perturbation


def explicit_perturbation(omega, d, e, phi, lam):
    v = np.array([-math.sin(phi), math.cos(phi)])
    return np.diag([omega, omega + d]) + lam * e * np.outer(v, v)


def test_perturbation_coefficients_at_lambda_two():
    c = perturbation_coefficients(PerturbationParams(0.0, 1.0, 1.0, math.pi / 4), 2.0)
    assert c.delta == pytest.approx(0.5, abs=1e-15)
    assert c.gamma == pytest.approx(-1.0, rel=1e-15)


@given(st.floats(-3, 3), st.floats(0.1, 3), st.floats(0.1, 3), st.floats(0, 1.57), st.floats(-5, 5))
def test_perturbation_coefficients_read_off_the_matrix(omega, d, e, phi, lam):
    p = PerturbationParams(omega, d, e, phi)
    m = explicit_perturbation(omega, d, e, phi, lam)
    c = perturbation_coefficients(p, lam)
    assert np.allclose(bare := np.array([[c.omega1, c.gamma], [c.gamma, c.omega2]]), m, atol=1e-12)
    assert np.allclose(perturbation_matrix(p, lam), bare, atol=1e-12)
    ev = np.linalg.eigvalsh(m)
    s = eigenvalues(c)
    assert (s.h_minus, s.h_plus) == pytest.approx(tuple(ev), abs=1e-12)


def test_perturbation_closed_form_at_quarter_pi():
    p = PerturbationParams(0.0, 1.0, 2.0, math.pi / 4)
    model = perturbation_model(p)
    for lam in np.linspace(-4, 4, 17):
        assert qfi(model, lam) == pytest.approx(perturbation_qfi_closed_form(p, lam), rel=1e-13)


def test_printed_closed_form_differs_from_the_matrix_model():
    p = PerturbationParams(0.0, 1.0, 1.0, math.pi / 4)
    model = perturbation_model(p)
    assert qfi(model, 0.0) == pytest.approx(perturbation_qfi_printed(p, 0.0))
    assert qfi(model, 1.0) == pytest.approx(0.25)
    assert perturbation_qfi_printed(p, 1.0) == pytest.approx(0.64)


def test_closed_form_refuses_other_angles():
    with pytest.raises(ValueError):
        perturbation_qfi_closed_form(PerturbationParams(phi=0.2), 0.0)


def test_unrotated_perturbation_carries_no_information():
    model = perturbation_model(PerturbationParams(0.0, 1.0, 1.0, 0.0), domain=(-0.9, 0.9))
    assert all(qfi(model, lam) == 0.0 for lam in np.linspace(-0.9, 0.9, 19))


def test_quarter_pi_maximises_at_zero_lambda():
    grid = np.arange(80) * math.pi / 160
    values = [qfi(perturbation_model(PerturbationParams(0.0, 1.0, 1.0, phi)), 0.0) for phi in grid]
    assert grid[int(np.argmax(values))] == pytest.approx(math.pi / 4)


@pytest.mark.parametrize("lam", [-1.5, -0.5, 0.5, 1.5])
def test_optimal_angle_moves_with_lambda(lam):
    p = PerturbationParams(0.0, 1.0, 1.0)
    grid = np.linspace(0, math.pi / 2, 20001)[:-1]
    values = [qfi(perturbation_model(PerturbationParams(0.0, 1.0, 1.0, phi)), lam) for phi in grid]
    best = grid[int(np.argmax(values))]
    assert perturbation_optimal_phi(p, lam) == pytest.approx(best, abs=1e-4)
    assert abs(best - math.pi / 4) > 0.05


def test_quarter_pi_qfi_is_even():
    model = perturbation_model(PerturbationParams(0.0, 1.0, 1.5, math.pi / 4))
    for lam in np.linspace(0.1, 4, 12):
        assert qfi(model, lam) == pytest.approx(qfi(model, -lam), rel=1e-14)


def test_minimum_gap_grows_with_angle():
    gaps = []
    for phi in np.linspace(0.05, math.pi / 4, 30):
        p = PerturbationParams(0.0, 1.0, 1.0, phi)
        res = minimize_scalar(lambda lam: eigenvalues(perturbation_coefficients(p, lam)).gap, bounds=(-5, 5), method="bounded", options={"xatol": 1e-10})
        gaps.append(res.fun)
        assert gaps[-1] == pytest.approx(math.sin(2 * phi), rel=1e-6)
    assert np.all(np.diff(gaps) > 0)


def test_perturbation_params_validation():
    for bad in [dict(delta_gap=0.0), dict(epsilon=-1.0), dict(phi=math.pi / 2)]:
        with pytest.raises(ValueError):
            PerturbationParams(**bad)


# ------------------------------------------------------------------ rabi


def test_rabi_coefficients_on_resonance():
    c = rabi_coefficients(RabiParams(1.0, 1.0, "paper"), 1.0)
    assert (c.omega0, c.delta, c.gamma) == pytest.approx((1.0, -1.0, -0.25))
    c = rabi_coefficients(RabiParams(1.0, 1.0, "matrix"), 1.0)
    assert (c.omega0, c.delta, c.gamma) == pytest.approx((1.0, 0.5, -0.25))


@given(st.floats(0.2, 3), st.floats(0.2, 3), st.floats(0, 5))
def test_matrix_convention_reproduces_the_rwa_matrix(w0, w, lam):
    p = RabiParams(w0, w, "matrix")
    c = rabi_coefficients(p, lam)
    assert np.allclose([[c.omega1, c.gamma], [c.gamma, c.omega2]], rabi_matrix(p, lam), atol=1e-12)


def test_resonant_qfi_closed_form():
    p = RabiParams(1.0, 1.0, "paper")
    model = rabi_model(p)
    assert qfi(model, 1.0) == pytest.approx(64 / 289, rel=1e-13)
    for lam in np.linspace(0.01, 3.9, 40):
        assert qfi(model, lam) == pytest.approx(rabi_qfi_resonance(p, lam), rel=1e-12)
    assert qfi_fidelity_oracle(model, 1.0) == pytest.approx(64 / 289, rel=1e-6)


def test_resonant_qfi_peak():
    model = rabi_model(RabiParams(1.0, 1.0, "paper"))
    grid = np.linspace(0.0, 4.0, 40001)[1:]
    values = [qfi(model, lam) for lam in grid[::10]]
    assert grid[::10][int(np.argmax(values))] == pytest.approx(32 / 17, abs=1e-3)


def test_rabi_at_zero_drive():
    p = RabiParams(1.0, 1.0, "paper")
    c = rabi_coefficients(p, 0.0)
    assert c.gamma == 0.0
    assert qfi(rabi_model(p), 0.0) == pytest.approx(1 / 64)
    with pytest.raises(ValueError):
        rabi_coefficients(p, -0.1)


def test_detuned_rabi_matches_oracle():
    model = rabi_model(RabiParams(1.0, 0.7, "paper"))
    for lam in (0.2, 1.0, 2.5):
        assert qfi_fidelity_oracle(model, lam) == pytest.approx(qfi(model, lam), rel=1e-6)


def test_vectorised_rabi_matches_scalar():
    p = RabiParams(1.3, 0.9, "paper")
    lams = np.linspace(0, 4, 9)
    vec = rabi_coefficients(p, lams)
    for i, lam in enumerate(lams):
        assert vec.gamma[i] == rabi_coefficients(p, float(lam)).gamma


def test_rabi_closed_form_guards():
    with pytest.raises(ValueError):
        rabi_qfi_resonance(RabiParams(1.0, 0.9), 1.0)
    with pytest.raises(ValueError):
        rabi_qfi_resonance(RabiParams(1.0, 1.0, "matrix"), 1.0)
    with pytest.raises(ValueError):
        RabiParams(1.0, 1.0, "other")


# ------------------------------------------------------------------ three-level


def test_effective_shift():
    base = linear_model()
    p = ThreeLevelParams(base, 0.1, 50.0)
    c0, c = base.evaluate(0.5), three_level_effective(p, 0.5)
    assert p.kappa == pytest.approx(2e-4)
    assert c.delta == c0.delta
    assert c.gamma == pytest.approx(c0.gamma + 2e-4)
    assert c.omega1 == pytest.approx(c0.omega1 + 2e-4)
    assert c.omega2 == pytest.approx(c0.omega2 + 2e-4)


def test_zero_coupling_is_the_base_model():
    base = linear_model()
    model = three_level_model(ThreeLevelParams(base, 0.0, 50.0))
    assert model.evaluate(0.3) == base.evaluate(0.3)


def test_regime_warning():
    base = linear_model()
    with pytest.warns(ModelValidationWarning):
        three_level_effective(ThreeLevelParams(base, 0.5, 50.0), 0.5)
    with pytest.warns(ModelValidationWarning):
        three_level_effective(ThreeLevelParams(base, 0.1, 5.0), 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        three_level_model(ThreeLevelParams(base, 0.5, 5.0)).evaluate(0.5)


def test_full_hamiltonian_layout():
    h = three_level_hamiltonian(ThreeLevelParams(linear_model(), 0.1, 50.0), 0.5)
    assert h.shape == (3, 3)
    assert np.allclose(h, h.T)
    assert h[2, 2] == 50.0 and h[0, 2] == 0.1


def shifted_qfi(c, d, kappa):
    return float(qfi_ground(CoefficientBundle(c.omega0 + kappa, c.delta, c.gamma + kappa), d))


def test_first_order_at_zero_kappa():
    base = linear_model()
    c, d = base.evaluate(0.5), base.derivatives(0.5)
    assert three_level_qfi_first_order(c, d, 0.0) == qfi_ground(c, d)


def test_qfi_change_is_linear_in_kappa():
    base = linear_model()
    c, d = base.evaluate(0.5), base.derivatives(0.5)
    h0 = shifted_qfi(c, d, 0.0)
    ratio = (shifted_qfi(c, d, 1e-3) - h0) / (shifted_qfi(c, d, 5e-4) - h0)
    assert ratio == pytest.approx(2.0, rel=0.05)


def test_first_order_residual_is_quadratic():
    base = linear_model()
    c, d = base.evaluate(0.5), base.derivatives(0.5)
    h = shifted_qfi(c, d, 1e-3)
    assert abs(three_level_qfi_first_order(c, d, 1e-3) - h) / h <= 10 * 1e-6


def negative_rate_model():
    # delta d_gamma - gamma d_delta = -1 < 0
    return function_model("falling", lambda l: 0.0, lambda l: 1.0, lambda l: -l, (-3, 3), lambda l: 0.0, lambda l: 0.0, lambda l: -1.0)


def residual(c, d, kappa, root):
    return abs(three_level_qfi_first_order(c, d, kappa, root) - shifted_qfi(c, d, kappa))


def test_signed_root_is_needed_when_the_rate_is_negative():
    m = negative_rate_model()
    c, d = m.evaluate(0.5), m.derivatives(0.5)
    signed = residual(c, d, 1e-3, "signed") / residual(c, d, 5e-4, "signed")
    unsigned = residual(c, d, 1e-3, "nonnegative") / residual(c, d, 5e-4, "nonnegative")
    assert signed == pytest.approx(4.0, rel=0.2)
    assert unsigned == pytest.approx(2.0, rel=0.1)


def test_roots_agree_when_the_rate_is_positive():
    base = linear_model()
    c, d = base.evaluate(0.5), base.derivatives(0.5)
    assert three_level_qfi_first_order(c, d, 1e-3, "signed") == three_level_qfi_first_order(c, d, 1e-3, "nonnegative")
    with pytest.raises(ValueError):
        three_level_qfi_first_order(c, d, 1e-3, "other")


@settings(max_examples=40)
@given(st.floats(0.2, 3), st.floats(-3, 3), st.floats(-2, 2), st.floats(-2, 2))
def test_first_order_expansion_generic(delta, gamma, dd, dg):
    c, d = CoefficientBundle(0.0, delta, gamma), DerivativeBundle(0.0, dd, dg)
    h0 = float(qfi_ground(c, d))
    if h0 < 1e-3:
        return
    k = 1e-5
    assert three_level_qfi_first_order(c, d, k) == pytest.approx(shifted_qfi(c, d, k), rel=1e-6, abs=1e-10)

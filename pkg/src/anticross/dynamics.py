"""
Unitary evolution under a time-independent two-level Hamiltonian and the QFI
of evolved superpositions of its eigenstates.

The evolved family psi(t; lambda) = U_t(lambda) psi(0; lambda) depends on
lambda through the eigenbasis *and* through the accumulated relative phase
2 E(lambda) t, so its QFI is in general not the ground-state value. It
coincides with it for eigenstates (theta = 0 or pi) at any t, and for real
superpositions (phi = 0 or pi) at t = 0; see :func:`qfi_evolved_analytic`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .hamiltonian import SIGMA_0, SIGMA_X, SIGMA_Z, CoefficientBundle, DerivativeBundle, TwoLevelModel, eigenvectors, mixing_angle
from .metrology import angle_rate, energy_rate, fidelity_qfi


@dataclass(frozen=True)
class QubitUnitary:
    matrix: np.ndarray

    def __matmul__(self, other):
        if isinstance(other, QubitUnitary):
            return QubitUnitary(self.matrix @ other.matrix)
        return self.matrix @ other

    def dagger(self) -> "QubitUnitary":
        return QubitUnitary(self.matrix.conj().T)

    def unitarity_error(self) -> float:
        return float(np.max(np.abs(self.matrix @ self.matrix.conj().T - SIGMA_0)))


@dataclass(frozen=True)
class SuperpositionSpec:
    """Initial state cos(theta/2) psi_- + exp(i phi) sin(theta/2) psi_+, evolved for ``time``."""

    theta: float
    phi: float = 0.0
    time: float = 0.0

    def __post_init__(self):
        if not 0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")


@dataclass(frozen=True)
class EvolvedState:
    amplitudes: np.ndarray  # (a_minus, a_plus) in the eigenbasis
    vector: np.ndarray  # state vector in the working frame
    bloch: np.ndarray


def sinc(z: float) -> float:
    """sin(z)/z, by its Taylor series for |z| < 1e-4."""
    if abs(z) < 1e-4:
        z2 = z * z
        return 1 - z2 / 6 + z2 * z2 / 120
    return math.sin(z) / z


def evolution_operator(c: CoefficientBundle, t: float) -> QubitUnitary:
    """U_t = exp(-i H t) in closed form.

    With H = omega0 + delta sz - gamma sx and E = sqrt(gamma^2 + delta^2):
    U_t = exp(-i omega0 t) [cos(E t) I - i t sinc(E t) (delta sz - gamma sx)].
    """
    e = math.hypot(c.gamma, c.delta)
    body = math.cos(e * t) * SIGMA_0 - 1j * t * sinc(e * t) * (c.delta * SIGMA_Z - c.gamma * SIGMA_X)
    return QubitUnitary(np.exp(-1j * c.omega0 * t) * body)


def _bloch(v: np.ndarray) -> np.ndarray:
    a, b = v
    return np.array([2 * (a.conjugate() * b).real, 2 * (a.conjugate() * b).imag, abs(a) ** 2 - abs(b) ** 2])


def initial_state(c: CoefficientBundle, spec: SuperpositionSpec, reference: Optional[float] = None) -> np.ndarray:
    psi_m, psi_p = eigenvectors(c, reference)
    return math.cos(spec.theta / 2) * psi_m + np.exp(1j * spec.phi) * math.sin(spec.theta / 2) * psi_p


def evolve_superposition(c: CoefficientBundle, spec: SuperpositionSpec) -> EvolvedState:
    e = math.hypot(c.gamma, c.delta)
    h_minus, h_plus = c.omega0 - e, c.omega0 + e
    amps = np.array(
        [
            math.cos(spec.theta / 2) * np.exp(-1j * h_minus * spec.time),
            np.exp(1j * spec.phi) * math.sin(spec.theta / 2) * np.exp(-1j * h_plus * spec.time),
        ]
    )
    psi_m, psi_p = eigenvectors(c)
    vec = amps[0] * psi_m + amps[1] * psi_p
    return EvolvedState(amps, vec, _bloch(vec))


def qfi_evolved(
    model: TwoLevelModel,
    lam: float,
    spec: SuperpositionSpec,
    dlambda: Optional[float] = None,
    eigvec_phase: Optional[Callable[[float], float]] = None,
) -> float:
    """QFI of U_t(lambda) psi_theta(0; lambda) by the fidelity method.

    Every stencil point rebuilds both the eigenbasis and the evolution
    operator at its own lambda. ``eigvec_phase`` multiplies both eigenvectors
    by exp(i * eigvec_phase(lambda)), a global-phase convention the result
    must not depend on.
    """
    if dlambda is None:
        dlambda = 1e-4 * max(1.0, abs(lam))
    model.check_domain([lam - dlambda, lam + dlambda])
    b0 = mixing_angle(model.evaluate(lam))

    def state(x):
        c = model.evaluate(x)
        psi0 = initial_state(c, spec, reference=b0)
        if eigvec_phase is not None:
            psi0 = psi0 * np.exp(1j * eigvec_phase(x))
        return evolution_operator(c, spec.time) @ psi0

    return fidelity_qfi(state, lam, dlambda)


def qfi_evolved_analytic(c: CoefficientBundle, d: DerivativeBundle, spec: SuperpositionSpec) -> float:
    """Closed-form QFI of the evolved superposition, 4 (<dpsi|dpsi> - |<psi|dpsi>|^2).

    In the half-angle gauge d psi_-/d lambda = (b'/2) psi_+ and
    d psi_+/d lambda = -(b'/2) psi_-, while the eigenphases exp(-+ i E t)
    contribute -+ i t E' per amplitude (the omega0 phase is global).
    """
    b1 = float(angle_rate(c, d))
    e1 = float(energy_rate(c, d))
    e = math.hypot(c.gamma, c.delta)
    t = spec.time
    a_m = math.cos(spec.theta / 2) * np.exp(1j * e * t)
    a_p = np.exp(1j * spec.phi) * math.sin(spec.theta / 2) * np.exp(-1j * e * t)
    da_m = 1j * t * e1 * a_m - 0.5 * b1 * a_p
    da_p = 0.5 * b1 * a_m - 1j * t * e1 * a_p
    norm = abs(da_m) ** 2 + abs(da_p) ** 2
    inner = a_m.conjugate() * da_m + a_p.conjugate() * da_p
    return float(4 * (norm - abs(inner) ** 2))

"""
Quantum and classical Fisher information for two-level Hamiltonians.

Everything here is expressed through the coefficient bundle (omega0, delta,
gamma) and its lambda-derivative. Two derived quantities recur:

* the mixing-angle rate  b' = (delta d_gamma - gamma d_delta) / E**2, whose
  square is the ground-state QFI, and
* the half-gap rate      E' = (gamma d_gamma + delta d_delta) / E,
  which drives the thermal populations.

The ground Bloch vector n = (gamma, 0, -delta) / E moves along the tangent
(delta, 0, gamma) / E at rate b'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateBundleError, DeterministicOutcomeError, ZeroInformationError
from .hamiltonian import (
    PAULIS,
    CoefficientBundle,
    DerivativeBundle,
    TwoLevelModel,
    _require_nondegenerate,
    ground_bloch_vector,
    hamiltonian_matrix,
)


@dataclass(frozen=True)
class PauliOperator:
    """Hermitian operator c0 I + c1 sx + c2 sy + c3 sz."""

    c0: float
    c1: float
    c2: float
    c3: float

    def matrix(self) -> np.ndarray:
        return sum(c * p for c, p in zip((self.c0, self.c1, self.c2, self.c3), PAULIS))

    def eigenvalues(self) -> tuple[float, float]:
        r = math.sqrt(self.c1**2 + self.c2**2 + self.c3**2)
        return self.c0 - r, self.c0 + r


@dataclass(frozen=True)
class MeasurementDirection:
    """Unit Bloch vector r of the projector (I + r.sigma) / 2; normalised on construction."""

    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        norm = math.sqrt(self.r1**2 + self.r2**2 + self.r3**2)
        if norm == 0:
            raise ValueError("measurement direction must be nonzero")
        for name in ("r1", "r2", "r3"):
            object.__setattr__(self, name, float(getattr(self, name)) / norm)

    @classmethod
    def from_angle(cls, theta: float) -> "MeasurementDirection":
        """sigma_theta = sin(theta) sx + cos(theta) sz."""
        return cls(math.sin(theta), 0.0, math.cos(theta))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3])


@dataclass(frozen=True)
class FisherBreakdown:
    H_total: float
    H_classical: float
    H_quantum: float
    k_C: float
    k_Q: float


def angle_rate(c: CoefficientBundle, d: DerivativeBundle):
    """Signed sqrt of the ground QFI: (delta d_gamma - gamma d_delta) / (gamma^2 + delta^2)."""
    return (c.delta * d.d_gamma - c.gamma * d.d_delta) / (c.gamma**2 + c.delta**2)


def energy_rate(c: CoefficientBundle, d: DerivativeBundle):
    """Derivative of the half gap E = sqrt(gamma^2 + delta^2)."""
    return (c.gamma * d.d_gamma + c.delta * d.d_delta) / c.energy


def ground_bloch_derivative(c: CoefficientBundle, d: DerivativeBundle) -> np.ndarray:
    e = c.energy
    return angle_rate(c, d) * np.array([c.delta / e, np.zeros_like(e), c.gamma / e])


def sld_ground(c: CoefficientBundle, d: DerivativeBundle) -> PauliOperator:
    """Symmetric logarithmic derivative of the ground state.

    For a pure state the SLD is dn.sigma; here that is
    b' (delta sx + gamma sz) / E, i.e. dx / (1 + x^2)^(3/2) (sx + x sz) when
    delta > 0. The expression stays finite at delta = 0.
    """
    _require_nondegenerate(c)
    dn = ground_bloch_derivative(c, d)
    return PauliOperator(0.0, float(dn[0]), 0.0, float(dn[2]))


def qfi_ground(c: CoefficientBundle, d: DerivativeBundle):
    """Zero-temperature QFI (delta d_gamma - gamma d_delta)^2 / (gamma^2 + delta^2)^2."""
    _require_nondegenerate(c)
    return angle_rate(c, d) ** 2


def _one_minus_abs_overlap(a: np.ndarray, b: np.ndarray) -> float:
    # |<a|b>|^2 + |det[a b]|^2 = 1 for unit 2-vectors; avoids cancellation in 1 - |<a|b>|
    ov = abs(np.vdot(a, b))
    det = abs(a[0] * b[1] - a[1] * b[0])
    return det**2 / (1 + ov)


def _aligned(v: np.ndarray, ref: np.ndarray) -> np.ndarray:
    ov = np.vdot(ref, v)
    return v if ov == 0 else v * (abs(ov) / ov)


def _eigh_states(model: TwoLevelModel, lam: float):
    c = model.evaluate(lam)
    if c.is_degenerate:
        raise DegenerateBundleError(f"{model.name}: level crossing at lambda = {lam}")
    # the working-frame matrix is real symmetric, so eigh returns real vectors
    _, v = np.linalg.eigh(hamiltonian_matrix(c).real)
    return v[:, 0], v[:, 1]


def _fidelity_estimate(state, lam, step):
    ref = state(lam)
    total = 0.0
    for sign in (1.0, -1.0):
        total += 8.0 * _one_minus_abs_overlap(ref, state(lam + sign * step)) / step**2
    return total / 2


def fidelity_qfi(state, lam: float, dlambda: float) -> float:
    """QFI of a pure-state family from 8 (1 - |<psi(l + dl)|psi(l)>|) / dl^2.

    ``state`` maps lambda to a normalised 2-vector. The estimate is symmetrised
    over +-dl; if the estimates at dl and dl/2 disagree by more than 1e-4
    relative, their Richardson combination is returned instead.
    """
    coarse = _fidelity_estimate(state, lam, dlambda)
    fine = _fidelity_estimate(state, lam, dlambda / 2)
    if abs(coarse - fine) <= 1e-4 * max(abs(fine), 1e-12):
        return coarse
    return (4 * fine - coarse) / 3


def qfi_fidelity_oracle(model: TwoLevelModel, lam: float, dlambda: Optional[float] = None, mix: float = 0.0) -> float:
    """Ground-state QFI from the fidelity, independent of :func:`qfi_ground`.

    Eigenvectors come from a numerical diagonalisation of the explicit 2x2
    matrix at each stencil point, with their signs fixed by parallel transport
    from lambda. ``mix`` replaces the ground state by
    cos(mix) psi_- + sin(mix) psi_+.
    """
    if dlambda is None:
        dlambda = 1e-4 * max(1.0, abs(lam))
    model.check_domain([lam - dlambda, lam + dlambda])
    g0, e0 = _eigh_states(model, lam)

    def state(x):
        g, e = _eigh_states(model, x)
        g, e = _aligned(g, g0), _aligned(e, e0)
        return math.cos(mix) * g + math.sin(mix) * e

    return fidelity_qfi(state, lam, dlambda)


def outcome_probability(c: CoefficientBundle, r: MeasurementDirection):
    """Probability of the outcome Pi = (I + r.sigma)/2 on the ground state."""
    _require_nondegenerate(c)
    n = ground_bloch_vector(c)
    return 0.5 * (1 + n[0] * r.r1 + n[1] * r.r2 + n[2] * r.r3)


def g_function(x: float, r: MeasurementDirection) -> float:
    """Efficiency F/H of the projective measurement along r, as a function of x = gamma/delta.

    Uses the unit-norm identity 1 + x^2 - (x r1 - r3)^2 = (r1 + x r3)^2 + (1 + x^2) r2^2,
    which keeps g <= 1 exactly in floating point. ``x = +-inf`` (delta = 0) is
    taken as the limit.
    """
    if abs(x) > 1:
        # divide through by x^2 so huge x neither overflows nor loses r1
        u = 0.0 if math.isinf(x) else 1 / x
        num = (u * r.r1 + r.r3) ** 2
        den = num + (u * u + 1) * r.r2**2
    else:
        num = (r.r1 + x * r.r3) ** 2
        den = num + (1 + x * x) * r.r2**2
    if den == 0:
        raise DeterministicOutcomeError(f"outcome is deterministic for x = {x}, r = {r}")
    return num / den


def _x_of(c: CoefficientBundle) -> float:
    if c.delta != 0:
        return c.gamma / c.delta
    return math.inf


def fisher_projective(c: CoefficientBundle, d: DerivativeBundle, r: MeasurementDirection) -> float:
    """Fisher information (dq)^2 / (q (1 - q)) of the ground state measured along r.

    Computed from dq directly and cross-checked against H * g.
    """
    _require_nondegenerate(c)
    n = ground_bloch_vector(c)
    dn = ground_bloch_derivative(c, d)
    rv = r.vector
    cross2 = float(np.sum(np.cross(n, rv) ** 2))  # 4 q (1 - q)
    if cross2 == 0:
        raise DeterministicOutcomeError(f"q is 0 or 1 for {c}, {r}")
    f = float(np.dot(dn, rv)) ** 2 / cross2
    if cross2 > 1e-8:
        hg = float(qfi_ground(c, d)) * g_function(_x_of(c), r)
        if abs(f - hg) > 1e-8 * max(abs(f), abs(hg), 1e-300) and abs(f - hg) > 1e-14:
            raise RuntimeError(f"internal inconsistency: direct F = {f!r}, H*g = {hg!r}")
    return f


def _sech2_tanh(beta, e):
    """(sech^2(beta E), tanh(beta E)) stable for large arguments; beta may be inf."""
    if math.isinf(beta):
        return 0.0, (1.0 if e > 0 else 0.0)
    z = beta * e
    u = math.exp(-2 * z)
    return 4 * u / (1 + u) ** 2, (1 - u) / (1 + u)


def thermal_qfi(c: CoefficientBundle, d: DerivativeBundle, beta: float) -> FisherBreakdown:
    """QFI of the Gibbs state, split into population (classical) and eigenvector (quantum) parts."""
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    _require_nondegenerate(c)
    e = float(c.energy)
    sech2, tanh = _sech2_tanh(beta, e)
    k_c = 0.0 if math.isinf(beta) else beta**2 * sech2
    k_q = tanh**2
    h_c = float(energy_rate(c, d)) ** 2 * k_c
    h_q = float(qfi_ground(c, d)) * k_q
    return FisherBreakdown(h_c + h_q, h_c, h_q, k_c, k_q)


def thermal_outcome_probability(c: CoefficientBundle, beta: float, r: MeasurementDirection) -> float:
    """q_beta = 1/2 + (q - 1/2) tanh(beta E)."""
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    q = outcome_probability(c, r)
    _, tanh = _sech2_tanh(beta, float(c.energy))
    return 0.5 + (q - 0.5) * tanh


def thermal_fisher(c: CoefficientBundle, d: DerivativeBundle, beta: float, r: MeasurementDirection) -> float:
    """Exact Fisher information of the thermal outcome distribution along r."""
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    _require_nondegenerate(c)
    e = float(c.energy)
    sech2, tanh = _sech2_tanh(beta, e)
    n = ground_bloch_vector(c)
    rv = r.vector
    nr = float(np.dot(n, rv))
    dnr = float(np.dot(ground_bloch_derivative(c, d), rv))
    dtanh = 0.0 if math.isinf(beta) else beta * sech2 * float(energy_rate(c, d))
    # 4 q_b (1 - q_b) = 1 - tanh^2 (n.r)^2 = sech^2 + tanh^2 |n x r|^2
    den = sech2 + tanh**2 * float(np.sum(np.cross(n, rv) ** 2))
    if den == 0:
        raise DeterministicOutcomeError(f"q_beta is 0 or 1 for {c}, beta = {beta}, {r}")
    return (dtanh * nr + tanh * dnr) ** 2 / den


def thermal_fisher_leading_coefficient(d: DerivativeBundle, r: MeasurementDirection) -> float:
    """lim F_beta / beta^2 as beta -> 0: (r1 d_gamma - r3 d_delta)^2."""
    return (r.r1 * d.d_gamma - r.r3 * d.d_delta) ** 2


def thermal_qfi_leading_coefficient(d: DerivativeBundle) -> float:
    """lim H_beta / beta^2 as beta -> 0: d_gamma^2 + d_delta^2."""
    return d.d_gamma**2 + d.d_delta**2


def optimal_direction_highT(d: DerivativeBundle) -> MeasurementDirection:
    """Direction maximising the small-beta Fisher coefficient, r ~ (d_gamma, 0, -d_delta).

    Along it F_beta / H_beta -> 1 as beta -> 0 for any model.
    """
    if d.d_gamma == 0 and d.d_delta == 0:
        raise ZeroInformationError("both d_gamma and d_delta vanish; no direction carries information")
    return MeasurementDirection(d.d_gamma, 0.0, -d.d_delta)


def ratio_directions(c: CoefficientBundle) -> tuple[MeasurementDirection, MeasurementDirection]:
    """Directions with r3/r1 = gamma/delta and r3/r1 = -delta/gamma (r2 = 0).

    Kept for comparison against :func:`optimal_direction_highT`; they are
    not high-temperature optimal in general.
    """
    _require_nondegenerate(c)
    return MeasurementDirection(c.delta, 0.0, c.gamma), MeasurementDirection(c.gamma, 0.0, -c.delta)

"""
Worked two-level models with analytic derivatives.

* perturbation: H = H0 + lambda H1 with a rotated rank-one perturbation,
* rabi: rotating-wave effective Hamiltonian of a driven two-level system,
* three-level: effective two-level reduction of a weakly coupled third level.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ModelValidationWarning, ZeroInformationError
from .hamiltonian import CoefficientBundle, DerivativeBundle, TwoLevelModel, _require_nondegenerate
from .metrology import angle_rate, qfi_ground

# --------------------------------------------------------------------------
# perturbation-induced anti-crossing


@dataclass(frozen=True)
class PerturbationParams:
    omega: float = 0.0
    delta_gap: float = 1.0
    epsilon: float = 1.0
    phi: float = math.pi / 4

    def __post_init__(self):
        if self.delta_gap <= 0 or self.epsilon <= 0:
            raise ValueError("delta_gap and epsilon must be positive")
        if not 0 <= self.phi < math.pi / 2:
            raise ValueError(f"phi must lie in [0, pi/2), got {self.phi}")


def perturbation_matrix(p: PerturbationParams, lam: float) -> np.ndarray:
    """H0 + lambda R diag(0, epsilon) R^T in the bare basis."""
    rot = np.array([[math.cos(p.phi), -math.sin(p.phi)], [math.sin(p.phi), math.cos(p.phi)]])
    h0 = np.diag([p.omega, p.omega + p.delta_gap])
    h1 = rot @ np.diag([0.0, p.epsilon]) @ rot.T
    return h0 + lam * h1


def perturbation_coefficients(p: PerturbationParams, lam) -> CoefficientBundle:
    c2, s2 = math.cos(2 * p.phi), math.sin(2 * p.phi)
    return CoefficientBundle(
        p.omega + 0.5 * (p.delta_gap + lam * p.epsilon),
        0.5 * (p.delta_gap + lam * p.epsilon * c2),
        -0.5 * lam * p.epsilon * s2,
    )


def perturbation_derivatives(p: PerturbationParams, lam=None) -> DerivativeBundle:
    return DerivativeBundle(0.5 * p.epsilon, 0.5 * p.epsilon * math.cos(2 * p.phi), -0.5 * p.epsilon * math.sin(2 * p.phi))


def perturbation_model(p: PerturbationParams, domain=(-5.0, 5.0)) -> TwoLevelModel:
    config = {"type": "perturbation", "params": {"omega": p.omega, "delta": p.delta_gap, "epsilon": p.epsilon, "phi": p.phi}, "domain": list(domain)}
    return TwoLevelModel(
        f"perturbation(delta={p.delta_gap:g}, epsilon={p.epsilon:g}, phi={p.phi:g})",
        lambda lam: perturbation_coefficients(p, lam),
        tuple(domain),
        lambda lam: perturbation_derivatives(p, lam),
        config,
    )


def perturbation_qfi_closed_form(p: PerturbationParams, lam):
    """(epsilon/delta)^2 / (1 + (epsilon lambda / delta)^2)^2, valid at phi = pi/4 only."""
    if abs(p.phi - math.pi / 4) > 1e-12:
        raise ValueError(f"closed form holds only at phi = pi/4, got phi = {p.phi}")
    ratio = p.epsilon / p.delta_gap
    return ratio**2 / (1 + (ratio * lam) ** 2) ** 2


def perturbation_qfi_printed(p: PerturbationParams, lam):
    """The alternative closed form 1 / (1 + y^2 lambda^2)^2 with y = epsilon / (2 delta).

    It does not follow from the matrix H0 + lambda H1 (except at
    delta = epsilon, lambda = 0); exposed only for side-by-side reporting.
    """
    y = p.epsilon / (2 * p.delta_gap)
    return 1 / (1 + (y * lam) ** 2) ** 2


def perturbation_optimal_phi(p: PerturbationParams, lam: float) -> float:
    """Rotation angle maximising the QFI at fixed lambda.

    QFI(phi) = d^2 e^2 sin^2(2 phi) / (d^2 + 2 d e lambda cos(2 phi) + e^2 lambda^2)^2
    peaks at cos(2 phi) = -2 d e lambda / (d^2 + e^2 lambda^2); this is
    pi/4 only at lambda = 0.
    """
    d, e = p.delta_gap, p.epsilon
    return 0.5 * math.acos(-2 * d * e * lam / (d * d + (e * lam) ** 2))


# --------------------------------------------------------------------------
# driven two-level system in the rotating-wave approximation


@dataclass(frozen=True)
class RabiParams:
    omega0: float = 1.0  # level splitting
    omega: float = 1.0  # drive frequency
    delta_convention: str = "paper"

    def __post_init__(self):
        if self.omega0 <= 0 or self.omega <= 0:
            raise ValueError("omega0 and omega must be positive")
        if self.delta_convention not in ("paper", "matrix"):
            raise ValueError(f"delta_convention must be 'paper' or 'matrix', got {self.delta_convention!r}")


def _rabi_parts(p: RabiParams, lam):
    """Omega, dOmega, gamma, dgamma; Omega = 0 (resonant, undriven) taken as its right limit."""
    lam = np.asarray(lam, dtype=float)
    det = p.omega0 - p.omega
    big = np.hypot(lam, det)
    safe = np.where(big > 0, big, 1.0)
    d_big = np.where(big > 0, lam / safe, 1.0)
    gamma = -0.25 * lam * (1 - det / safe)
    d_gamma = -0.25 * (1 - det / safe) - 0.25 * (lam / safe) * (det / safe) * d_big
    gamma = np.where(big > 0, gamma, 0.0)
    d_gamma = np.where(big > 0, d_gamma, -0.25)
    return big, d_big, gamma, d_gamma


def _scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def rabi_coefficients(p: RabiParams, lam) -> CoefficientBundle:
    """Effective coefficients: gamma = -(lambda / 4 Omega)(Omega - (omega0 - omega)).

    delta = Omega - 2 omega ("paper") or omega - Omega/2 ("matrix", i.e. half
    the diagonal splitting of the effective matrix); omega0 coefficient = omega.
    """
    if np.any(np.asarray(lam) < 0):
        raise ValueError("the drive amplitude lambda must be >= 0")
    big, _, gamma, _ = _rabi_parts(p, lam)
    delta = big - 2 * p.omega if p.delta_convention == "paper" else p.omega - 0.5 * big
    return CoefficientBundle(_scalar(np.full_like(big, p.omega)), _scalar(delta), _scalar(gamma))


def rabi_derivatives(p: RabiParams, lam) -> DerivativeBundle:
    _, d_big, _, d_gamma = _rabi_parts(p, lam)
    d_delta = d_big if p.delta_convention == "paper" else -0.5 * d_big
    return DerivativeBundle(_scalar(np.zeros_like(d_big)), _scalar(d_delta), _scalar(d_gamma))


def rabi_matrix(p: RabiParams, lam: float) -> np.ndarray:
    """Effective RWA matrix [[Omega/2, gamma], [gamma, -Omega/2 + 2 omega]]."""
    big, _, gamma, _ = _rabi_parts(p, lam)
    return np.array([[0.5 * big, gamma], [gamma, -0.5 * big + 2 * p.omega]], dtype=float)


def rabi_model(p: RabiParams, domain=None) -> TwoLevelModel:
    if domain is None:
        domain = (0.0, 4 * p.omega0)
    config = {"type": "rabi", "params": {"omega0": p.omega0, "omega": p.omega, "delta_convention": p.delta_convention}, "domain": list(domain)}
    return TwoLevelModel(
        f"rabi(omega0={p.omega0:g}, omega={p.omega:g}, {p.delta_convention})",
        lambda lam: rabi_coefficients(p, lam),
        tuple(domain),
        lambda lam: rabi_derivatives(p, lam),
        config,
    )


def rabi_qfi_resonance(p: RabiParams, lam):
    """Resonant QFI (1 / 64 omega0^2) / (1 - y + 17 y^2 / 64)^2, y = lambda / omega0."""
    if p.omega != p.omega0:
        raise ValueError("closed form requires resonance, omega == omega0")
    if p.delta_convention != "paper":
        raise ValueError("closed form is for the 'paper' delta convention")
    y = np.asarray(lam) / p.omega0
    return _scalar(1 / (64 * p.omega0**2) / (1 - y + 17 * y**2 / 64) ** 2)


# --------------------------------------------------------------------------
# three-level system reduced to two levels


@dataclass(frozen=True)
class ThreeLevelParams:
    base: TwoLevelModel
    g: float
    eps_gap: float
    base_config: Optional[dict] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("coupling g must be >= 0")
        if self.eps_gap <= 0:
            raise ValueError("eps_gap must be positive")

    @property
    def kappa(self) -> float:
        return self.g**2 / self.eps_gap


def three_level_hamiltonian(p: ThreeLevelParams, lam: float) -> np.ndarray:
    """The full 3x3 matrix (documentation and checks only; never diagonalised here)."""
    c = p.base.evaluate(lam)
    return np.array(
        [[c.omega1, c.gamma, p.g], [c.gamma, c.omega2, p.g], [p.g, p.g, p.eps_gap]],
        dtype=float,
    )


def _check_regime(p: ThreeLevelParams, c: CoefficientBundle) -> None:
    scale = max(abs(c.omega1), abs(c.omega2))
    if p.eps_gap <= 10 * scale or p.g >= 0.3:
        warnings.warn(
            f"three-level reduction outside its regime (eps_gap = {p.eps_gap:g}, max|omega_k| = {scale:g}, g = {p.g:g})",
            ModelValidationWarning,
            stacklevel=3,
        )


def three_level_effective(p: ThreeLevelParams, lam) -> CoefficientBundle:
    """omega_k -> omega_k + kappa and gamma -> gamma + kappa with kappa = g^2 / eps_gap."""
    c = p.base.evaluate(lam)
    if np.ndim(c.delta) == 0:
        _check_regime(p, c)
    k = p.kappa
    return CoefficientBundle(c.omega0 + k, c.delta, c.gamma + k)


def three_level_model(p: ThreeLevelParams, domain=None) -> TwoLevelModel:
    domain = tuple(domain) if domain is not None else p.base.domain
    config = {"type": "three-level", "params": {"base": p.base_config or p.base.config, "g": p.g, "eps_gap": p.eps_gap}, "domain": list(domain)}

    def evaluate(lam):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ModelValidationWarning)
            return three_level_effective(p, lam)

    derivs = None
    if p.base.analytic_derivatives is not None:
        derivs = p.base.analytic_derivatives
    return TwoLevelModel(f"three-level[{p.base.name}, kappa={p.kappa:g}]", evaluate, domain, derivs, config)


def three_level_qfi_first_order(c: CoefficientBundle, d: DerivativeBundle, kappa: float, root: str = "signed") -> float:
    """First-order expansion of the QFI in kappa.

    H_k = H0 - 2 kappa s [2 gamma delta d_gamma + d_delta (delta^2 - gamma^2)] / (gamma^2 + delta^2)^2

    where s is the square root of H0. The exact first-order term needs the
    signed root s = (delta d_gamma - gamma d_delta) / (gamma^2 + delta^2);
    ``root="nonnegative"`` uses |s| instead, which has the wrong sign whenever
    delta d_gamma < gamma d_delta.
    """
    _require_nondegenerate(c)
    h0 = float(qfi_ground(c, d))
    if h0 == 0:
        raise ZeroInformationError("first-order expansion needs H0 > 0")
    s = float(angle_rate(c, d))
    if root == "nonnegative":
        s = abs(s)
    elif root != "signed":
        raise ValueError(f"root must be 'signed' or 'nonnegative', got {root!r}")
    e2 = c.gamma**2 + c.delta**2
    bracket = 2 * c.gamma * c.delta * d.d_gamma + d.d_delta * (c.delta**2 - c.gamma**2)
    return h0 - 2 * kappa * s * bracket / e2**2

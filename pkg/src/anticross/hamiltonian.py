"""
Parametric two-level Hamiltonians, their spectra and equilibrium states.

A model is a map lambda -> (omega0, delta, gamma) where, in the basis of the
bare levels,

    H(lambda) = [[omega1, gamma], [gamma, omega2]],
    omega0 = (omega2 + omega1) / 2,   delta = (omega2 - omega1) / 2.

Frame convention
----------------
Bloch vectors and state vectors in this package are expressed in the frame
obtained from the bare-level basis by conjugation with sigma_y, where

    H = omega0 * I + delta * sigma_z - gamma * sigma_x.

In this frame the ground state has Bloch vector (gamma, 0, -delta) / E with
E = sqrt(gamma**2 + delta**2), the outcome probability of a projective
measurement along r reads q = (1 + (x r1 - r3) / sqrt(1 + x**2)) / 2 and the
thermal state is rho = (I - tanh(beta E) (sigma_z - x sigma_x) / sqrt(1 + x**2)) / 2.
The frame change is unitary, so every spectral and Fisher-information
quantity is unaffected by it.

Units: hbar = 1, all energies in one arbitrary unit, beta and t in inverse
energy.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateBundleError, DomainError, ModelValidationWarning

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class CoefficientBundle:
    """Hamiltonian coefficients (omega0, delta, gamma) at one value of lambda.

    Fields may also be numpy arrays of a common shape; the vectorised
    formulas in this package broadcast over them.
    """

    omega0: float
    delta: float
    gamma: float

    @property
    def energy(self):
        """Half gap sqrt(gamma**2 + delta**2)."""
        return np.hypot(self.gamma, self.delta)

    @property
    def omega1(self):
        return self.omega0 - self.delta

    @property
    def omega2(self):
        return self.omega0 + self.delta

    @property
    def is_degenerate(self) -> bool:
        return bool(np.any((np.asarray(self.gamma) == 0) & (np.asarray(self.delta) == 0)))

    def shifted(self, s: float) -> "CoefficientBundle":
        """Same bundle with omega0 -> omega0 + s."""
        return CoefficientBundle(self.omega0 + s, self.delta, self.gamma)


@dataclass(frozen=True)
class DerivativeBundle:
    d_omega0: float
    d_delta: float
    d_gamma: float
    step: Optional[float] = None  # finite-difference step, None when analytic


@dataclass(frozen=True)
class SpectralData:
    h_minus: float
    h_plus: float
    gap: float
    x: float
    degenerate: bool = False


@dataclass(frozen=True)
class BlochState:
    """Qubit state rho = (I + n1 sx + n2 sy + n3 sz) / 2."""

    n1: float
    n2: float
    n3: float

    def __post_init__(self):
        norm2 = self.n1**2 + self.n2**2 + self.n3**2
        if np.any(norm2 > 1 + 1e-12):
            raise ValueError(f"Bloch vector outside the unit ball: |n|^2 = {norm2}")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.n1, self.n2, self.n3], dtype=float)

    @property
    def purity(self) -> float:
        return purity(self)

    @property
    def is_pure(self) -> bool:
        return abs(float(np.dot(self.vector, self.vector)) - 1.0) <= 1e-12

    def density_matrix(self) -> np.ndarray:
        return 0.5 * (SIGMA_0 + self.n1 * SIGMA_X + self.n2 * SIGMA_Y + self.n3 * SIGMA_Z)


def _require_nondegenerate(c: CoefficientBundle) -> None:
    if c.is_degenerate:
        raise DegenerateBundleError(f"gamma = delta = 0 in {c}; eigenvectors are undefined")


def hamiltonian_matrix(c: CoefficientBundle) -> np.ndarray:
    """Explicit 2x2 Hamiltonian in the working frame (see module docstring)."""
    return c.omega0 * SIGMA_0 + c.delta * SIGMA_Z - c.gamma * SIGMA_X


def bare_matrix(c: CoefficientBundle) -> np.ndarray:
    """The Hamiltonian in the bare-level basis, [[omega1, gamma], [gamma, omega2]]."""
    return np.array([[c.omega1, c.gamma], [c.gamma, c.omega2]], dtype=float)


def eigenvalues(c: CoefficientBundle) -> SpectralData:
    e = math.hypot(c.gamma, c.delta)
    if c.delta != 0:
        x = c.gamma / c.delta
    elif c.gamma != 0:
        x = math.inf
    else:
        x = math.nan
    return SpectralData(c.omega0 - e, c.omega0 + e, 2 * e, x, degenerate=(e == 0))


def ground_bloch_vector(c: CoefficientBundle) -> np.ndarray:
    """(gamma, 0, -delta) / E, vectorised over array-valued bundles."""
    e = c.energy
    return np.array([c.gamma / e, np.zeros_like(e), -c.delta / e])


def eigenprojectors(c: CoefficientBundle) -> tuple[BlochState, BlochState]:
    """Bloch vectors of the ground (P-) and excited (P+) projectors, in that order.

    Both are pure and independent of omega0.
    """
    _require_nondegenerate(c)
    n = ground_bloch_vector(c)
    return BlochState(*n), BlochState(*(-n))


def mixing_angle(c: CoefficientBundle, reference: Optional[float] = None) -> float:
    """Angle b = atan2(gamma, delta) of the ground Bloch vector (sin b, 0, -cos b).

    With ``reference`` given, b is shifted by a multiple of 2 pi to lie within
    pi of it, which keeps the eigenvector gauge smooth across the atan2 cut.
    """
    b = math.atan2(c.gamma, c.delta)
    if reference is not None:
        b += 2 * math.pi * round((reference - b) / (2 * math.pi))
    return b


def eigenvectors(c: CoefficientBundle, reference: Optional[float] = None) -> tuple[np.ndarray, np.ndarray]:
    """Ground and excited state vectors in the real half-angle gauge.

    psi_minus = (sin(b/2), cos(b/2)), psi_plus = (cos(b/2), -sin(b/2)) with b
    from :func:`mixing_angle`. The family is smooth in lambda wherever the
    bundle is nondegenerate, and d psi_minus / d b = psi_plus / 2.
    """
    _require_nondegenerate(c)
    b = mixing_angle(c, reference)
    s, co = math.sin(b / 2), math.cos(b / 2)
    return np.array([s, co], dtype=complex), np.array([co, -s], dtype=complex)


def _tanh_beta_e(beta, e):
    if np.isinf(beta):
        return np.where(np.asarray(e) > 0, 1.0, 0.0)
    return np.tanh(beta * e)


def thermal_state(c: CoefficientBundle, beta: float) -> BlochState:
    """Gibbs state exp(-beta H) / Z as a Bloch vector.

    beta may be ``math.inf`` (ground state). A degenerate bundle has
    exp(-beta H) proportional to the identity, so the maximally mixed state is
    returned for it at every beta.
    """
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if beta == 0 or c.is_degenerate:
        return BlochState(0.0, 0.0, 0.0)
    n = ground_bloch_vector(c) * _tanh_beta_e(beta, c.energy)
    return BlochState(*n)


def thermal_populations(c: CoefficientBundle, beta: float) -> tuple[float, float]:
    """(p_minus, p_plus) = exp(-beta h_-+) / Z; the ground level carries the larger weight."""
    t = float(_tanh_beta_e(beta, c.energy)) if beta != 0 else 0.0
    return 0.5 * (1 + t), 0.5 * (1 - t)


def purity(s: BlochState) -> float:
    return 0.5 * (1 + s.n1**2 + s.n2**2 + s.n3**2)


def default_step(lam: float) -> float:
    return max(1e-6, 1e-6 * abs(lam))


@dataclass(frozen=True)
class TwoLevelModel:
    """A family lambda -> CoefficientBundle on a closed interval.

    ``evaluate`` must be deterministic on the domain. When
    ``analytic_derivatives`` is None, :meth:`derivatives` falls back to
    central differences.
    """

    name: str
    evaluate: Callable[[float], CoefficientBundle]
    domain: tuple[float, float]
    analytic_derivatives: Optional[Callable[[float], DerivativeBundle]] = None
    config: Optional[dict] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError(f"empty domain {self.domain}")

    def contains(self, lam) -> bool:
        lo, hi = self.domain
        lam = np.asarray(lam)
        return bool(np.all((lam >= lo) & (lam <= hi)))

    def check_domain(self, lam) -> None:
        if not self.contains(lam):
            raise DomainError(f"lambda = {lam} outside the domain {self.domain} of {self.name}")

    def coefficients(self, lam) -> CoefficientBundle:
        self.check_domain(lam)
        return self.evaluate(lam)

    def derivatives(self, lam, h: Optional[float] = None) -> DerivativeBundle:
        self.check_domain(lam)
        if self.analytic_derivatives is not None and h is None:
            return self.analytic_derivatives(lam)
        return finite_difference_derivatives(self, lam, h)


def finite_difference_derivatives(model: TwoLevelModel, lam: float, h: Optional[float] = None) -> DerivativeBundle:
    """Central differences of all three coefficients with step h (recorded)."""
    if h is None:
        h = default_step(lam)
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    lo, hi = model.domain
    if lam - h < lo or lam + h > hi:
        raise DomainError(f"stencil [{lam - h}, {lam + h}] leaves the domain {model.domain}")
    up, down = model.evaluate(lam + h), model.evaluate(lam - h)
    return DerivativeBundle(
        (up.omega0 - down.omega0) / (2 * h),
        (up.delta - down.delta) / (2 * h),
        (up.gamma - down.gamma) / (2 * h),
        step=h,
    )


def function_model(name, omega0, delta, gamma, domain, d_omega0=None, d_delta=None, d_gamma=None, config=None) -> TwoLevelModel:
    """Build a model from three coefficient callables.

    If all three derivative callables are supplied they are used as analytic
    derivatives; otherwise derivatives come from central differences.
    """

    def evaluate(lam):
        return CoefficientBundle(omega0(lam), delta(lam), gamma(lam))

    derivs = None
    if d_omega0 is not None and d_delta is not None and d_gamma is not None:

        def derivs(lam):
            return DerivativeBundle(d_omega0(lam), d_delta(lam), d_gamma(lam))

    return TwoLevelModel(name, evaluate, tuple(domain), derivs, config)


def table_model(lam, omega0, delta, gamma, domain=None, name="custom-table", config=None) -> TwoLevelModel:
    """Monotone cubic (PCHIP) interpolation of tabulated coefficients.

    Derivatives are the analytic derivatives of the interpolant.
    """
    from scipy.interpolate import PchipInterpolator

    lam = np.asarray(lam, dtype=float)
    cols = [np.asarray(v, dtype=float) for v in (omega0, delta, gamma)]
    if lam.ndim != 1 or len(lam) < 3:
        raise ValueError("a table needs at least 3 lambda nodes")
    if any(col.shape != lam.shape for col in cols):
        raise ValueError("table columns must all have the length of the lambda column")
    if np.any(np.diff(lam) <= 0):
        raise ValueError("lambda nodes must be strictly increasing")
    if domain is None:
        domain = (float(lam[0]), float(lam[-1]))
    if domain[0] < lam[0] or domain[1] > lam[-1]:
        raise ValueError(f"domain {domain} extends beyond the table [{lam[0]}, {lam[-1]}]")
    interps = [PchipInterpolator(lam, col) for col in cols]
    slopes = [p.derivative() for p in interps]

    def evaluate(x):
        o, d, g = (p(x) for p in interps)
        if np.ndim(o) == 0:
            return CoefficientBundle(float(o), float(d), float(g))
        return CoefficientBundle(o, d, g)

    def derivs(x):
        o, d, g = (p(x) for p in slopes)
        if np.ndim(o) == 0:
            return DerivativeBundle(float(o), float(d), float(g))
        return DerivativeBundle(o, d, g)

    return TwoLevelModel(name, evaluate, tuple(map(float, domain)), derivs, config)


@dataclass(frozen=True)
class ModelCheck:
    name: str
    points: int
    min_delta: float
    min_gap: float
    degenerate_points: int
    delta_positive: bool


def validate_model(model: TwoLevelModel, points: int = 201) -> ModelCheck:
    """Scan the domain; warn if delta <= 0 anywhere or the gap closes."""
    grid = np.linspace(*model.domain, points)
    deltas, gaps = np.empty(points), np.empty(points)
    for i, lam in enumerate(grid):
        c = model.evaluate(float(lam))
        deltas[i] = c.delta
        gaps[i] = 2 * math.hypot(c.gamma, c.delta)
    check = ModelCheck(
        model.name,
        points,
        float(deltas.min()),
        float(gaps.min()),
        int(np.count_nonzero(gaps == 0)),
        bool(np.all(deltas > 0)),
    )
    if not check.delta_positive:
        warnings.warn(
            f"{model.name}: delta <= 0 somewhere on {model.domain} (min {check.min_delta:g})",
            ModelValidationWarning,
            stacklevel=2,
        )
    if check.degenerate_points:
        warnings.warn(f"{model.name}: {check.degenerate_points} level crossing(s) on the grid", ModelValidationWarning, stacklevel=2)
    return check

"""
Simulated binary-outcome experiments, maximum-likelihood and Bayesian
estimators, and their comparison with the Cramer-Rao bounds.

Outcomes of the projective measurement along r are Bernoulli with
probability q_beta(lambda); only the success count of each batch is kept
(it is a sufficient statistic). Random draws come from numpy's counter-based
Philox generator keyed by (seed, batch index), so a batch's counts do not
depend on which worker produced them or in what order.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy.special import xlogy

from .errors import DegeneratePosteriorWarning, NonIdentifiableError, OutOfRangeWarning
from .hamiltonian import CoefficientBundle, TwoLevelModel
from .metrology import MeasurementDirection, thermal_fisher, thermal_qfi

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class OutcomeRecord:
    m_total: int
    n_success: int
    seed: int
    q_true: float
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.n_success <= self.m_total:
            raise ValueError(f"need 0 <= n_success <= m_total, got {self.n_success}/{self.m_total}")

    @property
    def frequency(self) -> float:
        return self.n_success / self.m_total if self.m_total else math.nan


@dataclass(frozen=True)
class EstimatorConfig:
    method: str = "mle"
    search_interval: Optional[tuple[float, float]] = None  # None: the model domain
    grid_points: int = 1025
    tolerance: float = 1e-12

    def __post_init__(self):
        if self.method not in ("mle", "bayes"):
            raise ValueError(f"method must be 'mle' or 'bayes', got {self.method!r}")
        if self.grid_points < 64:
            raise ValueError("grid_points must be >= 64")
        if self.search_interval is not None and not self.search_interval[0] < self.search_interval[1]:
            raise ValueError(f"empty search interval {self.search_interval}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def interval(self, model: TwoLevelModel) -> tuple[float, float]:
        if self.search_interval is None:
            return model.domain
        model.check_domain(list(self.search_interval))
        return tuple(map(float, self.search_interval))


@dataclass
class EstimationReport:
    lambda_true: float
    estimates: list
    empirical_variance: float
    crb_classical: float
    crb_quantum: float
    batches: int
    m: int
    method: str
    q_true: float
    fisher: float
    qfi: float
    mean: float
    clipped_batches: int = 0
    batch_notes: dict = field(default_factory=dict)

    @property
    def ratio_to_quantum_crb(self) -> float:
        return self.empirical_variance / self.crb_quantum

    @property
    def ratio_to_classical_crb(self) -> float:
        return self.empirical_variance / self.crb_classical

    def to_dict(self) -> dict:
        return asdict(self)


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED or not 0 <= stream <= MAX_SEED:
        raise ValueError("seed and stream must be unsigned 64-bit integers")
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def sample_outcomes(q: float, m: int, seed: int, stream: int = 0) -> OutcomeRecord:
    """Binomial(m, q) success count from the (seed, stream) Philox stream."""
    if not 0 <= q <= 1:
        raise ValueError(f"invalid probability {q}")
    if m < 1:
        raise ValueError(f"need at least one measurement, got m = {m}")
    n = int(rng_for(seed, stream).binomial(m, q))
    return OutcomeRecord(m, n, seed, float(q), stream)


def probability_curve(model: TwoLevelModel, r: MeasurementDirection, beta: float, lams) -> np.ndarray:
    """q_beta(lambda) on an array of lambda values.

    Uses a vectorised model evaluation when the model supports it. At a level
    crossing the thermal state is maximally mixed and q = 1/2.
    """
    lams = np.asarray(lams, dtype=float)
    try:
        c = model.evaluate(lams)
        gamma, delta = np.broadcast_arrays(np.asarray(c.gamma, float), np.asarray(c.delta, float))
        if gamma.shape != lams.shape:
            raise ValueError
    except (TypeError, ValueError):
        cs = [model.evaluate(float(x)) for x in lams.ravel()]
        gamma = np.array([c.gamma for c in cs], dtype=float).reshape(lams.shape)
        delta = np.array([c.delta for c in cs], dtype=float).reshape(lams.shape)
    e = np.hypot(gamma, delta)
    safe = np.where(e > 0, e, 1.0)
    proj = (gamma * r.r1 - delta * r.r3) / safe
    if math.isinf(beta):
        t = np.where(e > 0, 1.0, 0.0)
    else:
        t = np.tanh(beta * e)
    return np.where(e > 0, 0.5 * (1 + t * proj), 0.5)


def _monotone_direction(model, r, beta, lo, hi, points) -> int:
    grid = np.linspace(lo, hi, points)
    dq = np.diff(probability_curve(model, r, beta, grid))
    if np.all(dq > 0):
        return 1
    if np.all(dq < 0):
        return -1
    raise NonIdentifiableError(
        f"q_beta(lambda) is not strictly monotone on [{lo}, {hi}] for r = ({r.r1:.6g}, {r.r2:.6g}, {r.r3:.6g})"
    )


def mle_batch(model, r, beta, frequencies, config: EstimatorConfig):
    """Vectorised binomial MLE for many empirical frequencies.

    Returns (estimates, clipped) where ``clipped`` marks frequencies outside
    q_beta of the search interval; those estimates sit on the nearest end.
    """
    lo, hi = config.interval(model)
    sign = _monotone_direction(model, r, beta, lo, hi, config.grid_points)
    f = np.asarray(frequencies, dtype=float)
    q_lo, q_hi = probability_curve(model, r, beta, np.array([lo, hi]))
    below = sign * (f - q_lo) < 0
    above = sign * (f - q_hi) > 0
    a = np.full(f.shape, lo)
    b = np.full(f.shape, hi)
    n_iter = max(1, math.ceil(math.log2((hi - lo) / config.tolerance)))
    for _ in range(n_iter):
        mid = 0.5 * (a + b)
        go_right = sign * (probability_curve(model, r, beta, mid) - f) < 0
        a = np.where(go_right, mid, a)
        b = np.where(go_right, b, mid)
    est = 0.5 * (a + b)
    est = np.where(below, lo, np.where(above, hi, est))
    return est, below | above


def mle_estimate(model: TwoLevelModel, r: MeasurementDirection, beta: float, record: OutcomeRecord, config: Optional[EstimatorConfig] = None) -> float:
    """Solve q_beta(lambda) = n/m by bisection on the search interval.

    Raises NonIdentifiableError unless q_beta is strictly monotone on the
    grid. An out-of-range frequency gives the nearest endpoint and an
    OutOfRangeWarning.
    """
    config = config or EstimatorConfig()
    if record.m_total == 0:
        raise ValueError("no data: m_total = 0")
    est, clipped = mle_batch(model, r, beta, np.array([record.frequency]), config)
    if clipped[0]:
        warnings.warn(f"frequency {record.frequency:g} outside the range of q; estimate clipped to {est[0]:g}", OutOfRangeWarning, stacklevel=2)
    return float(est[0])


def bayes_estimate(model: TwoLevelModel, r: MeasurementDirection, beta: float, record: OutcomeRecord, config: Optional[EstimatorConfig] = None) -> float:
    """Posterior mean under a uniform prior, by trapezoidal quadrature on the grid."""
    config = config or EstimatorConfig(method="bayes")
    lo, hi = config.interval(model)
    grid = np.linspace(lo, hi, config.grid_points)
    q = probability_curve(model, r, beta, grid)
    n, m = record.n_success, record.m_total
    with np.errstate(divide="ignore"):
        loglik = xlogy(n, q) + xlogy(m - n, 1 - q)
    if not np.any(np.isfinite(loglik)):
        raise NonIdentifiableError("the likelihood vanishes on the whole search interval")
    w = np.exp(loglik - np.max(loglik))
    norm = np.trapezoid(w, grid)
    mean = np.trapezoid(w * grid, grid) / norm
    sd = math.sqrt(max(np.trapezoid(w * (grid - mean) ** 2, grid) / norm, 0.0))
    if sd < grid[1] - grid[0]:
        warnings.warn(f"posterior narrower than one grid cell (sd = {sd:.3g}); refine grid_points", DegeneratePosteriorWarning, stacklevel=2)
    return float(mean)


def worker_count(workers: Optional[int] = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("ANTICROSS_THREADS")
    return max(1, int(env)) if env else 1


def run_experiment(
    model: TwoLevelModel,
    lambda_true: float,
    r: MeasurementDirection,
    beta: float,
    m: int,
    batches: int,
    seed: int,
    config: Optional[EstimatorConfig] = None,
    workers: Optional[int] = None,
) -> EstimationReport:
    """Repeat an m-shot experiment ``batches`` times and compare Var(estimate) with the CRBs.

    The report is a pure function of its arguments; ``workers`` (default:
    ANTICROSS_THREADS or 1) only changes the speed.
    """
    config = config or EstimatorConfig()
    if batches < 2:
        raise ValueError("need at least two batches for a variance")
    c: CoefficientBundle = model.coefficients(lambda_true)
    d = model.derivatives(lambda_true)
    q_true = float(probability_curve(model, r, beta, np.array([lambda_true]))[0])
    n_workers = worker_count(workers)

    def draw(b):
        return sample_outcomes(q_true, m, seed, stream=b).n_success

    if n_workers == 1:
        counts = [draw(b) for b in range(batches)]
    else:
        with ThreadPoolExecutor(n_workers) as pool:
            counts = list(pool.map(draw, range(batches)))
    freqs = np.array(counts, dtype=float) / m

    notes = {}
    if config.method == "mle":
        est, clipped = mle_batch(model, r, beta, freqs, config)
        for b in np.flatnonzero(clipped):
            notes[int(b)] = "frequency outside q range; clipped to interval end"
    else:
        def post_mean(b):
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                v = bayes_estimate(model, r, beta, OutcomeRecord(m, counts[b], seed, q_true, b), config)
            return v, [str(w.message) for w in caught]

        if n_workers == 1:
            results = [post_mean(b) for b in range(batches)]
        else:
            with ThreadPoolExecutor(n_workers) as pool:
                results = list(pool.map(post_mean, range(batches)))
        est = np.array([v for v, _ in results])
        clipped = np.zeros(batches, dtype=bool)
        for b, (_, msgs) in enumerate(results):
            if msgs:
                notes[b] = "; ".join(msgs)

    fisher = thermal_fisher(c, d, beta, r)
    qfi = thermal_qfi(c, d, beta).H_total
    return EstimationReport(
        lambda_true=float(lambda_true),
        estimates=[float(v) for v in est],
        empirical_variance=float(np.var(est, ddof=1)),
        crb_classical=1 / (m * fisher) if fisher > 0 else math.inf,
        crb_quantum=1 / (m * qfi) if qfi > 0 else math.inf,
        batches=batches,
        m=m,
        method=config.method,
        q_true=q_true,
        fisher=float(fisher),
        qfi=float(qfi),
        mean=float(np.mean(est)),
        clipped_batches=int(np.count_nonzero(clipped)),
        batch_notes=notes,
    )

"""Baseline likelihood-free samplers: MCMC-ABC and SMC-ABC.

Both use a Gaussian proposal kernel.  The two proposal covariances from the
tuberculosis benchmark ship as the presets ``naive`` (diagonal, no assumed
correlations) and ``tuned`` (the heuristically optimised matrix).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core.priors import Prior
from .core.sampling import DEFAULT_BUDGET_CAP, CostCounter
from .errors import BudgetExhaustedError, KernelDegenerateError, MlabcError, ParticleDegeneracyError
from .rng import generator, substream


@dataclass(frozen=True, eq=False)
class GaussianKernel:
    """Multivariate normal proposal kernel with fixed covariance."""

    cov: np.ndarray
    _factor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        cov = np.atleast_2d(np.asarray(self.cov, dtype=np.float64))
        if cov.shape[0] != cov.shape[1]:
            raise KernelDegenerateError("covariance must be square")
        if np.abs(cov - cov.T).max() > 1e-12:
            raise KernelDegenerateError("covariance must be symmetric")
        try:
            factor = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            # positive-semidefinite fallback
            eigvals, eigvecs = np.linalg.eigh(cov)
            if eigvals.min() < -1e-12 * max(1.0, eigvals.max()):
                raise KernelDegenerateError("covariance has negative eigenvalues") from None
            factor = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "_factor", factor)

    @property
    def k(self):
        return self.cov.shape[0]

    def sample(self, center, rng) -> np.ndarray:
        """Draw from N(center, cov)."""
        z = rng.standard_normal(self.k)
        return np.asarray(center, dtype=np.float64) + self._factor @ z

    def density_many(self, x, centers) -> np.ndarray:
        """q(x | center_m) for every row of ``centers``; needs nonsingular cov."""
        sign, logdet = np.linalg.slogdet(self.cov)
        if sign <= 0:
            raise KernelDegenerateError("density needs a nonsingular covariance")
        diff = np.atleast_2d(centers) - np.asarray(x, dtype=np.float64)
        sol = np.linalg.solve(self.cov, diff.T).T
        quad = np.einsum("ij,ij->i", diff, sol)
        log_norm = -0.5 * (self.k * math.log(2.0 * math.pi) + logdet)
        return np.exp(log_norm - 0.5 * quad)


KERNEL_PRESETS = {
    "naive": np.diag([0.75**2, 0.75**2, 0.03**2]),
    "tuned": np.array(
        [
            [0.5**2, 0.225, 0.0],
            [0.225, 0.5**2, 0.0],
            [0.0, 0.0, 0.015**2],
        ]
    ),
}


def kernel_preset(name: str) -> GaussianKernel:
    try:
        return GaussianKernel(KERNEL_PRESETS[name])
    except KeyError:
        raise MlabcError(f"unknown kernel preset {name!r}") from None


@dataclass
class MarkovChainTrace:
    states: np.ndarray  # (n_steps, k)
    accepted: int
    cost: CostCounter

    @property
    def acceptance_rate(self):
        return self.accepted / max(1, self.states.shape[0] - 1)


@dataclass
class ParticleEnsemble:
    particles: np.ndarray  # (n_particles, k)
    weights: np.ndarray
    stage: int
    cost: CostCounter
    ess_history: list = field(default_factory=list)

    @property
    def ess(self):
        return 1.0 / float(np.dot(self.weights, self.weights))


def mcmc_abc(
    init,
    kernel: GaussianKernel,
    prior: Prior,
    model,
    epsilon: float,
    n_steps: int,
    seed,
) -> MarkovChainTrace:
    """Likelihood-free Metropolis-Hastings chain of length ``n_steps``.

    ``init`` must be an ABC posterior draw (one rejection-sampler output).
    Each iteration simulates once; the state advances only when the
    discrepancy passes and the MH test accepts.  The Gaussian kernel is
    symmetric, so the proposal-density ratio cancels.
    """
    init = np.asarray(init, dtype=np.float64)
    if not prior.contains(init):
        raise MlabcError("initial state lies outside the prior support")
    if n_steps < 1:
        raise MlabcError("need at least one step")
    rng = generator(seed)
    states = np.empty((n_steps, init.shape[0]))
    states[0] = init
    cost = CostCounter()
    accepted = 0
    for i in range(1, n_steps):
        current = states[i - 1]
        proposal = kernel.sample(current, rng)
        data = model.simulate(proposal, rng)
        cost.add()
        if model.discrepancy(data) <= epsilon:
            ratio = prior.density_ratio(proposal, current)
            if ratio > 0.0 and rng.uniform() <= min(ratio, 1.0):
                states[i] = proposal
                accepted += 1
                continue
        states[i] = current
    return MarkovChainTrace(states, accepted, cost)


def smc_abc(
    n_particles: int,
    schedule,
    kernel: GaussianKernel,
    prior: Prior,
    model,
    seed,
    budget_cap: int = DEFAULT_BUDGET_CAP,
) -> ParticleEnsemble:
    """Sequential Monte Carlo ABC through a decreasing threshold schedule.

    Stage 1 draws the particles from the prior with equal weights (no
    simulation).  Each later stage resamples an ancestor by weight, perturbs
    it, and simulates until the stage threshold accepts; weights follow the
    importance update against the kernel-mixture proposal, then normalise.
    Every particle owns a per-stage sub-stream of ``seed``.
    """
    schedule = np.asarray(schedule, dtype=np.float64)
    if schedule.ndim != 1 or schedule.shape[0] < 1:
        raise MlabcError("schedule must be a nonempty 1-d sequence")
    if np.any(np.diff(schedule) >= 0):
        raise MlabcError("schedule must be strictly decreasing")
    if n_particles < 1:
        raise MlabcError("need at least one particle")
    cost = CostCounter()
    particles = np.empty((n_particles, prior.k))
    for i in range(n_particles):
        particles[i] = prior.sample(generator(substream(seed, 0), i))
    weights = np.full(n_particles, 1.0 / n_particles)
    ess_history = [float(n_particles)]
    for t in range(1, schedule.shape[0]):
        eps = schedule[t]
        cum_weights = np.cumsum(weights)
        cum_weights[-1] = 1.0
        new_particles = np.empty_like(particles)
        for i in range(n_particles):
            rng = generator(substream(seed, t), i)
            while True:
                if cost.steps >= budget_cap:
                    raise BudgetExhaustedError(
                        f"budget cap {budget_cap} reached in SMC stage {t + 1}",
                        partial=ParticleEnsemble(particles, weights, t, cost, ess_history),
                    )
                ancestor = int(np.searchsorted(cum_weights, rng.random(), side="right"))
                proposal = kernel.sample(particles[ancestor], rng)
                data = model.simulate(proposal, rng)
                cost.add()
                if model.discrepancy(data) <= eps:
                    break
            new_particles[i] = proposal
        numerators = np.array([prior.density(p) for p in new_particles])
        denominators = np.array(
            [float(np.dot(weights, kernel.density_many(p, particles))) for p in new_particles]
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            raw = np.where(denominators > 0.0, numerators / denominators, 0.0)
        if not np.all(np.isfinite(raw)):
            warnings.warn("non-finite SMC weights replaced by zero")
            raw = np.where(np.isfinite(raw), raw, 0.0)
        total = raw.sum()
        if total <= 0.0:
            raise ParticleDegeneracyError(f"all importance weights vanished at stage {t + 1}")
        particles = new_particles
        weights = raw / total
        ess = 1.0 / float(np.dot(weights, weights))
        ess_history.append(ess)
        if n_particles > 1 and ess < 1.0 + 1e-9:
            raise ParticleDegeneracyError(
                f"effective sample size collapsed to {ess:.12f} at stage {t + 1}"
            )
    return ParticleEnsemble(particles, weights, schedule.shape[0], cost, ess_history)

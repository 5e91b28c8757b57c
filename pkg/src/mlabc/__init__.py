"""Likelihood-free Bayesian inference with multilevel Monte Carlo rejection sampling.

Subpackages
-----------
models
    SIS and tuberculosis simulators, discrepancy metrics, exact SIS oracle.
core
    Priors, cost accounting, ABC rejection sampling, prior truncation.
baselines
    MCMC-ABC and SMC-ABC comparison samplers.
mlmc
    The multilevel telescoping CDF/expectation estimator.
bench
    Experiment configs, metrics, the CLI, and desk-scale study presets.
kernels
    Hot simulation loops: compiled extension with pure-Python fallback.
"""

from . import errors, rng
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["errors", "rng", "KERNEL_BACKEND", "__version__"]

"""Calibration probe: bias, cost, and variance structure of the SIS fixture."""
import time
import numpy as np
from mlabc.core import Prior, Uniform, abc_rejection
from mlabc.models import SisModel, sis_observed_series, sis_exact_posterior_cdf
from mlabc.mlmc.lattice import Lattice, LatticeCdf, level_cdf, monotonicity_adjust
from mlabc.mlmc.estimator import trial_run

def log(*a):
    print(*a, flush=True)

prior = Prior([Uniform(0, 0.06), Uniform(0, 2)], names=("beta", "gamma"))
obs = sis_observed_series()
model = SisModel(obs, s0=100, i0=1)
lattice = Lattice.from_ranges([(0.0, 0.06, 100), (0.0, 2.0, 100)])

t0 = time.time()
try:
    data = np.load("/root/pkg/.calib/ref100.npz")
    exact = LatticeCdf(lattice, data["values"], adjusted=True)
    log("reference loaded")
except FileNotFoundError:
    exact = sis_exact_posterior_cdf(prior, obs, lattice, 100, 101)
    np.savez("/root/pkg/.calib/ref100.npz", values=exact.values)
    log(f"reference built in {time.time()-t0:.0f}s")

for eps, n in ((75.0, 3000), (53.033, 3000), (37.5, 3000), (26.516, 2000), (18.75, 1500)):
    t0 = time.time()
    ss = abc_rejection(prior, model, eps, n, seed=1000 + int(eps * 100))
    ecdf = monotonicity_adjust(level_cdf(ss.samples, lattice, smoothed=False))
    sup = np.abs(ecdf.values - exact.values).max()
    log(f"eps={eps}: c={ss.cost.steps/n:.1f}, sup_err={sup:.4f} (N={n}), {time.time()-t0:.0f}s")

t0 = time.time()
plan = trial_run(prior, model, np.array([75.0, 37.5, 18.75]), lattice, seed=77, trials=100)
log(f"trial L=3: v={plan.variances}, c_trunc={plan.cost_rates}, d={plan.sim_counts}, {time.time()-t0:.0f}s")
t0 = time.time()
plan4 = trial_run(prior, model, np.array([75.0, 37.5, 18.75, 9.375]), lattice, seed=78, trials=100)
log(f"trial L=4: v={plan4.variances}, c_trunc={plan4.cost_rates}, d={plan4.sim_counts}, {time.time()-t0:.0f}s")

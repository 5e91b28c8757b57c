"""Experiment configuration: schema, file parsing, and schedule expansion.

Config files are flat ``key = value`` text with dotted section names, or a
JSON object carrying the same keys (nested JSON objects are flattened into
dotted keys).  Lists are comma-separated in the text form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..baselines import KERNEL_PRESETS, GaussianKernel
from ..core.priors import DependentUniform, Normal, Prior, Uniform
from ..errors import ConfigError
from ..mlmc.lattice import Lattice
from ..models import SisModel, TbModel, load_clusters, load_time_series, sis_observed_series, tb_observed_clusters

SAMPLERS = ("rejection", "mcmc", "smc", "mlmc")
MODELS = ("sis", "tb")
METRICS = {"sis": "sse", "tb": "cluster"}


def expand_schedule(spec: dict) -> np.ndarray:
    """Threshold sequence from a schedule spec.

    ``kind=geometric`` uses eps1 * m^(1-l) for l = 1..levels;
    ``kind=recursive`` steps eps_i = eps_last + (eps_{i-1} - eps_last)/2 and
    pins the final element to eps_last exactly;
    ``kind=explicit`` takes the listed thresholds.
    """
    kind = spec.get("kind")
    if kind == "geometric":
        eps1, m, levels = float(spec["eps1"]), float(spec["m"]), int(spec["levels"])
        if eps1 <= 0 or m <= 1 or levels < 1:
            raise ConfigError("geometric schedule needs eps1 > 0, m > 1, levels >= 1")
        out = eps1 * m ** (1.0 - np.arange(1, levels + 1))
    elif kind == "recursive":
        eps1, eps_last, levels = float(spec["eps1"]), float(spec["eps_last"]), int(spec["levels"])
        if levels < 2 or eps_last <= 0 or eps1 <= eps_last:
            raise ConfigError("recursive schedule needs eps1 > eps_last > 0 and levels >= 2")
        values = [eps1]
        for _ in range(levels - 2):
            values.append(eps_last + (values[-1] - eps_last) / 2.0)
        values.append(eps_last)
        out = np.array(values)
    elif kind == "explicit":
        out = np.asarray(
            [float(v) for v in _as_list(spec["thresholds"])], dtype=np.float64
        )
    else:
        raise ConfigError(f"unknown schedule kind {kind!r}")
    if np.any(out <= 0) or np.any(np.diff(out) >= 0):
        raise ConfigError("expanded schedule must be positive and strictly decreasing")
    return out


def _as_list(value):
    if isinstance(value, (list, tuple)):
        return list(value)
    return [part.strip() for part in str(value).split(",") if part.strip()]


def _flatten(obj, prefix=""):
    flat = {}
    for key, value in obj.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


def parse_config_text(text: str) -> dict:
    """Parse either the flat key-value format or JSON into a flat dict."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _flatten(json.loads(text))
    flat = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        flat[key.strip()] = value.strip()
    return flat


@dataclass
class ExperimentConfig:
    """One experiment unit: a sampler at one setting, replicated."""

    model: str = "sis"
    sampler: str = "rejection"
    schedule: dict = field(default_factory=lambda: {"kind": "geometric", "eps1": 75.0, "m": 2.0, "levels": 3})
    lattice_ranges: list = field(
        default_factory=lambda: [(0.0, 0.06, 100), (0.0, 2.0, 100)]
    )
    prior_spec: list | None = None  # None: the model's default prior
    seed: int = 1
    replications: int = 1
    out_dir: str = "results"
    budget_cap: int = 10**9
    # sampler parameters (used per sampler kind)
    n: int = 100  # rejection sample count
    n_steps: int = 1000  # mcmc chain length
    n_particles: int = 100  # smc particle count
    n_finest: int | None = None  # mlmc: prescribe N_L (rescaling mode)
    target_rmse: float | None = 0.05  # mlmc: Eq.-(8) target when not rescaling
    trials: int = 100  # mlmc trial samples per level
    min_samples: int = 10
    kernel: str | list = "naive"
    burn_in: int = 0
    # model parameters
    sis_s0: int = 100
    sis_i0: int = 1
    tb_max_infections: int = 10_000
    tb_subsample: int = 473
    data_path: str | None = None  # observed dataset; None: bundled fixture
    reference_path: str | None = None
    reference_samples: int = 10_000  # tb reference budget (accepted samples)
    reference_seed: int = 900_000_001

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}")
        if self.sampler not in SAMPLERS:
            raise ConfigError(f"sampler must be one of {SAMPLERS}")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        self.thresholds  # validate eagerly

    @property
    def thresholds(self) -> np.ndarray:
        return expand_schedule(self.schedule)

    @property
    def epsilon(self) -> float:
        """The target (finest) acceptance threshold."""
        return float(self.thresholds[-1])

    @property
    def metric(self) -> str:
        return METRICS[self.model]

    def build_lattice(self) -> Lattice:
        return Lattice.from_ranges(self.lattice_ranges)

    def build_model(self):
        if self.model == "sis":
            observed = (
                load_time_series(self.data_path) if self.data_path else sis_observed_series()
            )
            return SisModel(observed, s0=self.sis_s0, i0=self.sis_i0)
        observed = load_clusters(self.data_path) if self.data_path else tb_observed_clusters()
        return TbModel(
            observed,
            max_infections=self.tb_max_infections,
            subsample_n=self.tb_subsample,
        )

    def build_prior(self) -> Prior:
        if self.prior_spec is not None:
            return prior_from_spec(self.prior_spec)
        if self.model == "sis":
            return Prior([Uniform(0.0, 0.06), Uniform(0.0, 2.0)], names=("beta", "gamma"))
        return Prior(
            [Uniform(0.0, 5.0), DependentUniform(0), Normal(0.198, 0.06735)],
            names=("alpha", "delta", "mu"),
        )

    def build_kernel(self) -> GaussianKernel:
        if isinstance(self.kernel, str):
            if self.kernel not in KERNEL_PRESETS:
                raise ConfigError(f"kernel preset must be one of {tuple(KERNEL_PRESETS)}")
            return GaussianKernel(KERNEL_PRESETS[self.kernel])
        return GaussianKernel(np.asarray(self.kernel, dtype=np.float64))


def prior_from_spec(spec) -> Prior:
    """Prior from declarations like ``uniform:0:1``, ``normal:0.2:0.07``,
    ``dependent-uniform:<earlier-axis-name>``; each entry is ``name kind:args``."""
    components = []
    names = []
    for entry in spec:
        name, decl = entry.split(None, 1) if isinstance(entry, str) else entry
        names.append(name.strip())
        parts = [p.strip() for p in decl.split(":")]
        kind = parts[0].lower()
        if kind == "uniform":
            components.append(Uniform(float(parts[1]), float(parts[2])))
        elif kind == "normal":
            components.append(Normal(float(parts[1]), float(parts[2])))
        elif kind == "dependent-uniform":
            try:
                ref = names.index(parts[1])
            except ValueError:
                raise ConfigError(f"dependent-uniform references unknown axis {parts[1]!r}")
            components.append(DependentUniform(ref))
        else:
            raise ConfigError(f"unknown prior component kind {kind!r}")
    return Prior(components, names=tuple(names))


_SCHEDULE_KEYS = {"kind", "eps1", "m", "levels", "eps_last", "thresholds"}
_INT_FIELDS = {
    "seed",
    "replications",
    "budget_cap",
    "n",
    "n_steps",
    "n_particles",
    "n_finest",
    "trials",
    "min_samples",
    "burn_in",
    "sis_s0",
    "sis_i0",
    "tb_max_infections",
    "tb_subsample",
    "reference_samples",
    "reference_seed",
}
_FLOAT_FIELDS = {"target_rmse"}


def config_from_flat(flat: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from a flat dotted-key dict."""
    kwargs = {}
    schedule = {}
    lattice = {}
    for key, value in flat.items():
        if key.startswith("schedule."):
            sub = key.split(".", 1)[1]
            if sub not in _SCHEDULE_KEYS:
                raise ConfigError(f"unknown schedule key {sub!r}")
            schedule[sub] = value
        elif key.startswith("lattice."):
            lattice[key.split(".", 1)[1]] = value
        elif key.startswith("prior."):
            kwargs.setdefault("prior_spec", []).append(
                (key.split(".", 1)[1], str(value))
            )
        elif key.startswith("sampler."):
            sub = key.split(".", 1)[1]
            kwargs[{"id": "sampler"}.get(sub, sub)] = value
        elif key in ("model", "out_dir", "data_path", "reference_path", "kernel", "sampler"):
            kwargs[key] = value
        elif key in _INT_FIELDS or key in _FLOAT_FIELDS:
            kwargs[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")
    if schedule:
        kwargs["schedule"] = schedule
    if lattice:
        ranges = []
        for axis_name in sorted(lattice, key=lambda k: str(k)):
            parts = _as_list(lattice[axis_name])
            if len(parts) != 3:
                raise ConfigError(f"lattice.{axis_name} needs 'lo, hi, nodes'")
            ranges.append((float(parts[0]), float(parts[1]), int(parts[2])))
        kwargs["lattice_ranges"] = ranges
    for key in list(kwargs):
        if key in _INT_FIELDS and kwargs[key] is not None:
            kwargs[key] = int(float(kwargs[key]))
        elif key in _FLOAT_FIELDS and kwargs[key] is not None:
            value = kwargs[key]
            kwargs[key] = None if str(value).lower() == "none" else float(value)
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_flat(parse_config_text(fh.read()))

from .config import ExperimentConfig, expand_schedule, load_config, parse_config_text
from .metrics import SlopeFit, coupling_bias, fit_convergence_slope, rmse_linf, sup_distance
from .presets import PRESET_NAMES, run_preset
from .reference import build_reference
from .runner import RunReport, run_experiment, run_replication

__all__ = [
    "ExperimentConfig",
    "expand_schedule",
    "load_config",
    "parse_config_text",
    "SlopeFit",
    "coupling_bias",
    "fit_convergence_slope",
    "rmse_linf",
    "sup_distance",
    "PRESET_NAMES",
    "run_preset",
    "build_reference",
    "RunReport",
    "run_experiment",
    "run_replication",
]

"""Identification of delay differential equations from trajectory samples."""

from ._core import (
    ConfigError,
    Dataset,
    InsufficientDataError,
    benchmark_config,
    benchmark_keys,
    brute_force,
    cheb_nodes,
    diff_matrix,
    esindy_objective,
    generate,
    list_models,
    particle_swarm,
    psindy_objective,
    reset_sindy_calls,
    run_experiment_file,
    run_experiment_json,
    sindy_calls,
    stlsq,
)

__all__ = [
    "ConfigError",
    "Dataset",
    "InsufficientDataError",
    "benchmark_config",
    "benchmark_keys",
    "brute_force",
    "cheb_nodes",
    "diff_matrix",
    "esindy_objective",
    "generate",
    "list_models",
    "particle_swarm",
    "psindy_objective",
    "reset_sindy_calls",
    "run_experiment_file",
    "run_experiment_json",
    "sindy_calls",
    "stlsq",
]

__version__ = "0.1.0"

"""Generative networks trained by minimizing the unbiased MMD statistic."""

from ._mmdnet import (
    Generator,
    epsilon_bound,
    finite_theta_epsilon,
    finite_theta_failure_prob,
    gram,
    kde_mean_log_density,
    kde_select_bandwidth,
    kernel,
    load_checkpoint,
    make_affine,
    make_mlp,
    median_heuristic,
    mmd_cost,
    mmd_cost_grad,
    mmd_u2,
    population_mmd_gaussian,
    rate,
    theorem3_tail,
    train,
)

__all__ = [
    "Generator",
    "epsilon_bound",
    "finite_theta_epsilon",
    "finite_theta_failure_prob",
    "gram",
    "kde_mean_log_density",
    "kde_select_bandwidth",
    "kernel",
    "load_checkpoint",
    "make_affine",
    "make_mlp",
    "median_heuristic",
    "mmd_cost",
    "mmd_cost_grad",
    "mmd_u2",
    "population_mmd_gaussian",
    "rate",
    "theorem3_tail",
    "train",
]

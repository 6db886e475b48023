"""Numerics laboratory: sharp martingale-subordination constants, Bellman
surfaces with Monge-Ampère degeneracy, Hessian sum-of-squares certificates,
and Monte Carlo inequality experiments."""

from ._core import (
    burkholder_constants,
    certificate_p3,
    closed_p3_minus,
    closed_p3_plus,
    decompose_form,
    eval_bellman,
    experiment,
    laguerre_eval,
    laguerre_solve,
    pogorelov,
    solve_t,
    tau_condition_min_slack,
    transform_lemmas,
)

__version__ = "1.0.0"

__all__ = [
    "burkholder_constants",
    "certificate_p3",
    "closed_p3_minus",
    "closed_p3_plus",
    "decompose_form",
    "eval_bellman",
    "experiment",
    "laguerre_eval",
    "laguerre_solve",
    "pogorelov",
    "solve_t",
    "tau_condition_min_slack",
    "transform_lemmas",
    "__version__",
]

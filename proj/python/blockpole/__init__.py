"""Block pole placement toolkit.

Thin Python facade over the C++ core: 2-DOF gain synthesis by block pole
placement, robustness analytics, linear closed-loop simulation, and the
bank-to-turn missile case study model.
"""

from ._core import (
    design_2dof,
    eigen_sensitivities,
    latent_roots,
    matrix_norms,
    missile_linearize,
    missile_model,
    perturbed_spectrum,
    reference_gains,
    reference_perturbation,
    stability_measures,
    step_response,
    time_specs,
    tracking_error,
)

__all__ = [
    "design_2dof",
    "eigen_sensitivities",
    "latent_roots",
    "matrix_norms",
    "missile_linearize",
    "missile_model",
    "perturbed_spectrum",
    "reference_gains",
    "reference_perturbation",
    "stability_measures",
    "step_response",
    "time_specs",
    "tracking_error",
]

__version__ = "0.1.0"

"""Special geodesics, the j-map and the real modular curves Z_N(R)."""

from ._core import (
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    PreconditionError,
    PrecisionError,
    algtest,
    classes,
    fundamental_automorph,
    invert_j,
    j,
    lemniscate_residual,
    modular_lambda,
    pell_min,
    phi_coefficients,
    run_cli,
)

__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_VERIFY_FAILED",
    "PreconditionError",
    "PrecisionError",
    "algtest",
    "classes",
    "fundamental_automorph",
    "invert_j",
    "j",
    "lemniscate_residual",
    "modular_lambda",
    "pell_min",
    "phi_coefficients",
    "run_cli",
]

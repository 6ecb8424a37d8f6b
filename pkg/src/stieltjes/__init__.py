"""Stieltjes constants at arbitrary precision, with saddle-point asymptotics."""
from .asymptotics import (
    gamma_asymptotic,
    gamma_asymptotic_refined,
    parse_n_spec,
    phase,
    sign_gamma,
)
from .finite_diff import a_coefficients, gamma_exact, gamma_exact_many
from .mp_core import PrecisionContext
from .saddle import lambert_w, saddle_closed, saddle_for_n, saddle_refine
from .zeta import phi, zeta

__all__ = [
    "PrecisionContext",
    "a_coefficients",
    "gamma_asymptotic",
    "gamma_asymptotic_refined",
    "gamma_exact",
    "gamma_exact_many",
    "lambert_w",
    "parse_n_spec",
    "phase",
    "phi",
    "saddle_closed",
    "saddle_for_n",
    "saddle_refine",
    "sign_gamma",
    "zeta",
]

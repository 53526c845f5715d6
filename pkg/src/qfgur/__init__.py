"""Majorization-based uncertainty bounds as steering and entanglement witnesses."""

__version__ = "0.1.0"

from .bounds import (
    bound_report,
    entanglement_bound,
    rutkowski_bound,
    s_sequence,
    spectrum_weighted_s,
    steering_bound,
    subset_norm,
    w_vector,
)
from .core import (
    Assemblage,
    DensityState,
    Measurement,
    MeasurementSet,
    conditional_assemblage,
    make_povm,
    make_projective_measurement,
    werner_state,
)
from .errors import QfgurError
from .families import builtin_set, fig2_family, gellmann_148, pauli_zx
from .functionals import linear_steering_bound, witness, zeta_quantum, zeta_separable
from .kernels import BACKEND

__all__ = [
    "Assemblage",
    "BACKEND",
    "DensityState",
    "Measurement",
    "MeasurementSet",
    "QfgurError",
    "bound_report",
    "builtin_set",
    "conditional_assemblage",
    "entanglement_bound",
    "fig2_family",
    "gellmann_148",
    "linear_steering_bound",
    "make_povm",
    "make_projective_measurement",
    "pauli_zx",
    "rutkowski_bound",
    "s_sequence",
    "spectrum_weighted_s",
    "steering_bound",
    "subset_norm",
    "w_vector",
    "werner_state",
    "witness",
    "zeta_quantum",
    "zeta_separable",
]

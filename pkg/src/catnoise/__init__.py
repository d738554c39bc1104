"""Entanglement of GHZ states under independent single-qubit Pauli noise."""

from .algebra import CatCoefficients, CutSpec, LogValue, cat_populations, count_k_group, delta, two_lambda
from .channel import DerivedParams, PauliChannel, derive_params, preset, validate_channel
from .criteria import (
    Verdict,
    asymptotic_report,
    cut_verdict,
    finite_n_condition,
    fixed_group_size_limit,
    max_distillable_M,
    min_entangled_k,
    parity_probe,
)

__version__ = "0.1.0"

"""Finite-dimensional uncertainty principles.

Annihilating-pair constants for two bases, uncertainty bounds for the
Fourier and short-time Fourier transforms on finite abelian groups,
restricted isometry estimates and l1 recovery experiments.
"""
from .annihilation import (
    AnnihilationReport,
    SupportSet,
    annihilation_report,
    exact_constant_bracket,
    refined_constant,
    theorem_a_constant,
)
from .bases import Basis, coherence, dual_basis, fourier_basis, riesz_bounds, standard_basis
from .groups import GroupSpec, character, dft, dft_product, idft
from .kernels import BACKEND
from . import stft  # the submodule; the transform itself is stft.stft
from .stft import stft_inverse, tf_shift

__version__ = "0.1.0"

__all__ = [
    "AnnihilationReport",
    "BACKEND",
    "Basis",
    "GroupSpec",
    "SupportSet",
    "annihilation_report",
    "character",
    "coherence",
    "dft",
    "dft_product",
    "dual_basis",
    "exact_constant_bracket",
    "fourier_basis",
    "idft",
    "refined_constant",
    "riesz_bounds",
    "standard_basis",
    "stft",
    "stft_inverse",
    "tf_shift",
    "theorem_a_constant",
]

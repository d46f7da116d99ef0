"""Unitarily invariant norm machinery and a verification harness for block-matrix norm inequalities."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    ConfigError,
    ConvergenceError,
    DigestError,
    DimensionError,
    GenerationError,
    NonFiniteError,
    NotHermitianError,
    NotPSDError,
    UINormsError,
)
from .matrix import adjoint, add, as_matrix, assemble, direct_sum, multiply, pad_top_left, scale  # noqa: E402
from .norms import DominanceVerdict, NormFamily, dominates_all_ui_norms, norm_eval, weakly_majorizes  # noqa: E402
from .spectral import hermitian_eig, is_psd, matrix_abs, psd_sqrt, singular_values  # noqa: E402

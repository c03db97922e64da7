"""Tail-energy bounds and concentration-ranked bases for half-sample shifts.

The package computes discrete prolate spheroidal sequence (DPSS) sets, applies
band-limited fractional shifts to index-limited sequences, evaluates exact and
bounded leakage (tail) energies, and constructs the orthonormal basis whose
members are ordered by energy concentration after a half-sample shift.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    CoeffVector,
    UpsampledTailBound,
    dpss_coeffs,
    tail_bound,
    tail_equality,
    upsampled_tail_bound,
)
from .concentration import (
    ConcentrationReport,
    MatrixFormCheck,
    OptimalSequenceResult,
    RankedBasis,
    concentration,
    matrix_form_check,
    optimal_sequence,
    ranked_basis,
    sample_concentrations,
)
from .dpss_core import (
    DEFAULT_MAX_LENGTH,
    DpssParams,
    DpssSet,
    FlipPairingResiduals,
    OrthoBasis,
    compute_dpss,
    dpss_diagnostics,
    even_subsample_basis,
    flip_pairing_report,
    kernel_matrix,
)
from .errors import (
    FamilyMismatchError,
    HorizonExceededError,
    NumericalFaultError,
    SizeLimitError,
)
from .fracshift import (
    Sequence,
    ShiftSpec,
    TailWindow,
    TruncatedTailEnergy,
    apply_shift,
    random_unit_sequence,
    tail_energy_exact,
    tail_energy_truncated,
    total_energy,
    upsample2,
    window_energy,
)
from .verify import CHECK_IDS, ReportRow, RunConfig, all_passed, run_verification

__all__ = [
    "__version__",
    "DEFAULT_MAX_LENGTH",
    "CHECK_IDS",
    "BoundReport",
    "CoeffVector",
    "ConcentrationReport",
    "DpssParams",
    "DpssSet",
    "FamilyMismatchError",
    "FlipPairingResiduals",
    "HorizonExceededError",
    "MatrixFormCheck",
    "NumericalFaultError",
    "OptimalSequenceResult",
    "OrthoBasis",
    "RankedBasis",
    "ReportRow",
    "RunConfig",
    "Sequence",
    "ShiftSpec",
    "SizeLimitError",
    "TailWindow",
    "TruncatedTailEnergy",
    "UpsampledTailBound",
    "all_passed",
    "apply_shift",
    "compute_dpss",
    "concentration",
    "dpss_coeffs",
    "dpss_diagnostics",
    "even_subsample_basis",
    "flip_pairing_report",
    "kernel_matrix",
    "matrix_form_check",
    "optimal_sequence",
    "random_unit_sequence",
    "ranked_basis",
    "run_verification",
    "sample_concentrations",
    "tail_bound",
    "tail_energy_exact",
    "tail_energy_truncated",
    "tail_equality",
    "total_energy",
    "upsample2",
    "upsampled_tail_bound",
    "window_energy",
]

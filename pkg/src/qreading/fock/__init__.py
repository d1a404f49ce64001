"""Brute-force truncated Fock-space oracle.

Dense matrices in the number basis are used to check, independently of the
Gaussian formulas, the loss-channel identities and the homodyne statistics
that the reading model relies on.
"""

from .density import (
    DensityMatrix,
    apply_unitary,
    loss_channel,
    number_energy,
    partial_trace,
    tensor,
    trace_distance,
)
from .homodyne import ScaleFit, hermite_functions, homodyne_pdf_fock, mean_scale_fit, moment_fit
from .operators import (
    FockVector,
    annihilation,
    beamsplitter,
    creation,
    default_dim,
    displacement,
    matrix_exp,
    number_operator,
    phase_shifter,
    squeezed_coherent_vector,
    squeezing,
)
from .verify import (
    BeamSplitter,
    PhaseShifter,
    decomposition_parameters,
    random_probes,
    verify_bs_decomposition,
    verify_commutation,
    verify_composition,
)

__all__ = [
    "DensityMatrix",
    "apply_unitary",
    "loss_channel",
    "number_energy",
    "partial_trace",
    "tensor",
    "trace_distance",
    "ScaleFit",
    "hermite_functions",
    "homodyne_pdf_fock",
    "mean_scale_fit",
    "moment_fit",
    "FockVector",
    "annihilation",
    "beamsplitter",
    "creation",
    "default_dim",
    "displacement",
    "matrix_exp",
    "number_operator",
    "phase_shifter",
    "squeezed_coherent_vector",
    "squeezing",
    "BeamSplitter",
    "PhaseShifter",
    "decomposition_parameters",
    "random_probes",
    "verify_bs_decomposition",
    "verify_commutation",
    "verify_composition",
]

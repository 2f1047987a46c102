"""Reduced-order modeling of LTI systems from offline transfer-function samples.

Quadrature over pre-recorded frequency-response or impulse-response data
yields transfer-function samples (and derivatives) at arbitrary admissible
points; those samples feed tangential-interpolation reductions: the Loewner
framework, one-shot pseudo-optimal reduction, and the H2-optimal fixed-point
iteration, all runnable without further access to the original system.
"""

from . import errors
from .irka import (
    IrkaConfig,
    IrkaTrace,
    SurrogateSide,
    TerminationReason,
    error_surrogate,
    init_shifts,
    irka_step,
    run_irka,
    verify_h2_optimality,
)
from .loewner import (
    InterpolationReport,
    LoewnerPencil,
    SampleSet,
    TangentialData,
    build_pencil,
    conjugate_pairing,
    lf_rom,
    realify_rom,
    verify_interpolation,
)
from .lti import (
    ComplexROM,
    Domain,
    PoleResidueForm,
    StateSpaceModel,
    eig_dense,
    eval_tf,
    eval_tf_derivative,
    h2_error,
    h2_norm,
    impulse_response,
    pole_residue,
    solve_dense,
)
from .pork import PorkGramian, gramian_ps, gramian_qs, pork_input, pork_output
from .sampling import (
    ExactSampler,
    FqlfSampler,
    FrequencyResponseData,
    ImpulseResponseData,
    TqlfSampler,
    build_sample_set,
    derivative_samples,
    dt_fqlf_left_samples,
    dt_fqlf_right_samples,
    dt_impulse_left_samples,
    dt_impulse_right_samples,
    fqlf_left_samples,
    fqlf_right_samples,
    tqlf_left_samples,
    tqlf_right_samples,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexROM", "Domain", "ExactSampler", "FqlfSampler", "FrequencyResponseData",
    "ImpulseResponseData", "InterpolationReport", "IrkaConfig", "IrkaTrace",
    "LoewnerPencil", "PoleResidueForm", "PorkGramian", "SampleSet", "StateSpaceModel",
    "SurrogateSide", "TangentialData", "TerminationReason", "TqlfSampler",
    "build_pencil", "build_sample_set", "conjugate_pairing", "derivative_samples",
    "dt_fqlf_left_samples", "dt_fqlf_right_samples", "dt_impulse_left_samples",
    "dt_impulse_right_samples", "eig_dense", "error_surrogate", "errors", "eval_tf",
    "eval_tf_derivative", "fqlf_left_samples", "fqlf_right_samples", "gramian_ps",
    "gramian_qs", "h2_error", "h2_norm", "impulse_response", "init_shifts",
    "irka_step", "lf_rom", "pole_residue", "pork_input", "pork_output", "realify_rom",
    "run_irka", "solve_dense", "tqlf_left_samples", "tqlf_right_samples",
    "verify_h2_optimality", "verify_interpolation",
]

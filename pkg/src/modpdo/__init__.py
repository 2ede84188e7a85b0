"""Numerical pseudodifferential calculus with matrix-algebra-valued symbols.

Sampled functions into the k x k matrix algebra form a Hilbert module
under the algebra-valued inner product; on top of that live the unitary
Fourier transform, the quantization of phase-space symbols with its
derivative-seminorm operator bound, the skew-matrix deformed product with
its left/right regular representations, and the Heisenberg action with
the commutant fingerprint.  The ``scenarios`` module packages every
verified property as a reproducible, seeded verification run.
"""

from .algebra import approximate_unit, cstar_norm, involution, random_element
from .deformation import (
    DeformationMatrix,
    approximate_identity,
    commutator_apply,
    deformed_product,
    deformed_product_direct,
    left_rep_apply,
    left_symbol,
    right_rep_apply,
    right_symbol,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    GridMismatchError,
    InvalidInputError,
    ResolutionError,
)
from .fourier import fourier, inverse_fourier, modulate, spectral_shift, translate
from .grids import (
    GridSpec,
    ModuleFunction,
    SampledSymbol,
    check_decay,
    grids_equal,
    l2_norm,
    module_inner,
    module_norm,
    pointwise_norms,
)
from .heisenberg import (
    OperatorHandle,
    commutant_fingerprint,
    conjugate_operator,
    displaced_symbol,
    displacement_law_deviation,
    heisenberg_translate,
    heisenberg_translate_inverse,
    smoothness_probe,
)
from .quantize import (
    adjoint_symbol,
    cutoff_family,
    cutoff_profile,
    cv_ratio_trials,
    lift_symbol,
    mixed_derivative_orders,
    mixed_derivative_seminorm,
    operator_norm_estimate,
    phase_space_mass,
    quantize_apply,
    quantize_apply_direct,
    reconstruct_symbol,
    windowed_transform,
)
from .report import Metric, VerificationReport, emit_report, report_from_dict, report_to_dict
from .rng import SplitMix
from .scenarios import SCENARIOS, ScenarioConfig, default_config, run_scenario
from .serialize import function_from_dict, function_to_dict, symbol_from_dict, symbol_to_dict
from .testfns import make_test_function, make_test_symbol

__version__ = "0.1.0"

"""Spectral and boundary-observability computations for the strain-gradient cantilever.

The free beam obeys w_tt + w_xxxx - zeta w_xxxxxx = 0 on [0, 1], clamped at
x = 0 (w = w_x = w_xx = 0) and free at x = 1.
"""

from .charpoly import CharRoots, asymptotic_roots, critical_lambda, roots
from .errors import BeamError
from .model import BeamParams, EnergySnapshot, MaterialParams, energy, nondimensionalize, params_from_config
from .modes import (
    GreensSolve,
    Mode,
    boundary_identities,
    evaluate_mode,
    gram_matrix,
    greens_apply,
    mode_coefficients,
    normalize,
)
from .observability import (
    LiftedMode,
    ObservationReport,
    classify,
    observability_constants,
    observe_mode,
    observe_values,
)
from .quadrature import DEFAULT_RULE, QuadratureRule
from .simulate import (
    ModalState,
    OutputSeries,
    energy_trace,
    evolve,
    multiplier_identity_check,
    observability_check,
    output_series,
    project_initial,
    random_state,
)
from .spectrum import (
    AsymptoticCharEq,
    BoundaryMatrix,
    SpectralBasis,
    asymptotic_seed,
    boundary_matrix,
    char_det,
    compute_spectrum,
    gap_profile,
)

__version__ = "0.1.0"

"""Discrete Wigner functions on a doubled half-integer phase-space grid."""
from .algebra import (
    MonomialCoefficients,
    PhaseExponent,
    WeylMonomial,
    build_clock_shift,
    decompose,
    monomial,
    omega_pow,
    reconstruct,
)
from .estimator import WignerTransformer
from .fano import (
    FanoGrid,
    HalfPoint,
    build_fano_grid,
    check_covariance,
    check_marginality,
    fano_fourier_closed,
    fano_fourier_via_group,
    leonhardt_reference,
    odd_reduction_reference,
)
from .representation import (
    Family,
    PhaseChoice,
    RepUnitary,
    build_unitary,
    classify_phase_choice,
    coefficients,
    compose_phase,
)
from .sl2z import Sp2ZElement, complete_to_sl2, random_sl2, reduce_point, validate_sl2
from .wigner import (
    DensityMatrix,
    WignerGrid,
    load_state,
    marginals,
    moment_identity,
    reconstruct_density,
    wigner_transform,
)

__version__ = "0.1.0"

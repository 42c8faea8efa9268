"""periodlab: monodromy, homology intersection numbers, symplectic
transforms and Riemann period matrices of plane algebraic curves.

The public API is re-exported here; see the README for an overview.
"""
from .constants import ZETA7, RHO, RHO2, E_PERIOD, MU, NU, R3, ALPHA, BETA, GAMMA
from .errors import (
    PeriodLabError, ParseError, CurveError, ContinuationError,
    CycleValidationError, HomologyError, QuadratureError,
    LinearAlgebraError, TransformError,
)
from .polynomial import BivariatePolynomial, parse_polynomial
from .curve import PlaneCurve, BranchPointSet, MonodromyPermutation
from .cycles import SurfaceCycle, LiftedCycle, lift_cycle, validate_cycle
from .homology import (
    HomologyBasis, SymplecticMatrix, SYMPLECTIC_J,
    intersection_number, intersection_matrix, expand_in_basis,
    find_homology_transform, pushforward_cycle, symmetry_matrix,
)
from .periods import (
    Differential, PeriodData, DifferentialAction,
    integrate_differential, period_matrices, check_riemann_conditions,
    modular_transform, differential_action, riccati_residual, character_check,
)
from . import klein

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

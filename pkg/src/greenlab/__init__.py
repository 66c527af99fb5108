"""greenlab: weighted Green's functions and monotone functionals on
rotationally symmetric weighted manifolds.

The library builds the radial weighted Green's function of a profile
(warping function, potential, dimension), transforms it into the level
function ``b = G**(1/(2-k))``, and evaluates the surface and volume
functionals whose derivative identities and monotonicity predicates the
checker suite machine-verifies.
"""

from .exprcalc import (
    DomainError,
    ExprError,
    Jet2,
    ParseError,
    eval_jet2,
    parse_expression,
    to_source,
)
from .profile import (
    BUILTIN_PROFILES,
    CurvatureSample,
    Profile,
    TailModel,
    builtin_profile,
    check_curvature_nonneg,
    ricci_f_radial,
    validate_profile,
)
from .green import (
    BData,
    ConvergenceError,
    GreenData,
    b_function,
    check_gradient_bound,
    check_pole_asymptotics,
    compute_green,
    invert_b,
)
from .geometry import (
    PointQuantities,
    RadialState,
    bochner_residual,
    delta_f_weighted,
    f_laplacian_radial,
    point_quantities,
    radial_state,
)
from .functionals import (
    Admissibility,
    CurvePoint,
    Params,
    TaggedLimit,
    admissibility,
    area_functional,
    bulk_integral,
    bulk_integral_between,
    curve,
    default_rho_grid,
    h_invariant,
    slope_integral_between,
    small_r_limits,
    sphere_area,
    volume_functional,
)
from .reporting import CheckReport, HypothesisRecord, NumericConfig, format_report
from .theorems import (
    CHECK_IDS,
    BryantReport,
    CheckContext,
    bryant_limit,
    build_context,
    check_identity_AV,
    check_identity_g,
    check_identity_kln,
    check_monotone,
    run_check,
    solve_l_window,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

"""Lorentz meridian surfaces in the neutral-metric 4-space.

Construction of the three meridian-surface families, their closed-form
curvature invariants, the classification-family profiles, and an
independent finite-difference oracle that re-derives every invariant from
the immersion alone.
"""

from . import errors
from .classifier_verifier import (
    GridSpec,
    Instance,
    TheoremCheck,
    build_instance,
    check_parallel_H,
    check_parallel_H0_not_H,
    perturb_instance,
    run_check,
    scan_family_grid,
)
from .meridian_profiles import (
    GaugeKind,
    ProfileCurve,
    ProfileFamily,
    TheoremTag,
    analytic_profile_T5i,
    flat_profile,
    integrate_profile,
    kappa_m,
    phi_closed_form,
    profile_from_f,
    verify_profile_ode,
)
from .meridian_surfaces import (
    FamilyTag,
    MeridianSurface,
    NormalizedMeanCurvature,
    axis_swapped_point,
)
from .numerical_oracle import Immersion, ShapeReport, normal_derivative, shape_report
from .pseudo_linalg import (
    CONGRUENCE_T,
    METRIC_DIAG,
    TAU_NULL,
    CausalCharacter,
    apply_congruence,
    causal_character,
    inner,
)
from .spherical_curves import (
    CurveCase,
    SphericalCurve,
    constant_curvature_curve,
    curve_from_kappa,
    frenet_frame,
    parallel_circle,
)

__version__ = "0.1.0"

"""
omegapy - minimal moduli of continuity of a Cantor-type construction.

A nondecreasing continuous function f on [0, 7] that is not absolutely
continuous, yet whose minimal modulus of continuity is. The package
evaluates f and its companions, computes moduli of continuity (grid
oracle and closed form) and verifies every step numerically.
"""

__version__ = "1.0.0"

from .errors import ConfigError, ConsistencyError, DomainError, OmegaError, PreconditionError
from .real_fn import (
    ALPHA, GALLERY, Interval, Piece, PieceKind, PiecewiseFn, Transform, build_f, build_g,
    build_h, cantor_eval, cantor_exact, cantor_fn, convex_fn, evaluate, f2_eval, f3_eval,
    from_breakpoints, gallery, identity_fn, power_fn, random_piecewise_linear,
)
from .modulus import (
    CriticalSet, ModulusTable, SparseTable, TableSource, boundary_set, concave_majorant,
    critical_set, find_delta_star, grid_error_bound, max_phi_boundary, max_phi_critical,
    modulus_grid, omega_g_closed, omega_g_table, phi, psi,
)
from .analysis import (
    CoverFamily, VerificationReport, ac_profile, check_cantor_symmetry, check_lemma_bounds,
    check_monotone, check_table_invariants, increment_sum, lipschitz_check, run_suite,
    singular_cover, singular_profile, substitute_pair, verify_ac_profile,
    verify_boundary_below_critical, verify_closed_form_candidates, verify_closed_form_continuity,
    verify_concave_majorant, verify_delta_star, verify_h_modulus, verify_lipschitz,
    verify_monotone_shortcut, verify_omega_closed_form, verify_same_modulus,
    verify_self_modulus, verify_singular_covers, verify_substitution,
)

__all__ = [
    "__version__",
    "OmegaError", "DomainError", "PreconditionError", "ConsistencyError", "ConfigError",
    "ALPHA", "GALLERY", "Interval", "Piece", "PieceKind", "PiecewiseFn", "Transform",
    "build_f", "build_g", "build_h", "cantor_eval", "cantor_exact", "cantor_fn", "convex_fn",
    "evaluate", "f2_eval", "f3_eval", "from_breakpoints", "gallery", "identity_fn", "power_fn",
    "random_piecewise_linear",
    "CriticalSet", "ModulusTable", "SparseTable", "TableSource", "boundary_set",
    "concave_majorant", "critical_set", "find_delta_star", "grid_error_bound",
    "max_phi_boundary", "max_phi_critical", "modulus_grid", "omega_g_closed", "omega_g_table",
    "phi", "psi",
    "CoverFamily", "VerificationReport", "ac_profile", "check_cantor_symmetry",
    "check_lemma_bounds", "check_monotone", "check_table_invariants", "increment_sum",
    "lipschitz_check", "run_suite", "singular_cover", "singular_profile", "substitute_pair",
    "verify_ac_profile", "verify_boundary_below_critical", "verify_closed_form_candidates",
    "verify_closed_form_continuity", "verify_concave_majorant", "verify_delta_star",
    "verify_h_modulus", "verify_lipschitz", "verify_monotone_shortcut",
    "verify_omega_closed_form", "verify_same_modulus", "verify_self_modulus",
    "verify_singular_covers", "verify_substitution",
]

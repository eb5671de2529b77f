"""Exact arithmetic for equivariant Stickelberger elements over abelian CM
fields: group rings and their minus quotients, L-value computations by two
independent methods, norm-compatible families with a finite-level lifting
solver, Fitting-ideal machinery, and cofactor identities, all over Q,
Z, and Z/p^k with zero floating point."""

from .bs_matrix import (
    CofactorVector,
    PlaceIndexedMatrix,
    build_u,
    kernel_check,
    ord_identity_check,
)
from .cyclotomic import CycloField, cyclotomic_poly, cyclotomic_value_at_one
from .euler_family import (
    LiftResult,
    NormFamily,
    REElement,
    brute_force_feasible,
    denominator_exponent,
    induce_family,
    is_norm_compatible,
    lift_family,
    re_element,
    verify_lift,
)
from .fitting import (
    GeneralPresentation,
    LocalRWParams,
    QuadraticPresentation,
    det_group_ring,
    det_functoriality_check,
    det_leibniz,
    fitting_ideal,
    ideal_contains_mod_pk,
    ideals_equal_mod_pk,
    lemma_tx_sweep,
    local_rw_presentation,
    verify_lemma_tx,
    zp_content_exponent,
)
from .galois_data import (
    AbelianFieldQ,
    FieldLattice,
    PlaceData,
    SigmaSets,
    UnitGroup,
    build_field,
    cm_subfields,
    dr_condition_check,
    field_surjection,
    max_conductor_bound,
    place_data,
    sigma_sets,
    subfield_lattice,
    torsion_order,
)
from .group_ring import (
    Character,
    FiniteAbelianGroup,
    GroupRingElement,
    GroupSurjection,
    MinusElement,
    MinusRing,
    Q,
    ResidueRing,
    StructuralError,
    UnsupportedError,
    Z,
    char_eval,
    characters,
    fourier_assemble,
    minus_project,
    minus_reduce,
    reduce_element,
)
from .lvalues import (
    EulerFactor,
    MethodDisagreement,
    StickelbergerElement,
    check_st_conversion,
    check_tnorm,
    euler_P,
    euler_Q,
    idempotent_eE,
    theta,
    theta_sigma,
    x_factor,
    y_factor,
)
from .snf import snf_mod_pk, snf_z, solve_mod_pk, solve_z

__version__ = "0.1.0"

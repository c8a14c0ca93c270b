"""Measurement statistics of spin-entangled qubit pairs under basis rotations."""

from spinpair.bloch import (
    BasisSpec,
    BlochAngles,
    SingleQubitState,
    antipode,
    compose_basis_change,
    inverse_rotation,
    rotation_matrix,
    single_delta_p,
    single_measure_probs,
    single_visibility,
    spin_cone_angle,
    state_from_angles,
)
from spinpair.correlations import (
    CriterionReport,
    JointProbs,
    NoRealSolution,
    check_plus_preserving,
    check_plus_to_minus,
    check_singlet,
    check_triplet,
    correlation_summary,
    equal_weight_basis,
    joint_probs,
    local_probs,
    pair_visibility,
    probs_minus,
    probs_mixed,
    probs_plus,
)
from spinpair.pairstate import (
    PairKind,
    PairState,
    TwoQubitVector,
    decompose_coupled,
    epsilon,
    make_pair,
    rewrite_minus,
    rewrite_mixed,
    rewrite_plus,
    singlet,
    to_general,
)

__version__ = "0.1.0"

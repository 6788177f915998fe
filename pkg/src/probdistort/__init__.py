"""Distortion functions on finite probability simplices.

Core objects: beliefs over labeled state spaces, the weight-and-power
distortion family, checkers for commutation with conditioning (over states,
signals, and joint state-signal matrices), KL-regularized motivated
beliefs, act evaluation with dynamic-consistency testing, and iterate
dynamics with closed-form limits.  A command-line runner (`probdistort`)
executes JSON scenario files; see the README.
"""

from .core import (
    DEFAULT_TOL,
    SUM_TOL,
    Belief,
    Event,
    Partition,
    StateSpace,
    belief,
    belief_distance,
    condition,
    event_prob,
    point_mass,
    sample_belief,
    uniform_belief,
)
from .distortion import (
    CoherenceReport,
    DistortionFn,
    PowerWeighted,
    additive_smoothing,
    apply_power_weighted,
    check_coherence,
    check_pi_marginality,
    check_ratio_test_alpha1,
    commutation_gap,
    identify_power,
    identify_weights,
    identity_distortion,
    odds_squash,
    quadratic_tilt,
    support_softmax,
    uniform_mixture,
)
from .dynamics import (
    LimitClassification,
    check_idempotence,
    enumerate_fixed_points,
    is_identity_params,
    iterate,
    limit_belief,
    verify_limit_numerically,
    weight_level_sets,
)
from .errors import (
    MarginalityViolation,
    NoConvergence,
    NonPositiveOutput,
    ProbDistortError,
    SignalSpaceTooLarge,
    SpaceTooSmall,
    StateSpaceTooLarge,
    ZeroProbabilityEvent,
    ZeroProbabilitySignal,
)
from .joint import (
    JointDistortion,
    JointDistribution,
    SignalEvent,
    WeightedGS,
    apply_weighted_gs,
    build_remark1_distortion,
    check_marginality,
    check_strong_signal_coherence,
    check_weak_signal_coherence,
    condition_on_signal_event,
    full_matrix_form_applies,
    induced_marginal_distortion,
    joint_distribution,
    power_joint_distortion,
    signal_marginal,
    signal_marginal_varphi,
    state_marginal,
    strong_family_varphi,
)
from .prefs import (
    Act,
    DutchBook,
    Lottery,
    MotivatedProblem,
    WeightFunction,
    act_value,
    check_dynamic_consistency,
    check_weak_continuity_alpha1,
    construct_dutch_book,
    distort_lottery,
    find_allais_config,
    merge_gap,
    solve_motivated_closed_form,
    solve_motivated_numerical,
    splice,
    weighted_utility,
)
from .signals import (
    BlackwellDistortion,
    BlackwellExperiment,
    GretherSpec,
    SignalSpace,
    bayes_posterior,
    check_blackwell_signal_coherence,
    check_gretherian_coherence,
    grether_update,
    normalized_grether_check,
    vec_additive_smoothing,
    vec_identity,
    vec_power_weighted,
    vec_scaled_power,
)

__version__ = "0.1.0"

"""Exact and simulated mutual affinity, learning capacity and risk gaps of small learning machines."""

from .affinity import (
    JointPmf,
    bayes_error,
    information_of_event,
    mutual_affinity,
    mutual_affinity_given_x,
    mutual_affinity_given_y,
    mutual_information,
)
from .capacity import (
    CapacityReport,
    EntropyBounds,
    bernoulli_affinity_closed,
    binomial_md_closed,
    capacity_search,
    classification_bound,
    de_moivre_mad,
    deterministic_capacity_asymptotic,
    entropy_capacity_bounds,
    lazy_affinity,
    machine_affinity,
    majority_affinity_closed,
    randomized_capacity_closed,
    sqrt_law_bound,
)
from .errors import BudgetExceededError, DimensionError
from .machines import (
    LearningMachine,
    TypeVector,
    count_types,
    enumerate_types,
    joint_type_h,
    joint_ztrn_h,
    make_constant_machine,
    make_empirical_average_machine,
    make_lazy_learner,
    make_majority_machine,
    make_randomized_label_machine,
    make_tabular_machine,
    post_process,
)
from .montecarlo import McConfig, McRecord, McResult, simulate_majority, simulate_randomized_classifier
from .pmf import (
    Lemma1State,
    Pmf,
    effective_support,
    geometric_pmf,
    kl_divergence,
    lemma1_product,
    shannon_entropy,
    similarity,
    tv_distance,
    tv_distance_l1,
)
from .risk import (
    LossTable,
    empirical_risk,
    hoeffding_affinity_bound,
    majority_vote_loss,
    misclassification_loss,
    risk_gap,
    risk_gap_check,
    tight_loss,
    true_risk,
)
from .stability import (
    StabilityReport,
    collision_lower_bound,
    distribution_free_stability,
    stability_report,
    stability_s,
)

__version__ = "0.1.0"

"""Minimal modification of input pattern matrices for strong structural controllability."""

from .controllability import (
    CostBreakdown,
    FeasibilityReport,
    ModificationResult,
    SscVerdict,
    cost,
    feasibility_report,
    is_feasible_member,
    is_ssc,
    white_index_set,
)
from .greedy import GreedyState, greedy_modify, greedy_step
from .mcmc import (
    McmcParams,
    McmcTrace,
    acceptance_probability,
    mcmc_modify,
    neighborhood_size,
    propose,
    t_stop_bound,
    transition_matrix,
)
from .oracle import (
    InstanceSpec,
    OracleResult,
    brute_force_optimal,
    erdos_renyi_instance,
    kalman_controllable,
    worst_case_instance,
)
from .pattern import (
    Entry,
    PatternMatrix,
    StructuredSystem,
    hamming_dist,
    hstack,
    member_check,
    parse_pattern,
    parse_system,
    q_transform,
    sample_realization,
)
from .zero_forcing import (
    ColorChangeResult,
    color_change,
    diagonal_witness,
    is_full_row_rank,
    is_zero_forcing_set,
    joint_zero_forcing_number,
    zero_forcing_number,
)

__version__ = "0.1.0"

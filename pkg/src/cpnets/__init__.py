"""Learning, teaching, and elicitation toolkit for bounded acyclic CP-nets."""

from .core import (
    BudgetExceeded,
    ClassSpec,
    Completeness,
    CpNet,
    Cpt,
    NotASwap,
    SwapInstance,
    canonical_swap,
    complement,
    complete_extension,
    dominates,
    evaluate_swap,
    induced_preference_graph,
    instance_space,
    is_consistent,
    max_edges,
    max_size,
    net_from_dict,
    net_from_json,
    net_to_dict,
    net_to_json,
    subsumes,
)
from .universal import (
    UniversalSet,
    construct_minimal,
    construct_product,
    is_universal,
)
from .classes import (
    ConceptClass,
    DomainError,
    enumerate_class,
    kz_lower_bound,
    rtd,
    shatters,
    structural_report,
    td,
    td_class,
    td_min,
    vcd,
)
from .teaching import (
    ConflictPair,
    NotMaximal,
    TeachingSet,
    teaching_set_incomplete,
    teaching_set_maximal,
    teaching_set_universal,
    verify_teaching_set,
)
from .oracles import (
    CorruptionMode,
    CorruptionSet,
    InfeasibleParameters,
    OracleAnswer,
    OracleKind,
    OracleSession,
    f_ball,
    hopeless_corruption_set,
    sample_corruption_set,
)
from .learners import (
    LearnResult,
    MajorityTie,
    NoParentFound,
    OracleContradiction,
    RobustOracle,
    RobustStrategy,
    UniversalSetTooWeak,
    find_parent,
    learn_kbounded_complete,
    learn_kbounded_incomplete,
    learn_tree_complete,
    learn_tree_incomplete,
    learn_with_corruption,
    robust_answer,
)

__all__ = [name for name in dir() if not name.startswith("_")]

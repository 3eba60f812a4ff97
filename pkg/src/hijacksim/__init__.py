"""Interdomain routing-policy simulation and traffic-attraction analysis.

The package models the Internet as a policy-annotated AS graph, simulates
route propagation to a fixpoint under the standard commercial preference
rules, evaluates hijack/interception attempts by a manipulator with a
chosen cheating capability, searches for attack strategies, and generates
satisfiability-reduction instances on which those searches are validated
end to end.
"""

from .errors import (
    DegreeBoundError,
    FixtureError,
    FormulaError,
    GraphError,
    HijacksimError,
    MissingEdgeError,
    NonConvergenceError,
    NotAdjacentError,
    PathError,
    RoleError,
    SimulationError,
    StrategyError,
)
from .graph import (
    ASGraph,
    CUSTOMER,
    PEER,
    PROVIDER,
    best_class_reach,
    edge_class,
    format_graph,
    is_valley_free,
    parse_graph,
    path_class,
    valley_free_paths,
    validate_graph,
    vf_class_to,
)
from .routing import (
    RoutingState,
    baseline_available,
    export_allowed,
    preference_less,
    simulate,
)
from .attacks import (
    AttackOutcome,
    AttackStrategy,
    ORIGIN_SPOOFING,
    PLAIN,
    SBGP,
    Trace,
    check_legal,
    evaluate,
    interception_route,
    strategy_from_json,
    strategy_to_json,
    trace_data_plane,
)
from .finders import (
    FinderResult,
    find_origin_spoofing,
    find_sbgp_bruteforce,
    oracle_origin_spoofing,
)
from .gadgets import (
    CnfFormula,
    GadgetInstance,
    format_dimacs,
    gen_gadget_origin,
    gen_gadget_sbgp,
    parse_dimacs,
    sat_bruteforce,
)
from .instances import FIXTURES, RandomSpec, fixture, gen_random

__all__ = [name for name in dir() if not name.startswith("_")]

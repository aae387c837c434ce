"""imclim: limit-behaviour analysis for upper transition operators.

The package models the one-step dynamics of a finite-state imprecise Markov
chain as an upper transition operator and decides -- exactly, for finitely
generated operators -- whether every orbit of the operator converges.  A
numerical orbit engine provides the independent cross-check behind every
symbolic verdict.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionMismatchError,
    ImclimError,
    InternalInvariantError,
    ModelValidationError,
    NotWellDefinedError,
    PreconditionError,
    UnsupportedOperatorError,
)
from .operators import (
    BUILTIN_OPERATORS,
    CounterexampleOperator,
    CredalFamily,
    CredalOperator,
    Pmf,
    StateSpace,
    UpperOperator,
    identity_operator,
    onehot,
    validate_family,
)
from .graphs import (
    AccessGraph,
    ClassInfo,
    build_graph,
    communication_classes,
    cyclicity,
    is_closed,
    regularity_oracle,
    to_dot,
)
from .reachability import (
    StatePartition,
    is_absorbing,
    lower_reach_set,
    partition_states,
)
from .restriction import (
    RestrictedOperator,
    nested_restriction_check,
    restrict_family,
    restrict_to_maximal,
    restrict_to_nonabs,
)
from .decomposition import (
    Decomposition,
    LevelRecord,
    LimitBoundCheck,
    SingleClassReport,
    Verdict,
    Witness,
    decide_convergence,
    decide_convergence_on_xm,
    decide_ergodicity,
    decompose,
    single_class_equivalence_report,
)
from .orbits import (
    OrbitCheck,
    OrbitComparison,
    OrbitParams,
    OrbitResult,
    default_function_suite,
    iterate_orbit,
    oracle_compare,
    orbit_limit_on_regular_class,
    search_cycle_witness,
)
from .modelio import (
    dump_model,
    family_to_jsonable,
    load_model,
    parse_model,
    parse_rational,
    write_orbit_trace,
)
from .report import AnalysisReport, analyze

__all__ = [
    "__version__",
    # errors
    "ImclimError",
    "ModelValidationError",
    "DimensionMismatchError",
    "PreconditionError",
    "NotWellDefinedError",
    "UnsupportedOperatorError",
    "InternalInvariantError",
    # operators
    "StateSpace",
    "Pmf",
    "onehot",
    "CredalFamily",
    "validate_family",
    "UpperOperator",
    "CredalOperator",
    "CounterexampleOperator",
    "identity_operator",
    "BUILTIN_OPERATORS",
    # graphs
    "AccessGraph",
    "ClassInfo",
    "build_graph",
    "communication_classes",
    "cyclicity",
    "is_closed",
    "regularity_oracle",
    "to_dot",
    # reachability
    "StatePartition",
    "lower_reach_set",
    "partition_states",
    "is_absorbing",
    # restriction
    "RestrictedOperator",
    "restrict_family",
    "restrict_to_maximal",
    "restrict_to_nonabs",
    "nested_restriction_check",
    # decomposition
    "Decomposition",
    "LevelRecord",
    "Verdict",
    "Witness",
    "decompose",
    "decide_convergence",
    "decide_convergence_on_xm",
    "decide_ergodicity",
    "single_class_equivalence_report",
    "SingleClassReport",
    "LimitBoundCheck",
    # orbits
    "OrbitParams",
    "OrbitResult",
    "OrbitCheck",
    "OrbitComparison",
    "iterate_orbit",
    "orbit_limit_on_regular_class",
    "oracle_compare",
    "default_function_suite",
    "search_cycle_witness",
    # model io
    "load_model",
    "parse_model",
    "parse_rational",
    "family_to_jsonable",
    "dump_model",
    "write_orbit_trace",
    # report
    "AnalysisReport",
    "analyze",
]

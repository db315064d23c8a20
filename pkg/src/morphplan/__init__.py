"""Morphological configuration modeling and budgeted improvement planning.

Model a system as a tree of components with exclusive alternatives at
the leaves, validate and compare configurations, price candidate change
operations, pick the best affordable set per stage with exact or greedy
multiple-choice knapsack solvers, and chain stages into an improvement
strategy with reproducible reports.
"""

from .changeops import (
    IMPACT_CLASSES,
    ChangeOperation,
    OperationGroup,
    OperationSet,
    apply_operation,
    build_mckp_instance,
    parse_operation_set,
    selected_operations,
    serialize_operation_set,
    validate_operation,
)
from .datasets import (
    ActivityCatalogEntry,
    AuxiliaryFixtures,
    builtin_fixtures,
    builtin_generation,
    builtin_generations,
    builtin_model,
    builtin_operation_sets,
    builtin_reference_results,
    builtin_stage_plans,
    export_datasets,
    run_builtin_example,
    serialize_activities,
)
from .errors import (
    DeltaApplyError,
    InstanceError,
    InvalidConfigurationError,
    MorphplanError,
    PlanError,
    SchemaError,
)
from .mckp import (
    COMPARATORS,
    GreedyStep,
    MckpInstance,
    MckpItem,
    MckpSolution,
    parse_instance,
    parse_solution,
    selection_totals,
    serialize_instance,
    serialize_solution,
    solve_dp,
    solve_exhaustive,
    solve_greedy,
    solve_greedy_with_trace,
    verify_picks,
    verify_solution,
)
from .morphology import (
    Alternative,
    ChangeDelta,
    ComponentTree,
    CompositeNode,
    Configuration,
    LeafComponent,
    apply_deltas,
    configuration_from_alternatives,
    diff_configurations,
    parse_configuration,
    parse_model,
    render_configuration,
    serialize_configuration,
    serialize_model,
    validate_configuration,
)
from .planner import (
    SOLVERS,
    StagePlan,
    StageResult,
    Strategy,
    operation_set_from_plan,
    parse_chain_document,
    plan_chain,
    plan_stage,
    render_report_text,
    render_strategy,
    serialize_chain,
    stage_plan_from_set,
)
from .tenths import format_tenths, parse_tenths

__version__ = "0.1.0"

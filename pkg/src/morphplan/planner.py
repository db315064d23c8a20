"""Multi-stage improvement planning.

A stage bundles grouped change operations with a budget and a solver
choice. Planning a stage solves the knapsack instance built from the
groups and applies the selected operations to the input configuration;
a chain feeds each stage's result into the next and stops at the first
stage that fails. Reports carry every number needed to re-check a run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .changeops import (
    ChangeOperation,
    OperationGroup,
    OperationSet,
    apply_operation,
    build_mckp_instance,
    selected_operations,
    serialize_operation_set,
    validate_operation,
)
from .errors import InstanceError, MorphplanError, PlanError, SchemaError
from .mckp import (
    GreedyStep,
    MckpInstance,
    MckpSolution,
    solve_dp,
    solve_exhaustive,
    solve_greedy_with_trace,
    verify_picks,
    verify_solution,
)
from .morphology import (
    ComponentTree,
    Configuration,
    render_configuration,
    validate_configuration,
)
from .tenths import format_tenths

SOLVERS = ("greedy", "dp", "exhaustive")


@dataclass(frozen=True)
class StagePlan:
    """One stage's operations, budget, and solver choice.

    result_id names the configuration the stage produces;
    reference_selection is an externally claimed selection (operation
    ids) audited against the computed one in the stage report.
    """

    stage_id: str
    groups: tuple[OperationGroup, ...]
    budget: int
    comparator: str = "inclusive"
    solver: str = "dp"
    result_id: str | None = None
    reference_selection: tuple[str, ...] = ()


def stage_plan_from_set(opset: OperationSet, solver: str = "dp") -> StagePlan:
    return StagePlan(
        stage_id=opset.stage_id,
        groups=opset.groups,
        budget=opset.budget,
        comparator=opset.comparator,
        solver=solver,
        result_id=opset.result_id,
        reference_selection=opset.reference_selection,
    )


def operation_set_from_plan(plan: StagePlan) -> OperationSet:
    return OperationSet(
        stage_id=plan.stage_id,
        budget=plan.budget,
        comparator=plan.comparator,
        groups=plan.groups,
        result_id=plan.result_id,
        reference_selection=plan.reference_selection,
    )


@dataclass(frozen=True)
class StageResult:
    stage_id: str
    groups: tuple[OperationGroup, ...]
    instance: MckpInstance
    solution: MckpSolution
    greedy_steps: tuple[GreedyStep, ...] | None
    selected_operations: tuple[ChangeOperation, ...]
    resulting_configuration: Configuration
    annotations: tuple[str, ...]


@dataclass(frozen=True)
class Strategy:
    """A chain of stage results; failure holds the first stage error, if any."""

    initial_configuration: Configuration
    stages: tuple[StageResult, ...]
    final_configuration: Configuration
    failure: str | None = None

    def chain_text(self) -> str:
        names = [self.initial_configuration.id]
        names.extend(stage.resulting_configuration.id for stage in self.stages)
        return " => ".join(names)


def plan_stage(tree: ComponentTree, config: Configuration, plan: StagePlan) -> StageResult:
    """Solve one stage against an input configuration and apply the outcome."""
    findings = validate_configuration(tree, config)
    if findings:
        raise PlanError(
            plan.stage_id,
            f"input configuration {config.id!r} is invalid: {'; '.join(findings)}",
        )
    if plan.solver not in SOLVERS:
        raise PlanError(plan.stage_id, f"unknown solver {plan.solver!r}")
    instance = build_mckp_instance(plan.groups, plan.budget, plan.comparator)
    for group in plan.groups:
        for op in group.operations:
            op_findings = validate_operation(tree, op)
            if op_findings:
                raise PlanError(plan.stage_id, "; ".join(op_findings))
            if not op.is_none_marker:
                held = config.assignment[op.leaf]
                if held != op.from_alt:
                    raise PlanError(
                        plan.stage_id,
                        f"operation {op.id} not applicable: leaf {op.leaf} holds "
                        f"{held}, expected {op.from_alt}",
                    )

    if plan.solver == "greedy":
        solution, steps = solve_greedy_with_trace(instance)
        greedy_steps: tuple[GreedyStep, ...] | None = steps
    elif plan.solver == "dp":
        solution = solve_dp(instance)
        greedy_steps = None
    else:
        solution = solve_exhaustive(instance)
        greedy_steps = None
    solution_findings = verify_solution(instance, solution)
    if solution_findings:
        raise PlanError(
            plan.stage_id, f"solver produced an infeasible solution: {'; '.join(solution_findings)}"
        )

    chosen = selected_operations(plan.groups, solution.selection)
    result = config
    for op in chosen:
        result = apply_operation(result, op)
    result_id = plan.result_id if plan.result_id is not None else f"{config.id}_after_{plan.stage_id}"
    result = Configuration(id=result_id, tree_id=result.tree_id, assignment=result.assignment)

    annotations = _audit_reference(plan, instance, solution, chosen)
    return StageResult(
        stage_id=plan.stage_id,
        groups=plan.groups,
        instance=instance,
        solution=solution,
        greedy_steps=greedy_steps,
        selected_operations=chosen,
        resulting_configuration=result,
        annotations=annotations,
    )


def _audit_reference(
    plan: StagePlan,
    instance: MckpInstance,
    solution: MckpSolution,
    chosen: Sequence[ChangeOperation],
) -> tuple[str, ...]:
    """Compare an externally claimed selection against the computed one."""
    if not plan.reference_selection:
        return ()
    ids_text = ",".join(plan.reference_selection)
    lookup: dict[str, tuple[int, int]] = {}
    for gi, group in enumerate(plan.groups):
        for j, op in enumerate(group.operations):
            lookup[op.id] = (gi, j)
    picks = []
    for op_id in plan.reference_selection:
        position = lookup.get(op_id)
        if position is None:
            return (f"reference selection names unknown operation {op_id}",)
        picks.append(position)
    findings = verify_picks(instance, picks)
    if findings:
        return (f"reference selection {ids_text} infeasible: {'; '.join(findings)}",)
    reference: list[int | None] = [None] * len(plan.groups)
    for gi, j in picks:
        reference[gi] = j
    if tuple(reference) != solution.selection:
        computed = ",".join(op.id for op in chosen) or "no operations"
        return (
            f"reference selection {ids_text} differs from computed selection {computed}",
        )
    return ()


def plan_chain(
    tree: ComponentTree, initial: Configuration, plans: Sequence[StagePlan]
) -> Strategy:
    """Run stages in order; halts at the first failure with partial results."""
    findings = validate_configuration(tree, initial)
    if findings:
        raise PlanError(
            "initial", f"initial configuration {initial.id!r} is invalid: {'; '.join(findings)}"
        )
    results: list[StageResult] = []
    current = initial
    failure = None
    for plan in plans:
        try:
            result = plan_stage(tree, current, plan)
        except PlanError as exc:
            failure = str(exc)
            break
        except MorphplanError as exc:
            failure = f"{plan.stage_id}: {exc}"
            break
        results.append(result)
        current = result.resulting_configuration
    return Strategy(
        initial_configuration=initial,
        stages=tuple(results),
        final_configuration=current,
        failure=failure,
    )


# --- reporting -------------------------------------------------------------

def render_strategy(tree: ComponentTree, strategy: Strategy) -> dict:
    """Full machine-readable report of a chain run; deterministic key order."""
    stages = []
    for result in strategy.stages:
        opset_doc = serialize_operation_set(
            OperationSet(
                stage_id=result.stage_id,
                budget=result.instance.budget,
                comparator=result.instance.comparator,
                groups=result.groups,
            )
        )
        x_rows = []
        y_row = []
        for gi, group in enumerate(result.groups):
            sel = result.solution.selection[gi]
            x_rows.append([1 if sel == j else 0 for j in range(len(group.operations))])
            contributes = sel is not None and not group.operations[sel].is_none_marker
            y_row.append(1 if contributes else 0)
        stage_doc: dict = {
            "stage_id": result.stage_id,
            "solver": result.solution.solver,
            "budget": format_tenths(result.instance.budget),
            "comparator": result.instance.comparator,
            "groups": opset_doc["groups"],
            "selection": {
                "indices": list(result.solution.selection),
                "operations": [op.id for op in result.selected_operations],
                "x": x_rows,
                "y": y_row,
            },
            "profit": format_tenths(result.solution.total_profit),
            "cost": format_tenths(result.solution.total_cost),
        }
        if result.greedy_steps is not None:
            stage_doc["greedy_trace"] = [
                {
                    "operation": result.groups[step.group].operations[step.item].id,
                    "group": result.groups[step.group].index,
                    "ratio": step.ratio_text,
                    "profit": format_tenths(step.profit),
                    "cost": format_tenths(step.cost),
                    "decision": step.decision,
                }
                for step in result.greedy_steps
            ]
        stage_doc["result"] = {
            "id": result.resulting_configuration.id,
            "description": render_configuration(tree, result.resulting_configuration),
        }
        stage_doc["annotations"] = list(result.annotations)
        stages.append(stage_doc)
    return {
        "chain": strategy.chain_text(),
        "initial": {
            "id": strategy.initial_configuration.id,
            "description": render_configuration(tree, strategy.initial_configuration),
        },
        "stages": stages,
        "final": {
            "id": strategy.final_configuration.id,
            "description": render_configuration(tree, strategy.final_configuration),
        },
        "failure": strategy.failure,
    }


_BOLD = "\x1b[1m"
_RESET = "\x1b[0m"


def render_report_text(report: Mapping, color: bool = False) -> str:
    """Aligned plain-text view of a report document produced by render_strategy."""

    def emph(text: str) -> str:
        return f"{_BOLD}{text}{_RESET}" if color else text

    lines = [emph(f"strategy: {report['chain']}")]
    initial = report["initial"]
    lines.append(f"initial {initial['id']}: {initial['description']}")
    for stage in report["stages"]:
        lines.append("")
        lines.append(
            emph(
                f"stage {stage['stage_id']}  solver {stage['solver']}  "
                f"budget {stage['budget']}  comparator {stage['comparator']}"
            )
        )
        indices = stage["selection"]["indices"]
        for gi, group in enumerate(stage["groups"]):
            sel = indices[gi]
            chosen = group["operations"][sel] if sel is not None else None
            if chosen is None or chosen["to"] is None:
                outcome = "no change"
            else:
                outcome = (
                    f"{chosen['id']} ({chosen['from']} -> {chosen['to']})  "
                    f"profit {chosen['profit']}  cost {chosen['cost']}"
                )
            lines.append(f"  group {group['group']} {group['leaf']}: {outcome}")
        lines.append(f"  total profit {stage['profit']}  total cost {stage['cost']}")
        for entry in stage.get("greedy_trace", ()):
            lines.append(
                f"  rank {entry['operation']}  ratio {entry['ratio']}  "
                f"profit {entry['profit']}  cost {entry['cost']}  {entry['decision']}"
            )
        result = stage["result"]
        lines.append(f"  result {result['id']}: {result['description']}")
        for note in stage["annotations"]:
            lines.append(f"  note: {note}")
    lines.append("")
    final = report["final"]
    lines.append(f"final {final['id']}: {final['description']}")
    if report.get("failure"):
        lines.append(f"failed: {report['failure']}")
    return "\n".join(lines) + "\n"


# --- interchange -----------------------------------------------------------

def parse_chain_document(document: Mapping) -> tuple[str, tuple[str, ...]]:
    """Read {"initial": ref, "stages": [ref, ...]}; refs are names or paths."""
    if not isinstance(document, Mapping):
        raise SchemaError("chain document must be a JSON object")
    initial = document.get("initial")
    if not isinstance(initial, str) or not initial:
        raise SchemaError("$.initial: missing or non-string configuration reference")
    raw_stages = document.get("stages")
    if not isinstance(raw_stages, Sequence) or isinstance(raw_stages, (str, bytes)):
        raise SchemaError("$.stages: expected a list of stage references")
    stages = []
    for i, ref in enumerate(raw_stages):
        if not isinstance(ref, str) or not ref:
            raise SchemaError(f"$.stages[{i}]: expected a string reference")
        stages.append(ref)
    return initial, tuple(stages)


def serialize_chain(initial_ref: str, stage_refs: Sequence[str]) -> dict:
    return {"initial": initial_ref, "stages": list(stage_refs)}

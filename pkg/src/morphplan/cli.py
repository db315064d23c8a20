"""Command-line front end.

Every command writes one machine-readable JSON document (or, for
``report --format text``, one plain-text table) to stdout and keeps
diagnostics on stderr, so identical invocations over identical inputs
produce identical stdout bytes. Exit codes: 0 success, 1 validation
findings, 2 usage or I/O error, 3 infeasible or solver error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .changeops import OperationSet, build_mckp_instance, parse_operation_set
from .datasets import (
    builtin_generations,
    builtin_model,
    builtin_operation_sets,
    builtin_reference_results,
    export_datasets,
    run_builtin_example,
)
from .errors import (
    InstanceError,
    InvalidConfigurationError,
    PlanError,
    SchemaError,
)
from .mckp import (
    MckpInstance,
    parse_instance,
    serialize_solution,
    solve_dp,
    solve_exhaustive,
    solve_greedy,
    verify_picks,
)
from .morphology import (
    Configuration,
    diff_configurations,
    parse_configuration,
    parse_model,
    validate_configuration,
)
from .planner import (
    SOLVERS,
    parse_chain_document,
    plan_chain,
    render_report_text,
    render_strategy,
    stage_plan_from_set,
)
from .tenths import format_tenths


def _emit(document: dict) -> None:
    sys.stdout.write(json.dumps(document, indent=2) + "\n")


def _fail(message: str, code: int, findings: list[str] | None = None) -> int:
    """Diagnostic to stderr; findings, when given, also to stdout as JSON."""
    if findings is not None:
        _emit({"findings": findings})
    sys.stderr.write(f"error: {message}\n")
    return code


def _load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _resolve_configuration(ref: str) -> Configuration:
    """A configuration file path, or the name of a built-in configuration."""
    path = Path(ref)
    if path.is_file():
        return parse_configuration(_load_json(path))
    for config in builtin_generations() + builtin_reference_results():
        if config.id == ref:
            return config
    raise FileNotFoundError(f"no such file or built-in configuration: {ref}")


def _resolve_operation_set(ref: str, base: Path | None = None) -> OperationSet:
    """An operation-set file path (relative to base), or a built-in stage id."""
    path = Path(ref)
    if not path.is_absolute() and base is not None and (base / path).is_file():
        path = base / path
    if path.is_file():
        return parse_operation_set(_load_json(path))
    for opset in builtin_operation_sets():
        if opset.stage_id == ref:
            return opset
    raise FileNotFoundError(f"no such file or built-in stage: {ref}")


def _load_solvable(ref: str) -> tuple[MckpInstance, OperationSet | None]:
    """Read an instance from either document form.

    Operation-set documents (recognized by their stage_id) are compiled
    down; raw instance documents are taken as-is.
    """
    document = _load_json(ref)
    if isinstance(document, dict) and "stage_id" in document:
        opset = parse_operation_set(document)
        instance = build_mckp_instance(opset.groups, opset.budget, opset.comparator)
        return instance, opset
    return parse_instance(document), None


# --- commands --------------------------------------------------------------

def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        tree = parse_model(_load_json(args.model))
    except SchemaError as exc:
        return _fail(str(exc), 1, findings=[str(exc)])
    entries = []
    exit_code = 0
    for config_path in args.configs:
        try:
            config = parse_configuration(_load_json(config_path))
        except SchemaError as exc:
            entries.append({"id": str(config_path), "findings": [str(exc)]})
            exit_code = 1
            continue
        findings = validate_configuration(tree, config)
        if findings:
            exit_code = 1
        entries.append({"id": config.id, "findings": findings})
    _emit({
        "model": tree.id,
        "leaves": len(tree.leaves),
        "alternatives": tree.alternative_count(),
        "configurations": entries,
    })
    return exit_code


def _cmd_diff(args: argparse.Namespace) -> int:
    tree = parse_model(_load_json(args.model))
    from_config = _resolve_configuration(args.from_ref)
    to_config = _resolve_configuration(args.to_ref)
    try:
        deltas = diff_configurations(tree, from_config, to_config)
    except InvalidConfigurationError as exc:
        return _fail(str(exc), 1, findings=exc.findings or [str(exc)])
    _emit({
        "model": tree.id,
        "from": from_config.id,
        "to": to_config.id,
        "deltas": [
            {"leaf": delta.leaf, "from": delta.from_alt, "to": delta.to_alt}
            for delta in deltas
        ],
    })
    return 0


def _solve(instance: MckpInstance, solver: str):
    if solver == "greedy":
        return solve_greedy(instance)
    if solver == "exhaustive":
        return solve_exhaustive(instance)
    return solve_dp(instance)


def _cmd_solve(args: argparse.Namespace) -> int:
    try:
        instance, _ = _load_solvable(args.instance)
    except SchemaError as exc:
        return _fail(str(exc), 1, findings=[str(exc)])
    try:
        solution = _solve(instance, args.solver)
    except InstanceError as exc:
        return _fail(str(exc), 3, findings=[str(exc)])
    _emit(serialize_solution(solution))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        instance, opset = _load_solvable(args.instance)
    except SchemaError as exc:
        return _fail(str(exc), 1, findings=[str(exc)])
    tokens = [token for token in args.selection.split(",") if token]
    picks: list[tuple[int, int]] = []
    operations: list[str] | None = [] if opset is not None else None
    if opset is not None:
        unknown = []
        for token in tokens:
            located = opset.find_operation(token)
            if located is None:
                unknown.append(f"unknown operation id: {token}")
                continue
            gi, j, op = located
            picks.append((gi, j))
            operations.append(op.id)
        if unknown:
            return _fail("; ".join(unknown), 1, findings=unknown)
    else:
        if len(tokens) != len(instance.groups):
            message = (
                f"selection names {len(tokens)} groups, instance has "
                f"{len(instance.groups)}"
            )
            return _fail(message, 1, findings=[message])
        for gi, token in enumerate(tokens):
            if token in ("none", "null", "-"):
                continue
            try:
                picks.append((gi, int(token)))
            except ValueError:
                message = f"selection entry {token!r} is not an index or none"
                return _fail(message, 1, findings=[message])
    findings = verify_picks(instance, picks)
    selection: list[int | None] = [None] * len(instance.groups)
    profit = 0
    cost = 0
    for gi, j in picks:
        if 0 <= gi < len(instance.groups) and 0 <= j < len(instance.groups[gi]):
            selection[gi] = j
            item = instance.groups[gi][j]
            profit += item.profit
            cost += item.cost
    report = {
        "feasible": not findings,
        "profit": format_tenths(profit),
        "cost": format_tenths(cost),
        "selection": selection,
    }
    if operations is not None:
        report["operations"] = operations
    report["findings"] = findings
    _emit(report)
    if findings:
        sys.stderr.write(f"error: {'; '.join(findings)}\n")
        return 3
    return 0


def _cmd_plan(args: argparse.Namespace) -> int:
    explicit = args.model or args.initial or args.stages or args.chain
    if args.paper_example and explicit:
        return _fail("--paper-example takes no other inputs", 2)
    if args.paper_example:
        tree = builtin_model()
        strategy = run_builtin_example(args.solver)
    else:
        if not args.model:
            return _fail("plan needs --paper-example or --model", 2)
        tree = parse_model(_load_json(args.model))
        if args.chain:
            if args.initial or args.stages:
                return _fail("--chain replaces --initial and --stages", 2)
            chain_path = Path(args.chain)
            initial_ref, stage_refs = parse_chain_document(_load_json(chain_path))
            base = chain_path.parent
        elif args.initial and args.stages:
            initial_ref = args.initial
            stage_refs = tuple(ref for ref in args.stages.split(",") if ref)
            base = None
        else:
            return _fail("plan needs --chain or both --initial and --stages", 2)
        initial_path = Path(initial_ref)
        if not initial_path.is_absolute() and base is not None and (base / initial_path).is_file():
            initial_ref = str(base / initial_path)
        initial = _resolve_configuration(initial_ref)
        plans = [
            stage_plan_from_set(_resolve_operation_set(ref, base), args.solver)
            for ref in stage_refs
        ]
        try:
            strategy = plan_chain(tree, initial, plans)
        except PlanError as exc:
            return _fail(str(exc), 3, findings=[str(exc)])
    report = render_strategy(tree, strategy)
    _emit(report)
    if strategy.failure is not None:
        sys.stderr.write(f"error: {strategy.failure}\n")
        return 3
    return 0


def _cmd_datasets(args: argparse.Namespace) -> int:
    names = export_datasets(args.directory)
    _emit({"directory": args.directory, "exported": names})
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    document = _load_json(args.strategy)
    if args.format == "json":
        _emit(document)
        return 0
    color = sys.stdout.isatty() and not os.environ.get("MORPHPLAN_NO_COLOR")
    try:
        text = render_report_text(document, color=bool(color))
    except (KeyError, TypeError, IndexError) as exc:
        message = f"malformed strategy report: {exc}"
        return _fail(message, 1, findings=[message])
    sys.stdout.write(text)
    return 0


# --- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphplan",
        description="Configuration modeling and budgeted improvement planning.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", help="check a model and configurations")
    validate.add_argument("model", help="model document")
    validate.add_argument("configs", nargs="*", help="configuration documents")
    validate.set_defaults(handler=_cmd_validate)

    diff = commands.add_parser("diff", help="leaf-level differences between configurations")
    diff.add_argument("--model", required=True, help="model document")
    diff.add_argument("--from", dest="from_ref", required=True,
                      help="configuration file or built-in name")
    diff.add_argument("--to", dest="to_ref", required=True,
                      help="configuration file or built-in name")
    diff.set_defaults(handler=_cmd_diff)

    solve = commands.add_parser("solve", help="solve one budgeted selection instance")
    solve.add_argument("--instance", required=True,
                       help="instance or operation-set document")
    solve.add_argument("--solver", choices=SOLVERS, default="dp")
    solve.set_defaults(handler=_cmd_solve)

    verify = commands.add_parser("verify", help="check a claimed selection")
    verify.add_argument("--instance", required=True,
                        help="instance or operation-set document")
    verify.add_argument("--selection", required=True,
                        help="comma-separated operation ids, or per-group indices")
    verify.set_defaults(handler=_cmd_verify)

    plan = commands.add_parser("plan", help="run a multi-stage improvement chain")
    plan.add_argument("--model", help="model document")
    plan.add_argument("--initial", help="starting configuration file or built-in name")
    plan.add_argument("--stages", help="comma-separated stage documents")
    plan.add_argument("--chain", help="chain document naming initial and stages")
    plan.add_argument("--solver", choices=SOLVERS, default="dp")
    plan.add_argument("--paper-example", action="store_true",
                      help="run the built-in two-stage example")
    plan.set_defaults(handler=_cmd_plan)

    datasets = commands.add_parser("datasets", help="built-in dataset tools")
    datasets_commands = datasets.add_subparsers(dest="datasets_command", required=True)
    export = datasets_commands.add_parser("export", help="write built-in documents")
    export.add_argument("directory")
    export.set_defaults(handler=_cmd_datasets)

    report = commands.add_parser("report", help="re-render a saved strategy report")
    report.add_argument("--strategy", required=True, help="report document from plan")
    report.add_argument("--format", choices=("json", "text"), default="json")
    report.set_defaults(handler=_cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except (InvalidConfigurationError, SchemaError) as exc:
        return _fail(str(exc), 1, findings=[str(exc)])
    except (InstanceError, PlanError) as exc:
        return _fail(str(exc), 3, findings=[str(exc)])
    except json.JSONDecodeError as exc:
        return _fail(f"not valid JSON: {exc}", 2)
    except OSError as exc:
        return _fail(str(exc), 2)


if __name__ == "__main__":
    sys.exit(main())

"""Change operations over configurations and their knapsack form.

A change operation replaces one leaf's current alternative with another,
carrying a profit (expected benefit) and a cost, both in tenths. Every
group of candidate operations for one leaf starts with a "do nothing"
marker (to_alt None, zero profit, zero cost); at most one member of each
group is ever applied. A stage's grouped operations plus a budget become
a multiple-choice knapsack instance one item per operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DeltaApplyError, InstanceError, SchemaError
from .mckp import COMPARATORS, MckpItem, MckpInstance
from .morphology import ID_PATTERN, ComponentTree, Configuration
from .tenths import format_tenths, parse_tenths

IMPACT_CLASSES = (
    "local-node",
    "local-architecture",
    "component",
    "arch-node-functions",
    "arch-topology",
    "arch-extension",
    "radical",
)


@dataclass(frozen=True)
class ChangeOperation:
    """One candidate edit of a single leaf, priced in tenths.

    to_alt None marks the group's "do nothing" row; such operations must
    cost and earn nothing. impact_class and activity_refs are annotation
    only and never influence solving.
    """

    id: str
    group: int
    leaf: str
    from_alt: str
    to_alt: str | None
    profit: int
    cost: int
    impact_class: str | None = None
    activity_refs: tuple[str, ...] = ()

    @property
    def is_none_marker(self) -> bool:
        return self.to_alt is None


@dataclass(frozen=True)
class OperationGroup:
    """Ordered candidate operations for one leaf; member 0 is the None marker."""

    index: int
    leaf: str
    operations: tuple[ChangeOperation, ...]


@dataclass(frozen=True)
class OperationSet:
    """One stage's grouped operations with budget and comparator.

    result_id and reference_selection are optional annotations: a name for
    the configuration the stage is expected to produce, and an externally
    claimed selection (operation ids) to audit against the solved one.
    """

    stage_id: str
    budget: int
    comparator: str
    groups: tuple[OperationGroup, ...]
    result_id: str | None = None
    reference_selection: tuple[str, ...] = ()

    def find_operation(self, op_id: str) -> tuple[int, int, ChangeOperation] | None:
        """Locate an operation by id as (group position, item position, op)."""
        for gi, group in enumerate(self.groups):
            for j, op in enumerate(group.operations):
                if op.id == op_id:
                    return gi, j, op
        return None


def validate_operation(tree: ComponentTree, op: ChangeOperation) -> list[str]:
    """Check one operation against a model; returns findings, never raises."""
    findings: list[str] = []
    if op.group < 1:
        findings.append(f"operation {op.id}: group index must be >= 1")
    if op.profit < 0:
        findings.append(f"operation {op.id}: negative profit")
    if op.cost < 0:
        findings.append(f"operation {op.id}: negative cost")
    if op.impact_class is not None and op.impact_class not in IMPACT_CLASSES:
        findings.append(f"operation {op.id}: unknown impact class {op.impact_class!r}")
    if not tree.has_leaf(op.leaf):
        findings.append(f"operation {op.id}: unknown leaf {op.leaf}")
        return findings
    leaf = tree.leaf(op.leaf)
    if not leaf.has_alternative(op.from_alt):
        findings.append(
            f"operation {op.id}: unknown alternative: {op.from_alt} is not an "
            f"alternative of leaf {leaf.id}"
        )
    if op.is_none_marker:
        if op.profit != 0:
            findings.append(f"operation {op.id}: None operation must have zero profit")
        if op.cost != 0:
            findings.append(f"operation {op.id}: None operation must have zero cost")
    else:
        if op.to_alt == op.from_alt:
            findings.append(f"operation {op.id}: self-loop change to {op.to_alt}")
        elif not leaf.has_alternative(op.to_alt):
            findings.append(
                f"operation {op.id}: unknown alternative: {op.to_alt} is not an "
                f"alternative of leaf {leaf.id}"
            )
    return findings


def apply_operation(config: Configuration, op: ChangeOperation) -> Configuration:
    """Apply one operation; None markers return the configuration unchanged."""
    if op.is_none_marker:
        return config
    held = config.assignment.get(op.leaf)
    if held is None:
        raise DeltaApplyError(
            f"operation {op.id} targets leaf {op.leaf}, which is unassigned"
        )
    if held != op.from_alt:
        raise DeltaApplyError(
            f"operation {op.id} not applicable: leaf {op.leaf} holds {held}, "
            f"expected {op.from_alt}"
        )
    assignment = dict(config.assignment)
    assignment[op.leaf] = op.to_alt
    return Configuration(id=config.id, tree_id=config.tree_id, assignment=assignment)


def build_mckp_instance(
    groups: Sequence[OperationGroup], budget: int, comparator: str
) -> MckpInstance:
    """Turn grouped operations into a knapsack instance, one item per operation.

    Group indices must run 1..n in order, each group must lead with its
    None marker and contain no second one, and no two groups may target
    the same leaf (so applying a stage's selected operations is
    order-independent).
    """
    leaf_owner: dict[str, int] = {}
    item_groups = []
    for pos, group in enumerate(groups):
        expected = pos + 1
        if group.index != expected:
            if any(other.index == group.index for other in groups[:pos]):
                raise InstanceError(f"duplicate group index {group.index}")
            raise InstanceError(
                f"group indices must be consecutive from 1; found {group.index} "
                f"at position {expected}"
            )
        if group.leaf in leaf_owner:
            raise InstanceError(
                f"groups {leaf_owner[group.leaf]} and {group.index} both target "
                f"leaf {group.leaf}"
            )
        leaf_owner[group.leaf] = group.index
        if not group.operations:
            raise InstanceError(f"group {group.index} is empty")
        if not group.operations[0].is_none_marker:
            raise InstanceError(f"group {group.index} does not start with a None marker")
        if sum(1 for op in group.operations if op.is_none_marker) > 1:
            raise InstanceError(f"group {group.index} has more than one None marker")
        for op in group.operations:
            if op.leaf != group.leaf:
                raise InstanceError(
                    f"operation {op.id} targets leaf {op.leaf}, group {group.index} "
                    f"targets {group.leaf}"
                )
            if op.group != group.index:
                raise InstanceError(
                    f"operation {op.id} carries group index {op.group}, "
                    f"expected {group.index}"
                )
        item_groups.append(
            tuple(MckpItem(profit=op.profit, cost=op.cost) for op in group.operations)
        )
    return MckpInstance(groups=tuple(item_groups), budget=budget, comparator=comparator)


def selected_operations(
    groups: Sequence[OperationGroup], selection: Sequence[int | None]
) -> tuple[ChangeOperation, ...]:
    """The non-None operations a solution's selection picked, in group order."""
    if len(selection) != len(groups):
        raise InstanceError(
            f"selection length {len(selection)} does not match group count {len(groups)}"
        )
    chosen = []
    for group, j in zip(groups, selection):
        if j is None:
            continue
        op = group.operations[j]
        if not op.is_none_marker:
            chosen.append(op)
    return tuple(chosen)


# --- interchange -----------------------------------------------------------

def _parse_money(raw, path: str) -> int:
    try:
        return parse_tenths(raw)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _parse_operation(raw, path: str, group_index: int, leaf: str) -> ChangeOperation:
    if not isinstance(raw, Mapping):
        raise SchemaError(f"{path}: expected an object")
    op_id = raw.get("id")
    if not isinstance(op_id, str) or ID_PATTERN.match(op_id) is None:
        raise SchemaError(f"{path}.id: missing or malformed operation id")
    from_alt = raw.get("from")
    if not isinstance(from_alt, str) or not from_alt:
        raise SchemaError(f"{path}.from: missing or non-string alternative id")
    to_alt = raw.get("to")
    if to_alt is not None and (not isinstance(to_alt, str) or not to_alt):
        raise SchemaError(f"{path}.to: expected an alternative id or null")
    impact_class = raw.get("impact_class")
    if impact_class is not None:
        if not isinstance(impact_class, str) or impact_class not in IMPACT_CLASSES:
            raise SchemaError(f"{path}.impact_class: unknown impact class {impact_class!r}")
    raw_refs = raw.get("activity_refs", ())
    if isinstance(raw_refs, (str, bytes)) or not isinstance(raw_refs, Sequence):
        raise SchemaError(f"{path}.activity_refs: expected a list of activity ids")
    refs = []
    for i, ref in enumerate(raw_refs):
        if not isinstance(ref, str) or not ref:
            raise SchemaError(f"{path}.activity_refs[{i}]: expected a string id")
        refs.append(ref)
    return ChangeOperation(
        id=op_id,
        group=group_index,
        leaf=leaf,
        from_alt=from_alt,
        to_alt=to_alt,
        profit=_parse_money(raw.get("profit"), f"{path}.profit"),
        cost=_parse_money(raw.get("cost"), f"{path}.cost"),
        impact_class=impact_class,
        activity_refs=tuple(refs),
    )


def parse_operation_set(document: Mapping) -> OperationSet:
    """Read a stage document {"stage_id", "budget", "comparator", "groups"}."""
    if not isinstance(document, Mapping):
        raise SchemaError("operation-set document must be a JSON object")
    stage_id = document.get("stage_id")
    if not isinstance(stage_id, str) or not stage_id:
        raise SchemaError("$.stage_id: missing or non-string stage id")
    budget = _parse_money(document.get("budget"), "$.budget")
    comparator = document.get("comparator", "inclusive")
    if comparator not in COMPARATORS:
        raise SchemaError(f"$.comparator: expected one of {', '.join(COMPARATORS)}")
    result_id = document.get("result_id")
    if result_id is not None and (not isinstance(result_id, str) or not result_id):
        raise SchemaError("$.result_id: expected a nonempty string")
    raw_reference = document.get("reference_selection", ())
    if isinstance(raw_reference, (str, bytes)) or not isinstance(raw_reference, Sequence):
        raise SchemaError("$.reference_selection: expected a list of operation ids")
    reference = []
    for i, ref in enumerate(raw_reference):
        if not isinstance(ref, str) or not ref:
            raise SchemaError(f"$.reference_selection[{i}]: expected a string id")
        reference.append(ref)
    raw_groups = document.get("groups")
    if not isinstance(raw_groups, Sequence) or isinstance(raw_groups, (str, bytes)):
        raise SchemaError("$.groups: expected a list of groups")
    groups = []
    seen_ops: set[str] = set()
    for gi, raw_group in enumerate(raw_groups):
        path = f"$.groups[{gi}]"
        if not isinstance(raw_group, Mapping):
            raise SchemaError(f"{path}: expected an object")
        index = raw_group.get("group")
        if not isinstance(index, int) or isinstance(index, bool) or index < 1:
            raise SchemaError(f"{path}.group: expected a positive group index")
        leaf = raw_group.get("leaf")
        if not isinstance(leaf, str) or not leaf:
            raise SchemaError(f"{path}.leaf: missing or non-string leaf id")
        raw_ops = raw_group.get("operations")
        if not isinstance(raw_ops, Sequence) or isinstance(raw_ops, (str, bytes)):
            raise SchemaError(f"{path}.operations: expected a list of operations")
        ops = []
        for j, raw_op in enumerate(raw_ops):
            op = _parse_operation(raw_op, f"{path}.operations[{j}]", index, leaf)
            if op.id in seen_ops:
                raise SchemaError(f"duplicate operation id {op.id}")
            seen_ops.add(op.id)
            ops.append(op)
        groups.append(OperationGroup(index=index, leaf=leaf, operations=tuple(ops)))
    return OperationSet(
        stage_id=stage_id,
        budget=budget,
        comparator=comparator,
        groups=tuple(groups),
        result_id=result_id,
        reference_selection=tuple(reference),
    )


def serialize_operation_set(opset: OperationSet) -> dict:
    document: dict = {
        "stage_id": opset.stage_id,
        "budget": format_tenths(opset.budget),
        "comparator": opset.comparator,
    }
    if opset.result_id is not None:
        document["result_id"] = opset.result_id
    if opset.reference_selection:
        document["reference_selection"] = list(opset.reference_selection)
    document["groups"] = [
        {
            "group": group.index,
            "leaf": group.leaf,
            "operations": [_serialize_operation(op) for op in group.operations],
        }
        for group in opset.groups
    ]
    return document


def _serialize_operation(op: ChangeOperation) -> dict:
    document: dict = {
        "id": op.id,
        "from": op.from_alt,
        "to": op.to_alt,
        "profit": format_tenths(op.profit),
        "cost": format_tenths(op.cost),
    }
    if op.impact_class is not None:
        document["impact_class"] = op.impact_class
    if op.activity_refs:
        document["activity_refs"] = list(op.activity_refs)
    return document

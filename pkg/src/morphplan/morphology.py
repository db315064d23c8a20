"""Hierarchical morphological model of a modular system.

A system is a finite tree: composite nodes conjoin their children (the
"*" composition), leaf components list mutually exclusive implementation
alternatives. A configuration picks exactly one alternative per leaf.
All types are immutable values; every operation is a pure function, so
values can be shared freely across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence, Union

from .errors import DeltaApplyError, InvalidConfigurationError, SchemaError

ID_PATTERN = re.compile(r"^[A-Za-z][A-Za-z0-9]*(_[0-9]+)?$")


@dataclass(frozen=True)
class Alternative:
    """One implementation choice at a leaf component.

    composed_of is descriptive metadata: it names sibling alternatives this
    one bundles (e.g. a combined access scheme). It never affects solving.
    """

    id: str
    label: str = ""
    composed_of: tuple[str, ...] = ()


@dataclass(frozen=True)
class LeafComponent:
    id: str
    label: str = ""
    alternatives: tuple[Alternative, ...] = ()

    def alternative_ids(self) -> tuple[str, ...]:
        return tuple(alt.id for alt in self.alternatives)

    def has_alternative(self, alt_id: str) -> bool:
        return any(alt.id == alt_id for alt in self.alternatives)


@dataclass(frozen=True)
class CompositeNode:
    id: str
    label: str = ""
    children: tuple[Union["CompositeNode", LeafComponent], ...] = ()


Node = Union[CompositeNode, LeafComponent]


@dataclass(frozen=True)
class ComponentTree:
    """A validated morphological hierarchy rooted at a composite node."""

    root: CompositeNode

    @property
    def id(self) -> str:
        return self.root.id

    @cached_property
    def leaves(self) -> tuple[LeafComponent, ...]:
        """All leaf components in depth-first declaration order."""
        return tuple(node for node in iter_nodes(self.root) if isinstance(node, LeafComponent))

    @cached_property
    def _leaf_index(self) -> dict[str, LeafComponent]:
        return {leaf.id: leaf for leaf in self.leaves}

    def leaf(self, leaf_id: str) -> LeafComponent:
        try:
            return self._leaf_index[leaf_id]
        except KeyError:
            raise KeyError(f"no leaf component {leaf_id!r} in model {self.id!r}") from None

    def has_leaf(self, leaf_id: str) -> bool:
        return leaf_id in self._leaf_index

    def alternative_count(self) -> int:
        return sum(len(leaf.alternatives) for leaf in self.leaves)

    def depth(self) -> int:
        def walk(node: Node) -> int:
            if isinstance(node, LeafComponent):
                return 1
            return 1 + max((walk(child) for child in node.children), default=0)

        return walk(self.root)


def iter_nodes(node: Node) -> Iterator[Node]:
    """Depth-first pre-order traversal."""
    yield node
    if isinstance(node, CompositeNode):
        for child in node.children:
            yield from iter_nodes(child)


@dataclass(frozen=True)
class Configuration:
    """A total assignment of one alternative per leaf of a model."""

    id: str
    tree_id: str
    assignment: Mapping[str, str] = field(default_factory=dict)

    def alternative_at(self, leaf_id: str) -> str | None:
        return self.assignment.get(leaf_id)


@dataclass(frozen=True)
class ChangeDelta:
    """A single-leaf edit: replace from_alt with to_alt."""

    leaf: str
    from_alt: str
    to_alt: str


# --- interchange -----------------------------------------------------------

def parse_model(document: Mapping) -> ComponentTree:
    """Build a validated ComponentTree from a model interchange document.

    The document is ``{"id", "label", "nodes": [...]}`` where each node is
    either a composite ``{"id", "label", "children": [...]}`` or a leaf
    ``{"id", "label", "alternatives": [{"id", "label", "composed_of"?}]}``.
    Raises SchemaError naming the offending path on any violation.
    """
    if not isinstance(document, Mapping):
        raise SchemaError("model document must be a JSON object")
    root_id = _require_id(document, "id", "$")
    label = _optional_label(document, "$")
    nodes = document.get("nodes")
    if not isinstance(nodes, Sequence) or isinstance(nodes, (str, bytes)):
        raise SchemaError("$.nodes: expected a list of nodes")
    children = tuple(_parse_node(node, f"$.nodes[{i}]") for i, node in enumerate(nodes))
    tree = ComponentTree(root=CompositeNode(id=root_id, label=label, children=children))
    _check_tree(tree)
    return tree


def _parse_node(raw, path: str) -> Node:
    if not isinstance(raw, Mapping):
        raise SchemaError(f"{path}: expected an object")
    node_id = _require_id(raw, "id", path)
    label = _optional_label(raw, path)
    has_children = "children" in raw
    has_alternatives = "alternatives" in raw
    if has_children == has_alternatives:
        raise SchemaError(
            f"{path}: node must have exactly one of 'children' or 'alternatives'"
        )
    if has_children:
        children = raw["children"]
        if not isinstance(children, Sequence) or isinstance(children, (str, bytes)):
            raise SchemaError(f"{path}.children: expected a list")
        if not children:
            raise SchemaError(f"{path}.children: composite node has no children")
        parsed = tuple(
            _parse_node(child, f"{path}.children[{i}]") for i, child in enumerate(children)
        )
        return CompositeNode(id=node_id, label=label, children=parsed)
    alternatives = raw["alternatives"]
    if not isinstance(alternatives, Sequence) or isinstance(alternatives, (str, bytes)):
        raise SchemaError(f"{path}.alternatives: expected a list")
    if not alternatives:
        raise SchemaError(f"{path}.alternatives: empty alternative list")
    alts = []
    for i, alt in enumerate(alternatives):
        alt_path = f"{path}.alternatives[{i}]"
        if not isinstance(alt, Mapping):
            raise SchemaError(f"{alt_path}: expected an object")
        alt_id = _require_id(alt, "id", alt_path)
        alt_label = _optional_label(alt, alt_path)
        composed = alt.get("composed_of", ())
        if isinstance(composed, (str, bytes)) or not isinstance(composed, Sequence):
            raise SchemaError(f"{alt_path}.composed_of: expected a list of alternative ids")
        composed_ids = []
        for j, ref in enumerate(composed):
            if not isinstance(ref, str):
                raise SchemaError(f"{alt_path}.composed_of[{j}]: expected a string id")
            composed_ids.append(ref)
        alts.append(Alternative(id=alt_id, label=alt_label, composed_of=tuple(composed_ids)))
    return LeafComponent(id=node_id, label=label, alternatives=tuple(alts))


def _require_id(raw: Mapping, key: str, path: str) -> str:
    value = raw.get(key)
    if not isinstance(value, str) or not value:
        raise SchemaError(f"{path}.{key}: missing or non-string id")
    if ID_PATTERN.match(value) is None:
        raise SchemaError(f"{path}.{key}: id {value!r} does not match the id grammar")
    return value


def _optional_label(raw: Mapping, path: str) -> str:
    value = raw.get("label", "")
    if not isinstance(value, str):
        raise SchemaError(f"{path}.label: expected a string")
    return value


def _check_tree(tree: ComponentTree) -> None:
    seen: set[str] = set()
    for node in iter_nodes(tree.root):
        if node.id in seen:
            raise SchemaError(f"duplicate id {node.id!r}")
        seen.add(node.id)
    if not tree.leaves:
        raise SchemaError("model has no leaf components")
    for leaf in tree.leaves:
        alt_ids = set()
        for alt in leaf.alternatives:
            if alt.id in alt_ids:
                raise SchemaError(f"leaf {leaf.id}: duplicate alternative id {alt.id!r}")
            alt_ids.add(alt.id)
        for alt in leaf.alternatives:
            for ref in alt.composed_of:
                if ref == alt.id:
                    raise SchemaError(
                        f"leaf {leaf.id}: alternative {alt.id} composed of itself"
                    )
                if ref not in alt_ids:
                    raise SchemaError(
                        f"leaf {leaf.id}: alternative {alt.id} dangling composed_of "
                        f"reference {ref!r}"
                    )
        _check_composition_cycles(leaf)


def _check_composition_cycles(leaf: LeafComponent) -> None:
    graph = {alt.id: alt.composed_of for alt in leaf.alternatives}
    # colors: 0 unvisited, 1 on stack, 2 done
    color: dict[str, int] = {}

    def visit(alt_id: str, trail: list[str]) -> None:
        state = color.get(alt_id, 0)
        if state == 1:
            cycle = " -> ".join(trail + [alt_id])
            raise SchemaError(f"leaf {leaf.id}: composed_of reference cycle {cycle}")
        if state == 2:
            return
        color[alt_id] = 1
        for ref in graph[alt_id]:
            visit(ref, trail + [alt_id])
        color[alt_id] = 2

    for alt_id in graph:
        visit(alt_id, [])


def serialize_model(tree: ComponentTree) -> dict:
    """Inverse of parse_model; parse_model(serialize_model(t)) preserves content."""

    def node_doc(node: Node) -> dict:
        if isinstance(node, LeafComponent):
            alts = []
            for alt in node.alternatives:
                alt_doc: dict = {"id": alt.id, "label": alt.label}
                if alt.composed_of:
                    alt_doc["composed_of"] = list(alt.composed_of)
                alts.append(alt_doc)
            return {"id": node.id, "label": node.label, "alternatives": alts}
        return {
            "id": node.id,
            "label": node.label,
            "children": [node_doc(child) for child in node.children],
        }

    return {
        "id": tree.root.id,
        "label": tree.root.label,
        "nodes": [node_doc(child) for child in tree.root.children],
    }


def parse_configuration(document: Mapping) -> Configuration:
    """Read a configuration document {"id", "tree_id", "assignment": {...}}."""
    if not isinstance(document, Mapping):
        raise SchemaError("configuration document must be a JSON object")
    config_id = document.get("id")
    tree_id = document.get("tree_id")
    if not isinstance(config_id, str) or not config_id:
        raise SchemaError("$.id: missing or non-string configuration id")
    if not isinstance(tree_id, str) or not tree_id:
        raise SchemaError("$.tree_id: missing or non-string tree reference")
    assignment = document.get("assignment")
    if not isinstance(assignment, Mapping):
        raise SchemaError("$.assignment: expected an object mapping leaf id to alternative id")
    pairs: dict[str, str] = {}
    for leaf_id, alt_id in assignment.items():
        if not isinstance(leaf_id, str) or not isinstance(alt_id, str):
            raise SchemaError(f"$.assignment[{leaf_id!r}]: leaf and alternative ids must be strings")
        pairs[leaf_id] = alt_id
    return Configuration(id=config_id, tree_id=tree_id, assignment=pairs)


def serialize_configuration(config: Configuration) -> dict:
    return {
        "id": config.id,
        "tree_id": config.tree_id,
        "assignment": dict(config.assignment),
    }


# --- operations ------------------------------------------------------------

def validate_configuration(tree: ComponentTree, config: Configuration) -> list[str]:
    """Check a configuration against a model; returns findings, never raises.

    The report is empty iff the configuration references the model, assigns
    exactly one existing alternative to every leaf, and nothing else.
    """
    findings: list[str] = []
    if config.tree_id != tree.id:
        findings.append(
            f"tree mismatch: configuration references {config.tree_id!r}, model is {tree.id!r}"
        )
    for leaf in tree.leaves:
        alt_id = config.assignment.get(leaf.id)
        if alt_id is None:
            findings.append(f"unassigned leaf: {leaf.id}")
        elif not leaf.has_alternative(alt_id):
            findings.append(f"unknown alternative: {alt_id} is not an alternative of leaf {leaf.id}")
    for leaf_id in config.assignment:
        if not tree.has_leaf(leaf_id):
            findings.append(f"not a leaf of the model: {leaf_id}")
    return findings


def _require_valid(tree: ComponentTree, config: Configuration, role: str) -> None:
    findings = validate_configuration(tree, config)
    if findings:
        raise InvalidConfigurationError(
            f"{role} configuration {config.id!r} is invalid: {'; '.join(findings)}",
            findings,
        )


def render_configuration(tree: ComponentTree, config: Configuration) -> str:
    """Canonical "*"-expression for a valid configuration.

    Follows the composite structure with alternatives in child declaration
    order; composites with a single child render without parentheses. The
    result is deterministic and injective over configurations of one model.
    """
    _require_valid(tree, config, "input")

    def walk(node: Node) -> str:
        if isinstance(node, LeafComponent):
            return config.assignment[node.id]
        parts = [walk(child) for child in node.children]
        if len(parts) == 1:
            return parts[0]
        return "(" + " * ".join(parts) + ")"

    parts = [walk(child) for child in tree.root.children]
    return " * ".join(parts)


def diff_configurations(
    tree: ComponentTree, from_config: Configuration, to_config: Configuration
) -> list[ChangeDelta]:
    """Deltas turning from_config into to_config, in leaf declaration order."""
    if from_config.tree_id != to_config.tree_id:
        raise InvalidConfigurationError(
            "mismatched tree references: "
            f"{from_config.tree_id!r} vs {to_config.tree_id!r}"
        )
    _require_valid(tree, from_config, "from")
    _require_valid(tree, to_config, "to")
    deltas = []
    for leaf in tree.leaves:
        before = from_config.assignment[leaf.id]
        after = to_config.assignment[leaf.id]
        if before != after:
            deltas.append(ChangeDelta(leaf=leaf.id, from_alt=before, to_alt=after))
    return deltas


def apply_deltas(
    tree: ComponentTree,
    config: Configuration,
    deltas: Sequence[ChangeDelta],
    result_id: str | None = None,
) -> Configuration:
    """Apply single-leaf edits to a valid configuration.

    Each delta must find its from_alt currently assigned, name a real
    alternative as to_alt, and no two deltas may target the same leaf.
    Inverse of diff_configurations: apply(A, diff(A, B)) == B leaf-for-leaf.
    """
    _require_valid(tree, config, "input")
    assignment = dict(config.assignment)
    seen_leaves: set[str] = set()
    for delta in deltas:
        if delta.leaf in seen_leaves:
            raise DeltaApplyError(f"duplicate delta target: leaf {delta.leaf}")
        seen_leaves.add(delta.leaf)
        if not tree.has_leaf(delta.leaf):
            raise DeltaApplyError(f"delta targets unknown leaf {delta.leaf}")
        held = assignment[delta.leaf]
        if held != delta.from_alt:
            raise DeltaApplyError(
                f"delta not applicable: leaf {delta.leaf} holds {held}, "
                f"expected {delta.from_alt}"
            )
        if not tree.leaf(delta.leaf).has_alternative(delta.to_alt):
            raise DeltaApplyError(
                f"delta target {delta.to_alt} is not an alternative of leaf {delta.leaf}"
            )
        assignment[delta.leaf] = delta.to_alt
    return Configuration(
        id=result_id if result_id is not None else config.id,
        tree_id=config.tree_id,
        assignment=assignment,
    )


def configuration_from_alternatives(
    tree: ComponentTree, config_id: str, alternative_ids: Sequence[str]
) -> Configuration:
    """Build a configuration from one alternative id per leaf, any order."""
    leaf_of_alt: dict[str, str] = {}
    for leaf in tree.leaves:
        for alt in leaf.alternatives:
            leaf_of_alt[alt.id] = leaf.id
    assignment: dict[str, str] = {}
    for alt_id in alternative_ids:
        leaf_id = leaf_of_alt.get(alt_id)
        if leaf_id is None:
            raise KeyError(f"no leaf of model {tree.id!r} offers alternative {alt_id!r}")
        if leaf_id in assignment:
            raise ValueError(f"two alternatives given for leaf {leaf_id}")
        assignment[leaf_id] = alt_id
    config = Configuration(id=config_id, tree_id=tree.id, assignment=assignment)
    _require_valid(tree, config, "constructed")
    return config

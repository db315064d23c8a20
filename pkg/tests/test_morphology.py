"""Component trees, configurations, deltas, and their documents."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morphplan import (
    Alternative,
    ChangeDelta,
    ComponentTree,
    CompositeNode,
    Configuration,
    DeltaApplyError,
    InvalidConfigurationError,
    LeafComponent,
    SchemaError,
    apply_deltas,
    builtin_generation,
    builtin_model,
    configuration_from_alternatives,
    diff_configurations,
    parse_configuration,
    parse_model,
    render_configuration,
    serialize_configuration,
    serialize_model,
    validate_configuration,
)

from conftest import random_assignment


def tiny_model_doc() -> dict:
    return {
        "id": "S",
        "label": "system",
        "nodes": [
            {
                "id": "A",
                "label": "alpha",
                "alternatives": [
                    {"id": "A_1", "label": "one"},
                    {"id": "A_2", "label": "two", "composed_of": ["A_1"]},
                ],
            },
            {
                "id": "B",
                "children": [
                    {"id": "B1", "alternatives": [{"id": "B1_1"}, {"id": "B1_2"}]},
                    {"id": "B2", "alternatives": [{"id": "B2_1"}]},
                ],
            },
        ],
    }


@pytest.fixture()
def tiny() -> ComponentTree:
    return parse_model(tiny_model_doc())


class TestModelParsing:
    def test_round_trip_builtin(self, tree):
        assert parse_model(serialize_model(tree)) == tree

    def test_round_trip_enterprise(self, enterprise):
        assert parse_model(serialize_model(enterprise)) == enterprise

    def test_leaf_order_is_depth_first(self, tiny):
        assert [leaf.id for leaf in tiny.leaves] == ["A", "B1", "B2"]

    def test_tree_accessors(self, tiny):
        assert tiny.id == "S"
        assert tiny.has_leaf("B1") and not tiny.has_leaf("B")
        assert tiny.leaf("A").alternative_ids() == ("A_1", "A_2")
        assert tiny.alternative_count() == 5
        assert tiny.depth() == 3
        with pytest.raises(KeyError):
            tiny.leaf("missing")

    def test_duplicate_id_rejected(self):
        doc = tiny_model_doc()
        doc["nodes"][1]["children"][1]["id"] = "A"
        with pytest.raises(SchemaError, match="duplicate id 'A'"):
            parse_model(doc)

    def test_node_needs_children_xor_alternatives(self):
        doc = tiny_model_doc()
        doc["nodes"][0]["children"] = []
        with pytest.raises(SchemaError, match="exactly one of 'children' or 'alternatives'"):
            parse_model(doc)

    def test_empty_children_rejected(self):
        doc = tiny_model_doc()
        doc["nodes"][1]["children"] = []
        with pytest.raises(SchemaError, match="no children"):
            parse_model(doc)

    def test_empty_alternatives_rejected(self):
        doc = tiny_model_doc()
        doc["nodes"][0]["alternatives"] = []
        with pytest.raises(SchemaError, match="empty alternative list"):
            parse_model(doc)

    def test_bad_id_grammar_rejected(self):
        doc = tiny_model_doc()
        doc["nodes"][0]["id"] = "2A"
        with pytest.raises(SchemaError, match="does not match the id grammar"):
            parse_model(doc)

    def test_dangling_composition_reference(self):
        doc = tiny_model_doc()
        doc["nodes"][0]["alternatives"][1]["composed_of"] = ["A_9"]
        with pytest.raises(SchemaError, match="dangling composed_of reference 'A_9'"):
            parse_model(doc)

    def test_self_composition_rejected(self):
        doc = tiny_model_doc()
        doc["nodes"][0]["alternatives"][1]["composed_of"] = ["A_2"]
        with pytest.raises(SchemaError, match="composed of itself"):
            parse_model(doc)

    def test_composition_cycle_rejected(self):
        doc = tiny_model_doc()
        doc["nodes"][0]["alternatives"][0]["composed_of"] = ["A_2"]
        with pytest.raises(SchemaError, match="composed_of reference cycle"):
            parse_model(doc)

    def test_error_paths_name_the_node(self):
        doc = tiny_model_doc()
        doc["nodes"][1]["children"][0]["id"] = 7
        with pytest.raises(SchemaError, match=r"\$\.nodes\[1\]\.children\[0\]"):
            parse_model(doc)

    def test_leafless_model_rejected(self):
        with pytest.raises(SchemaError, match="no leaf components"):
            parse_model({"id": "S", "nodes": []})

    def test_non_object_document_rejected(self):
        with pytest.raises(SchemaError, match="must be a JSON object"):
            parse_model([])


class TestConfigurationValidation:
    def test_builtin_generations_are_clean(self, tree, generations):
        for config in generations.values():
            assert validate_configuration(tree, config) == []

    def test_unassigned_leaf(self, tree):
        s5g = builtin_generation("S5G")
        assignment = dict(s5g.assignment)
        del assignment["B442"]
        broken = Configuration(id="broken", tree_id=tree.id, assignment=assignment)
        assert validate_configuration(tree, broken) == ["unassigned leaf: B442"]

    def test_unknown_alternative(self, tree):
        s5g = builtin_generation("S5G")
        assignment = dict(s5g.assignment)
        assignment["B11"] = "B11_99"
        broken = Configuration(id="broken", tree_id=tree.id, assignment=assignment)
        assert validate_configuration(tree, broken) == [
            "unknown alternative: B11_99 is not an alternative of leaf B11"
        ]

    def test_extra_key_is_not_a_leaf(self, tree):
        s5g = builtin_generation("S5G")
        assignment = dict(s5g.assignment)
        assignment["B4"] = "B41_1"
        broken = Configuration(id="broken", tree_id=tree.id, assignment=assignment)
        assert validate_configuration(tree, broken) == ["not a leaf of the model: B4"]

    def test_tree_mismatch(self, tree):
        s5g = builtin_generation("S5G")
        foreign = Configuration(id="x", tree_id="T", assignment=dict(s5g.assignment))
        findings = validate_configuration(tree, foreign)
        assert findings == ["tree mismatch: configuration references 'T', model is 'S'"]

    def test_findings_accumulate(self, tree):
        broken = Configuration(id="x", tree_id="T", assignment={"nope": "B11_1"})
        findings = validate_configuration(tree, broken)
        assert len(findings) == 1 + len(tree.leaves) + 1

    def test_configuration_round_trip(self, generations):
        for config in generations.values():
            assert parse_configuration(serialize_configuration(config)) == config

    def test_parse_configuration_requires_strings(self):
        with pytest.raises(SchemaError, match="ids must be strings"):
            parse_configuration({"id": "c", "tree_id": "S", "assignment": {"A": 1}})
        with pytest.raises(SchemaError, match=r"\$\.id"):
            parse_configuration({"tree_id": "S", "assignment": {}})


class TestRendering:
    def test_leaf_renders_as_its_alternative(self, tiny):
        config = configuration_from_alternatives(tiny, "c", ["A_1", "B1_2", "B2_1"])
        assert render_configuration(tiny, config) == "A_1 * (B1_2 * B2_1)"

    def test_single_child_composites_unwrapped(self):
        tree = ComponentTree(
            root=CompositeNode(
                id="S",
                label="",
                children=(
                    CompositeNode(
                        id="M",
                        label="",
                        children=(
                            LeafComponent(
                                id="L", label="", alternatives=(Alternative(id="L_1"),)
                            ),
                        ),
                    ),
                ),
            )
        )
        config = Configuration(id="c", tree_id="S", assignment={"L": "L_1"})
        assert render_configuration(tree, config) == "L_1"

    def test_render_rejects_invalid_configuration(self, tiny):
        broken = Configuration(id="c", tree_id="S", assignment={"A": "A_1"})
        with pytest.raises(InvalidConfigurationError) as exc:
            render_configuration(tiny, broken)
        assert "unassigned leaf: B1" in exc.value.findings

    def test_render_is_injective_on_samples(self, tree):
        rng = random.Random(7)
        assignments = {
            tuple(sorted(random_assignment(rng, tree).items())) for _ in range(100)
        }
        renders = {
            render_configuration(
                tree, Configuration(id="c", tree_id=tree.id, assignment=dict(items))
            )
            for items in assignments
        }
        assert len(renders) == len(assignments)


class TestDiffAndApply:
    def test_identity_diff_is_empty(self, tree, generations):
        for config in generations.values():
            assert diff_configurations(tree, config, config) == []

    def test_diff_follows_leaf_declaration_order(self, tree, generations):
        deltas = diff_configurations(tree, generations["S1G"], generations["S2G"])
        assert [(d.leaf, d.from_alt, d.to_alt) for d in deltas] == [
            ("B11", "B11_1", "B11_2"),
            ("B12", "B12_1", "B12_3"),
            ("B21", "B21_1", "B21_5"),
            ("B31", "B31_1", "B31_2"),
            ("B32", "B32_3", "B32_4"),
            ("B41", "B41_1", "B41_3"),
        ]

    def test_apply_diff_recovers_target(self, tree, generations):
        ids = sorted(generations)
        for a_id, b_id in zip(ids, ids[1:]):
            a, b = generations[a_id], generations[b_id]
            deltas = diff_configurations(tree, a, b)
            result = apply_deltas(tree, a, deltas, result_id=b.id)
            assert result.assignment == b.assignment
            assert result.id == b.id

    def test_apply_keeps_source_id_by_default(self, tree, generations):
        result = apply_deltas(tree, generations["S1G"], ())
        assert result.id == "S1G"
        assert result.assignment == generations["S1G"].assignment

    def test_duplicate_delta_target_rejected(self, tree, generations):
        delta = ChangeDelta(leaf="B11", from_alt="B11_1", to_alt="B11_2")
        again = ChangeDelta(leaf="B11", from_alt="B11_2", to_alt="B11_3")
        with pytest.raises(DeltaApplyError, match="duplicate delta target: leaf B11"):
            apply_deltas(tree, generations["S1G"], (delta, again))

    def test_unknown_leaf_rejected(self, tree, generations):
        delta = ChangeDelta(leaf="ZZ", from_alt="a", to_alt="b")
        with pytest.raises(DeltaApplyError, match="delta targets unknown leaf ZZ"):
            apply_deltas(tree, generations["S1G"], (delta,))

    def test_stale_precondition_rejected(self, tree, generations):
        delta = ChangeDelta(leaf="B11", from_alt="B11_9", to_alt="B11_2")
        with pytest.raises(
            DeltaApplyError, match="delta not applicable: leaf B11 holds B11_1, expected B11_9"
        ):
            apply_deltas(tree, generations["S1G"], (delta,))

    def test_unknown_target_alternative_rejected(self, tree, generations):
        delta = ChangeDelta(leaf="B11", from_alt="B11_1", to_alt="B11_99")
        with pytest.raises(
            DeltaApplyError, match="delta target B11_99 is not an alternative of leaf B11"
        ):
            apply_deltas(tree, generations["S1G"], (delta,))

    def test_diff_requires_matching_tree(self, tree, generations):
        foreign = Configuration(
            id="x", tree_id="other", assignment=dict(generations["S1G"].assignment)
        )
        with pytest.raises(InvalidConfigurationError):
            diff_configurations(tree, generations["S1G"], foreign)


class TestConfigurationFromAlternatives:
    def test_order_free(self, tiny):
        forward = configuration_from_alternatives(tiny, "c", ["A_2", "B1_1", "B2_1"])
        backward = configuration_from_alternatives(tiny, "c", ["B2_1", "B1_1", "A_2"])
        assert forward == backward

    def test_unknown_alternative_rejected(self, tiny):
        with pytest.raises(KeyError, match="offers alternative 'Q_1'"):
            configuration_from_alternatives(tiny, "c", ["A_1", "B1_1", "B2_1", "Q_1"])

    def test_two_for_one_leaf_rejected(self, tiny):
        with pytest.raises(ValueError, match="two alternatives given for leaf A"):
            configuration_from_alternatives(tiny, "c", ["A_1", "A_2", "B1_1", "B2_1"])

    def test_missing_leaf_rejected(self, tiny):
        with pytest.raises(InvalidConfigurationError):
            configuration_from_alternatives(tiny, "c", ["A_1", "B1_1"])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31))
def test_diff_apply_round_trip_random(seed):
    tree = builtin_model()
    rng = random.Random(seed)
    a = Configuration(id="a", tree_id=tree.id, assignment=random_assignment(rng, tree))
    b = Configuration(id="b", tree_id=tree.id, assignment=random_assignment(rng, tree))
    deltas = diff_configurations(tree, a, b)
    assert apply_deltas(tree, a, deltas, result_id="b").assignment == b.assignment
    changed = {d.leaf for d in deltas}
    assert changed == {
        leaf for leaf, alt in a.assignment.items() if b.assignment[leaf] != alt
    }

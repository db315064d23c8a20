"""Built-in models, configurations, stage sets, and on-disk export."""

from __future__ import annotations

import json

import pytest

from morphplan import (
    builtin_fixtures,
    builtin_generation,
    builtin_generations,
    builtin_model,
    builtin_operation_sets,
    builtin_reference_results,
    builtin_stage_plans,
    configuration_from_alternatives,
    export_datasets,
    parse_configuration,
    parse_model,
    parse_operation_set,
    render_configuration,
    run_builtin_example,
    serialize_activities,
    serialize_model,
    validate_configuration,
    validate_operation,
)

EXPECTED_EXPORT = [
    "wireless.json",
    "enterprise.json",
    "S1G.json",
    "S2G.json",
    "S3G.json",
    "S4G.json",
    "S5G.json",
    "S6G.json",
    "S7G.json",
    "S5G_adv1.json",
    "S5G_adv2.json",
    "table8.json",
    "table9.json",
    "activities.json",
    "chain.json",
]


class TestBuiltinModel:
    def test_cached_singleton(self):
        assert builtin_model() is builtin_model()

    def test_leaf_inventory(self, tree):
        assert [leaf.id for leaf in tree.leaves] == [
            "B11",
            "B12",
            "B21",
            "B22",
            "B31",
            "B32",
            "B41",
            "B42",
            "B43",
            "B441",
            "B442",
        ]
        sizes = {leaf.id: len(leaf.alternatives) for leaf in tree.leaves}
        assert sizes == {
            "B11": 6,
            "B12": 4,
            "B21": 9,
            "B22": 2,
            "B31": 6,
            "B32": 8,
            "B41": 8,
            "B42": 3,
            "B43": 2,
            "B441": 5,
            "B442": 2,
        }
        assert tree.alternative_count() == 55
        assert tree.depth() == 4

    def test_composition_spot_checks(self, tree):
        def composed(leaf_id: str, alt_id: str) -> tuple[str, ...]:
            for alt in tree.leaf(leaf_id).alternatives:
                if alt.id == alt_id:
                    return alt.composed_of
            raise AssertionError(alt_id)

        assert composed("B11", "B11_6") == ("B11_4", "B11_5")
        assert composed("B32", "B32_8") == ("B32_6", "B32_7")
        assert composed("B41", "B41_8") == ("B41_4", "B41_5", "B41_7")
        assert composed("B441", "B441_5") == ("B441_2", "B441_3", "B441_4")


class TestGenerations:
    def test_ids_and_validity(self, tree, generations):
        assert sorted(generations) == ["S1G", "S2G", "S3G", "S4G", "S5G", "S6G", "S7G"]
        for config in generations.values():
            assert validate_configuration(tree, config) == []
            assert config.tree_id == tree.id

    def test_reference_results_validate(self, tree, reference_results):
        assert sorted(reference_results) == ["S5G_adv1", "S5G_adv2"]
        for config in reference_results.values():
            assert validate_configuration(tree, config) == []

    def test_lookup_by_name(self):
        assert builtin_generation("S5G").assignment["B11"] == "B11_6"
        with pytest.raises(KeyError):
            builtin_generation("S0G")

    def test_s7g_differs_from_s6g_only_at_b442(self, generations):
        s6g, s7g = generations["S6G"], generations["S7G"]
        diffs = {
            leaf: (s6g.assignment[leaf], s7g.assignment[leaf])
            for leaf in s6g.assignment
            if s6g.assignment[leaf] != s7g.assignment[leaf]
        }
        assert diffs == {"B442": ("B442_1", "B442_2")}


class TestStageSets:
    def test_shapes(self, stage_sets):
        stage1, stage2 = stage_sets
        assert stage1.stage_id == "stage1" and stage2.stage_id == "stage2"
        assert stage1.budget == 190 and stage2.budget == 175
        assert [len(g.operations) for g in stage1.groups] == [2, 2, 4, 4, 5]
        assert [len(g.operations) for g in stage2.groups] == [2, 2, 4, 2]
        assert stage1.result_id == "S5G_adv1" and stage2.result_id == "S5G_adv2"
        assert stage1.reference_selection == ("U1_2", "U2_2", "U3_3", "U4_3", "U5_2")
        assert stage2.reference_selection == ("V1_2", "V2_2", "V3_2")

    def test_operations_validate_against_model(self, tree, stage_sets):
        for opset in stage_sets:
            for group in opset.groups:
                for operation in group.operations:
                    assert validate_operation(tree, operation) == []

    def test_stage1_sources_match_s5g(self, stage_sets, generations):
        stage1, _ = stage_sets
        s5g = generations["S5G"]
        for group in stage1.groups:
            for operation in group.operations:
                assert operation.from_alt == s5g.assignment[operation.leaf]

    def test_stage2_sources_match_stated_stage1_result(
        self, stage_sets, reference_results
    ):
        _, stage2 = stage_sets
        adv1 = reference_results["S5G_adv1"]
        for group in stage2.groups:
            for operation in group.operations:
                assert operation.from_alt == adv1.assignment[operation.leaf]

    def test_money_spot_checks(self, stage_sets):
        stage1, stage2 = stage_sets
        _, _, u5_5 = stage1.find_operation("U5_5")
        assert (u5_5.profit, u5_5.cost) == (140, 200)
        _, _, v4_2 = stage2.find_operation("V4_2")
        assert (v4_2.profit, v4_2.cost) == (120, 300)
        assert v4_2.to_alt == "B442_2"

    def test_stage_plans_wrap_the_sets(self, stage_sets):
        plans = builtin_stage_plans(solver="exhaustive")
        assert [p.stage_id for p in plans] == ["stage1", "stage2"]
        assert all(p.solver == "exhaustive" for p in plans)
        assert plans[0].groups == stage_sets[0].groups

    def test_run_builtin_example(self):
        strategy = run_builtin_example()
        assert strategy.failure is None
        assert strategy.chain_text() == "S5G => S5G_adv1 => S5G_adv2"


class TestActivities:
    def test_catalog(self):
        activities = builtin_fixtures().activities
        assert len(activities) == 17
        ids = [entry.id for entry in activities]
        assert ids == [f"O_{i}" for i in range(1, 18)]
        assert all(entry.description for entry in activities)
        assert activities[-1].description == "Satellite to satellite communication"
        assert activities[-1].note == "11"

    def test_serialization(self):
        doc = serialize_activities(builtin_fixtures().activities)
        assert len(doc["activities"]) == 17
        assert doc["activities"][0]["id"] == "O_1"


class TestEnterpriseFixture:
    def test_shape(self, enterprise):
        assert enterprise.id == "S"
        assert [leaf.id for leaf in enterprise.leaves] == [
            "E",
            "T",
            "R",
            "F",
            "Q",
            "B",
            "H",
            "K",
        ]
        assert enterprise.depth() == 4
        assert all(len(leaf.alternatives) == 2 for leaf in enterprise.leaves)

    def test_render_of_first_options(self, enterprise):
        config = configuration_from_alternatives(
            enterprise, "base", [f"{leaf.id}_1" for leaf in enterprise.leaves]
        )
        assert (
            render_configuration(enterprise, config)
            == "(E_1 * T_1) * ((R_1 * F_1 * Q_1) * B_1) * (H_1 * K_1)"
        )


class TestExport:
    def test_manifest(self, tmp_path):
        names = export_datasets(tmp_path)
        assert names == EXPECTED_EXPORT
        assert sorted(p.name for p in tmp_path.iterdir()) == sorted(EXPECTED_EXPORT)

    def test_documents_round_trip(self, tmp_path, tree, stage_sets):
        export_datasets(tmp_path)

        def load(name: str):
            return json.loads((tmp_path / name).read_text(encoding="utf-8"))

        assert parse_model(load("wireless.json")) == tree
        assert parse_model(load("enterprise.json")) == builtin_fixtures().enterprise
        for config in list(builtin_generations()) + list(builtin_reference_results()):
            assert parse_configuration(load(f"{config.id}.json")) == config
        assert parse_operation_set(load("table8.json")) == stage_sets[0]
        assert parse_operation_set(load("table9.json")) == stage_sets[1]
        chain = load("chain.json")
        assert chain == {"initial": "S5G.json", "stages": ["table8.json", "table9.json"]}
        for ref in [chain["initial"], *chain["stages"]]:
            assert (tmp_path / ref).exists()

    def test_export_is_byte_stable(self, tmp_path):
        first = tmp_path / "a"
        second = tmp_path / "b"
        export_datasets(first)
        export_datasets(second)
        for name in EXPECTED_EXPORT:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_trailing_newline(self, tmp_path):
        export_datasets(tmp_path)
        for name in EXPECTED_EXPORT:
            text = (tmp_path / name).read_text(encoding="utf-8")
            assert text.endswith("\n") and not text.endswith("\n\n")


def test_model_document_is_stable_under_round_trip(tree):
    doc = serialize_model(tree)
    assert serialize_model(parse_model(doc)) == doc

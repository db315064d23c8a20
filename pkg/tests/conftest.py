"""Shared fixtures and corpus helpers."""

from __future__ import annotations

import random

import pytest

from morphplan import (
    ComponentTree,
    Configuration,
    MckpInstance,
    MckpItem,
    OperationSet,
    build_mckp_instance,
    builtin_fixtures,
    builtin_generations,
    builtin_model,
    builtin_operation_sets,
    builtin_reference_results,
)


@pytest.fixture(scope="session")
def tree() -> ComponentTree:
    return builtin_model()


@pytest.fixture(scope="session")
def generations() -> dict[str, Configuration]:
    return {config.id: config for config in builtin_generations()}


@pytest.fixture(scope="session")
def reference_results() -> dict[str, Configuration]:
    return {config.id: config for config in builtin_reference_results()}


@pytest.fixture(scope="session")
def stage_sets() -> tuple[OperationSet, OperationSet]:
    return builtin_operation_sets()


@pytest.fixture(scope="session")
def stage1_instance(stage_sets) -> MckpInstance:
    stage1, _ = stage_sets
    return build_mckp_instance(stage1.groups, stage1.budget, stage1.comparator)


@pytest.fixture(scope="session")
def stage2_instance(stage_sets) -> MckpInstance:
    _, stage2 = stage_sets
    return build_mckp_instance(stage2.groups, stage2.budget, stage2.comparator)


@pytest.fixture(scope="session")
def enterprise() -> ComponentTree:
    return builtin_fixtures().enterprise


def random_instance(rng: random.Random) -> MckpInstance:
    """Draw a solver instance with up to 6 groups of up to 6 items.

    Half the draws use a narrow value range so that ties, zero costs, and
    tight budgets occur often; the rest use the full documented ranges
    (profits and costs up to 30.0, budgets up to 60.0, both comparators).
    """
    comparator = "inclusive" if rng.random() < 0.5 else "exclusive"
    if rng.random() < 0.5:
        value_cap, budget_cap = 12, 40
    else:
        value_cap, budget_cap = 300, 600
    groups = tuple(
        tuple(
            MckpItem(profit=rng.randint(0, value_cap), cost=rng.randint(0, value_cap))
            for _ in range(rng.randint(1, 6))
        )
        for _ in range(rng.randint(1, 6))
    )
    return MckpInstance(
        groups=groups, budget=rng.randint(0, budget_cap), comparator=comparator
    )


def random_assignment(rng: random.Random, tree: ComponentTree) -> dict[str, str]:
    return {
        leaf.id: rng.choice(leaf.alternative_ids()) for leaf in tree.leaves
    }

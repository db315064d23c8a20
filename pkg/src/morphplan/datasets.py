"""Built-in datasets: models, configuration catalog, and stage plans.

Everything here is constructed on demand, validated through the regular
parsers, and exportable as interchange documents. The wireless model
covers seven technology generations plus the two-stage improvement
example (stage budgets 19.0 and 17.5); the enterprise model is a small
structural fixture with placeholder alternatives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .changeops import (
    ChangeOperation,
    OperationGroup,
    OperationSet,
    serialize_operation_set,
)
from .morphology import (
    Alternative,
    ComponentTree,
    CompositeNode,
    Configuration,
    LeafComponent,
    configuration_from_alternatives,
    serialize_configuration,
    serialize_model,
)
from .planner import StagePlan, Strategy, plan_chain, serialize_chain, stage_plan_from_set
from .tenths import parse_tenths


@dataclass(frozen=True)
class ActivityCatalogEntry:
    """One cataloged improvement activity; descriptive only, never priced."""

    id: str
    description: str
    note: str


@dataclass(frozen=True)
class AuxiliaryFixtures:
    enterprise: ComponentTree
    activities: tuple[ActivityCatalogEntry, ...]


def _alt(alt_id: str, label: str, composed: tuple[str, ...] = ()) -> Alternative:
    return Alternative(id=alt_id, label=label, composed_of=composed)


def _leaf(leaf_id: str, label: str, alternatives: list[Alternative]) -> LeafComponent:
    return LeafComponent(id=leaf_id, label=label, alternatives=tuple(alternatives))


@lru_cache(maxsize=1)
def builtin_model() -> ComponentTree:
    """The wireless system hierarchy: 11 leaves, 55 alternatives."""
    b11 = _leaf("B11", "technology", [
        _alt("B11_1", "analog cellular technology"),
        _alt("B11_2", "digital cellular technology (digital narrow band circuit data)"),
        _alt("B11_3", "packet data"),
        _alt("B11_4", "digital broadband packet data & IP technology"),
        _alt("B11_5", "all IP very high throughput"),
        _alt("B11_6", "flat IP network", ("B11_4", "B11_5")),
    ])
    b12 = _leaf("B12", "switching", [
        _alt("B12_1", "circuit"),
        _alt("B12_2", "packet"),
        _alt("B12_3", "circuit & packet", ("B12_1", "B12_2")),
        _alt("B12_4", "all packet"),
    ])
    b21 = _leaf("B21", "service", [
        _alt("B21_1", "mobile telephony (voice)"),
        _alt("B21_2", "digital voice"),
        _alt("B21_3", "SMS"),
        _alt("B21_4", "higher capacity packetized data"),
        _alt("B21_5", "digital voice & SMS & higher capacity packetized data",
             ("B21_2", "B21_3", "B21_4")),
        _alt("B21_6", "integrated high quality audio, video and data"),
        _alt("B21_7", "dynamic information access, wearable devices"),
        _alt("B21_8", "AI capability"),
        _alt("B21_9", "dynamic information access, wearable devices & AI capability",
             ("B21_7", "B21_8")),
    ])
    b22 = _leaf("B22", "cloud computing", [
        _alt("B22_1", "none"),
        _alt("B22_2", "cloud computing"),
    ])
    b31 = _leaf("B31", "data bandwidth/throughput speed/data rates", [
        _alt("B31_1", "2 kbps"),
        _alt("B31_2", "64 kbps"),
        _alt("B31_3", "400 kbps to 30 Mbps"),
        _alt("B31_4", "3-5 Mbps, 100 Mbps (Wifi)"),
        _alt("B31_5", "200 mbps to 1 Gbps"),
        _alt("B31_6", "approx 20 Gbps"),
    ])
    b32 = _leaf("B32", "multiplexing/access technology", [
        _alt("B32_1", "FDMA"),
        _alt("B32_2", "TDMA"),
        _alt("B32_3", "FDMA & TDMA", ("B32_1", "B32_2")),
        _alt("B32_4", "CDMA"),
        _alt("B32_5", "TDMA & CDMA", ("B32_2", "B32_4")),
        _alt("B32_6", "OFDMA"),
        _alt("B32_7", "LAS-CDMA"),
        _alt("B32_8", "OFDMA & LAS-CDMA", ("B32_6", "B32_7")),
    ])
    b41 = _leaf("B41", "core network", [
        _alt("B41_1", "PSTN"),
        _alt("B41_2", "GSM"),
        _alt("B41_3", "PSTN & GSM", ("B41_1", "B41_2")),
        _alt("B41_4", "packet N/W"),
        _alt("B41_5", "Internet"),
        _alt("B41_6", "packet N/W & Internet", ("B41_4", "B41_5")),
        _alt("B41_7", "satellite network"),
        _alt("B41_8", "packet N/W & Internet & satellite network",
             ("B41_4", "B41_5", "B41_7")),
    ])
    b42 = _leaf("B42", "handoff", [
        _alt("B42_1", "horizontal"),
        _alt("B42_2", "vertical"),
        _alt("B42_3", "horizontal & vertical", ("B42_1", "B42_2")),
    ])
    b43 = _leaf("B43", "heterogeneous networks (HetNets)", [
        _alt("B43_1", "none"),
        _alt("B43_2", "aggregation of different networks (HetNets)"),
    ])
    b441 = _leaf("B441", "satellite network", [
        _alt("B441_1", "none"),
        _alt("B441_2", "telecommunication network"),
        _alt("B441_3", "earth imaging"),
        _alt("B441_4", "navigation"),
        _alt("B441_5", "telecommunication & earth imaging & navigation",
             ("B441_2", "B441_3", "B441_4")),
    ])
    b442 = _leaf("B442", "satellite functions", [
        _alt("B442_1", "none"),
        _alt("B442_2", "satellite roaming"),
    ])
    root = CompositeNode(id="S", label="wireless mobile system", children=(
        CompositeNode(id="B1", label="definition", children=(b11, b12)),
        CompositeNode(id="B2", label="services", children=(b21, b22)),
        CompositeNode(id="B3", label="data transmission & access", children=(b31, b32)),
        CompositeNode(id="B4", label="networking", children=(
            b41,
            b42,
            b43,
            CompositeNode(id="B44", label="space communication", children=(b441, b442)),
        )),
    ))
    return ComponentTree(root=root)


# one alternative id per leaf, in leaf declaration order:
# B11, B12, B21, B22, B31, B32, B41, B42, B43, B441, B442
_GENERATIONS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("S1G", ("B11_1", "B12_1", "B21_1", "B22_1", "B31_1", "B32_3",
             "B41_1", "B42_1", "B43_1", "B441_1", "B442_1")),
    ("S2G", ("B11_2", "B12_3", "B21_5", "B22_1", "B31_2", "B32_4",
             "B41_3", "B42_1", "B43_1", "B441_1", "B442_1")),
    ("S3G", ("B11_4", "B12_2", "B21_6", "B22_1", "B31_3", "B32_5",
             "B41_4", "B42_1", "B43_1", "B441_1", "B442_1")),
    ("S4G", ("B11_5", "B12_4", "B21_7", "B22_1", "B31_4", "B32_5",
             "B41_5", "B42_3", "B43_1", "B441_1", "B442_1")),
    ("S5G", ("B11_6", "B12_4", "B21_8", "B22_2", "B31_5", "B32_5",
             "B41_5", "B42_3", "B43_2", "B441_1", "B442_1")),
    ("S6G", ("B11_6", "B12_4", "B21_9", "B22_2", "B31_6", "B32_8",
             "B41_8", "B42_3", "B43_2", "B441_5", "B442_1")),
    ("S7G", ("B11_6", "B12_4", "B21_9", "B22_2", "B31_6", "B32_8",
             "B41_8", "B42_3", "B43_2", "B441_5", "B442_2")),
)

_REFERENCE_RESULTS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("S5G_adv1", ("B11_6", "B12_4", "B21_9", "B22_2", "B31_6", "B32_7",
                  "B41_7", "B42_3", "B43_2", "B441_2", "B442_1")),
    ("S5G_adv2", ("B11_6", "B12_4", "B21_9", "B22_2", "B31_6", "B32_8",
                  "B41_8", "B42_3", "B43_2", "B441_3", "B442_1")),
)


@lru_cache(maxsize=1)
def builtin_generations() -> tuple[Configuration, ...]:
    """The seven generation descriptions, all valid over builtin_model()."""
    tree = builtin_model()
    return tuple(
        configuration_from_alternatives(tree, name, alternatives)
        for name, alternatives in _GENERATIONS
    )


def builtin_generation(name: str) -> Configuration:
    for config in builtin_generations():
        if config.id == name:
            return config
    raise KeyError(f"no built-in generation named {name!r}")


@lru_cache(maxsize=1)
def builtin_reference_results() -> tuple[Configuration, Configuration]:
    """The claimed outcomes of the two improvement stages, as configurations."""
    tree = builtin_model()
    first, second = (
        configuration_from_alternatives(tree, name, alternatives)
        for name, alternatives in _REFERENCE_RESULTS
    )
    return first, second


def _op(op_id: str, group: int, leaf: str, from_alt: str, to_alt: str | None,
        profit: str, cost: str) -> ChangeOperation:
    return ChangeOperation(
        id=op_id,
        group=group,
        leaf=leaf,
        from_alt=from_alt,
        to_alt=to_alt,
        profit=parse_tenths(profit),
        cost=parse_tenths(cost),
    )


@lru_cache(maxsize=1)
def builtin_operation_sets() -> tuple[OperationSet, OperationSet]:
    """The two stage documents: 5 groups/17 operations, then 4 groups/10."""
    stage1 = OperationSet(
        stage_id="stage1",
        budget=parse_tenths("19.0"),
        comparator="inclusive",
        result_id="S5G_adv1",
        reference_selection=("U1_2", "U2_2", "U3_3", "U4_3", "U5_2"),
        groups=(
            OperationGroup(index=1, leaf="B21", operations=(
                _op("U1_1", 1, "B21", "B21_8", None, "0.0", "0.0"),
                _op("U1_2", 1, "B21", "B21_8", "B21_9", "2.0", "3.0"),
            )),
            OperationGroup(index=2, leaf="B31", operations=(
                _op("U2_1", 2, "B31", "B31_5", None, "0.0", "0.0"),
                _op("U2_2", 2, "B31", "B31_5", "B31_6", "4.0", "5.0"),
            )),
            OperationGroup(index=3, leaf="B32", operations=(
                _op("U3_1", 3, "B32", "B32_5", None, "0.0", "0.0"),
                _op("U3_2", 3, "B32", "B32_5", "B32_6", "1.0", "2.0"),
                _op("U3_3", 3, "B32", "B32_5", "B32_7", "3.6", "4.0"),
                _op("U3_4", 3, "B32", "B32_5", "B32_8", "3.6", "6.0"),
            )),
            OperationGroup(index=4, leaf="B41", operations=(
                _op("U4_1", 4, "B41", "B41_5", None, "0.0", "0.0"),
                _op("U4_2", 4, "B41", "B41_5", "B41_6", "3.6", "6.0"),
                _op("U4_3", 4, "B41", "B41_5", "B41_7", "7.0", "7.0"),
                _op("U4_4", 4, "B41", "B41_5", "B41_8", "9.0", "12.0"),
            )),
            OperationGroup(index=5, leaf="B441", operations=(
                _op("U5_1", 5, "B441", "B441_1", None, "0.0", "0.0"),
                _op("U5_2", 5, "B441", "B441_1", "B441_2", "5.0", "5.0"),
                _op("U5_3", 5, "B441", "B441_1", "B441_3", "5.6", "7.0"),
                _op("U5_4", 5, "B441", "B441_1", "B441_4", "6.0", "8.0"),
                _op("U5_5", 5, "B441", "B441_1", "B441_5", "14.0", "20.0"),
            )),
        ),
    )
    stage2 = OperationSet(
        stage_id="stage2",
        budget=parse_tenths("17.5"),
        comparator="inclusive",
        result_id="S5G_adv2",
        reference_selection=("V1_2", "V2_2", "V3_2"),
        groups=(
            OperationGroup(index=1, leaf="B32", operations=(
                _op("V1_1", 1, "B32", "B32_7", None, "0.0", "0.0"),
                _op("V1_2", 1, "B32", "B32_7", "B32_8", "4.5", "4.0"),
            )),
            OperationGroup(index=2, leaf="B41", operations=(
                _op("V2_1", 2, "B41", "B41_7", None, "0.0", "0.0"),
                _op("V2_2", 2, "B41", "B41_7", "B41_8", "6.5", "7.0"),
            )),
            OperationGroup(index=3, leaf="B441", operations=(
                _op("V3_1", 3, "B441", "B441_2", None, "0.0", "0.0"),
                _op("V3_2", 3, "B441", "B441_2", "B441_3", "6.0", "6.5"),
                _op("V3_3", 3, "B441", "B441_2", "B441_4", "6.5", "7.5"),
                _op("V3_4", 3, "B441", "B441_2", "B441_5", "11.0", "18.0"),
            )),
            OperationGroup(index=4, leaf="B442", operations=(
                _op("V4_1", 4, "B442", "B442_1", None, "0.0", "0.0"),
                _op("V4_2", 4, "B442", "B442_1", "B442_2", "12.0", "30.0"),
            )),
        ),
    )
    return stage1, stage2


def builtin_stage_plans(solver: str = "dp") -> tuple[StagePlan, StagePlan]:
    stage1, stage2 = builtin_operation_sets()
    return stage_plan_from_set(stage1, solver), stage_plan_from_set(stage2, solver)


_ACTIVITIES: tuple[tuple[str, str, str], ...] = (
    ("O_1", "Central architecture: cloud radio-access networks (RAN) based on "
            "SDR and coordinated central controllers", "1.1"),
    ("O_2", "Central architecture: cloud basic networks (CN) based on SDN", "1.2"),
    ("O_3", "Multidimensional antennas MIMO", "2"),
    ("O_4", "Flexible common usage of frequency resources", "3.1"),
    ("O_5", "Terminal and network heterogeneity (different types of access "
            "networks, e.g., WiMAX, WiFi, UMTS)", "3.2"),
    ("O_6", "Allocation and management of resources in heterogeneous networks", "3.3"),
    ("O_7", "Inter-network joint work for different radio-access technologies", "3.4"),
    ("O_8", "Self-adaptation and self-optimization networks", "3.5"),
    ("O_9", "Smart homes, smart cities, smart villages", "3.6"),
    ("O_10", "Device-centric architectures", "4"),
    ("O_11", "Very wide area coverage", "5"),
    ("O_12", "User personalization (high data transfer rates, access to large "
             "repository of data and services, flexibility)", "6"),
    ("O_13", "Interoperability (unified global standard, global mobility and "
             "service portability, i.e., different services from different "
             "service providers)", "7"),
    ("O_14", "Network convergence (convergence with both devices and services)", "8"),
    ("O_15", "Lower power consumption", "9"),
    ("O_16", "Ultra fast access of Internet", "10"),
    ("O_17", "Satellite to satellite communication", "11"),
)


def _placeholder_leaf(leaf_id: str, label: str) -> LeafComponent:
    return _leaf(leaf_id, label, [
        _alt(f"{leaf_id}_1", "option 1"),
        _alt(f"{leaf_id}_2", "option 2"),
    ])


@lru_cache(maxsize=1)
def builtin_fixtures() -> AuxiliaryFixtures:
    """Three-layer enterprise network fixture plus the activity catalog."""
    root = CompositeNode(id="S", label="enterprise network", children=(
        CompositeNode(id="A", label="access layer", children=(
            _placeholder_leaf("E", "client nodes"),
            _placeholder_leaf("T", "connections"),
        )),
        CompositeNode(id="D", label="distribution layer", children=(
            CompositeNode(id="M", label="management", children=(
                _placeholder_leaf("R", "routing"),
                _placeholder_leaf("F", "filtering"),
                _placeholder_leaf("Q", "QoS policies"),
            )),
            _placeholder_leaf("B", "branch-office WAN connections"),
        )),
        CompositeNode(id="C", label="core layer", children=(
            _placeholder_leaf("H", "highest-speed connections between distribution-layer devices"),
            _placeholder_leaf("K", "core network topology"),
        )),
    ))
    activities = tuple(
        ActivityCatalogEntry(id=entry_id, description=description, note=note)
        for entry_id, description, note in _ACTIVITIES
    )
    return AuxiliaryFixtures(enterprise=ComponentTree(root=root), activities=activities)


def run_builtin_example(solver: str = "dp") -> Strategy:
    """Plan the built-in two-stage chain from S5G."""
    return plan_chain(
        builtin_model(), builtin_generation("S5G"), builtin_stage_plans(solver)
    )


def serialize_activities(activities) -> dict:
    return {
        "activities": [
            {"id": entry.id, "description": entry.description, "note": entry.note}
            for entry in activities
        ]
    }


def export_datasets(directory) -> list[str]:
    """Write every built-in document under a directory; returns the file names."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    fixtures = builtin_fixtures()
    stage1, stage2 = builtin_operation_sets()
    adv1, adv2 = builtin_reference_results()
    documents: list[tuple[str, dict]] = [
        ("wireless.json", serialize_model(builtin_model())),
        ("enterprise.json", serialize_model(fixtures.enterprise)),
    ]
    documents.extend(
        (f"{config.id}.json", serialize_configuration(config))
        for config in builtin_generations()
    )
    documents.append((f"{adv1.id}.json", serialize_configuration(adv1)))
    documents.append((f"{adv2.id}.json", serialize_configuration(adv2)))
    documents.append(("table8.json", serialize_operation_set(stage1)))
    documents.append(("table9.json", serialize_operation_set(stage2)))
    documents.append(("activities.json", serialize_activities(fixtures.activities)))
    documents.append(
        ("chain.json", serialize_chain("S5G.json", ["table8.json", "table9.json"]))
    )
    names = []
    for name, document in documents:
        path = target / name
        path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        names.append(name)
    return names

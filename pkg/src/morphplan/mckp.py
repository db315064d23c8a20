"""Multiple-choice knapsack core.

An instance is an ordered list of item groups with a shared cost budget:
pick at most one item per group, maximize total profit, keep total cost
within budget. Profits, costs, and budgets are integer tenths throughout
so every comparison is exact.

Three solvers share one solution type: a ratio greedy heuristic, an exact
dynamic program, and a brute-force enumerator kept as an independent
oracle for the dynamic program. All three resolve ties identically, so
equal-profit optima come out as the same selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import InstanceError, SchemaError
from .tenths import format_tenths, parse_tenths

COMPARATORS = ("inclusive", "exclusive")

# largest budget solve_dp will build a table for
DP_BUDGET_LIMIT = 10_000_000
# largest per-group choice product solve_exhaustive will enumerate
EXHAUSTIVE_SIZE_LIMIT = 1_000_000


@dataclass(frozen=True)
class MckpItem:
    profit: int
    cost: int


@dataclass(frozen=True)
class MckpInstance:
    """Groups of candidate items under one budget.

    comparator "inclusive" admits total cost <= budget, "exclusive"
    demands total cost < budget. Group and item order is part of the
    instance: solvers break ties by it.
    """

    groups: tuple[tuple[MckpItem, ...], ...]
    budget: int
    comparator: str = "inclusive"

    def __post_init__(self) -> None:
        if self.comparator not in COMPARATORS:
            raise InstanceError(f"unknown comparator {self.comparator!r}")
        if not isinstance(self.budget, int) or self.budget < 0:
            raise InstanceError("budget must be a nonnegative integer in tenths")
        for gi, group in enumerate(self.groups):
            if not group:
                raise InstanceError(f"group {gi + 1} is empty")
            for j, item in enumerate(group):
                if not isinstance(item.profit, int) or item.profit < 0:
                    raise InstanceError(f"group {gi + 1}, item {j}: negative profit")
                if not isinstance(item.cost, int) or item.cost < 0:
                    raise InstanceError(f"group {gi + 1}, item {j}: negative cost")

    @property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(len(group) for group in self.groups)

    def cost_limit(self) -> int:
        """Largest admissible total cost; -1 when nothing nonempty fits."""
        return self.budget if self.comparator == "inclusive" else self.budget - 1


@dataclass(frozen=True)
class MckpSolution:
    """Per-group choices: item index, or None for no selection."""

    selection: tuple[int | None, ...]
    total_profit: int
    total_cost: int
    solver: str


@dataclass(frozen=True)
class GreedyStep:
    """One entry of the greedy scan, in rank order."""

    group: int
    item: int
    profit: int
    cost: int
    ratio_text: str
    decision: str


def selection_totals(
    instance: MckpInstance, selection: Sequence[int | None]
) -> tuple[int, int]:
    """Sum (profit, cost) of a full-length, in-range selection."""
    profit = 0
    cost = 0
    for gi, j in enumerate(selection):
        if j is None:
            continue
        item = instance.groups[gi][j]
        profit += item.profit
        cost += item.cost
    return profit, cost


def _empty_solution(instance: MckpInstance, solver: str) -> MckpSolution:
    return MckpSolution(
        selection=(None,) * len(instance.groups),
        total_profit=0,
        total_cost=0,
        solver=solver,
    )


# --- greedy ----------------------------------------------------------------

def _ratio_text(profit: int, cost: int) -> str:
    if cost == 0:
        return "inf"
    return f"{profit / cost:.3f}"


def solve_greedy_with_trace(
    instance: MckpInstance,
) -> tuple[MckpSolution, tuple[GreedyStep, ...]]:
    """Ratio greedy with its full scan trace.

    Items with profit 0 never enter the ranking. Zero-cost items rank
    ahead of everything (their ratio is taken as infinite); the rest sort
    by exact profit/cost descending, ties by lower cost, then lower group
    index, then lower item index. The scan takes an item iff its group is
    still free and the grown total stays within budget.
    """
    ranked = []
    for gi, group in enumerate(instance.groups):
        for j, item in enumerate(group):
            if item.profit <= 0:
                continue
            if item.cost == 0:
                key = (0, Fraction(0), item.cost, gi, j)
            else:
                key = (1, -Fraction(item.profit, item.cost), item.cost, gi, j)
            ranked.append((key, gi, j, item))
    ranked.sort(key=lambda entry: entry[0])

    limit = instance.cost_limit()
    selection: list[int | None] = [None] * len(instance.groups)
    total_profit = 0
    total_cost = 0
    steps = []
    for _, gi, j, item in ranked:
        if selection[gi] is not None:
            decision = "skipped: group already selected"
        elif total_cost + item.cost > limit:
            decision = "skipped: would exceed budget"
        else:
            decision = "selected"
            selection[gi] = j
            total_profit += item.profit
            total_cost += item.cost
        steps.append(
            GreedyStep(
                group=gi,
                item=j,
                profit=item.profit,
                cost=item.cost,
                ratio_text=_ratio_text(item.profit, item.cost),
                decision=decision,
            )
        )
    solution = MckpSolution(
        selection=tuple(selection),
        total_profit=total_profit,
        total_cost=total_cost,
        solver="greedy",
    )
    return solution, tuple(steps)


def solve_greedy(instance: MckpInstance) -> MckpSolution:
    solution, _ = solve_greedy_with_trace(instance)
    return solution


# --- exact dynamic program -------------------------------------------------

def solve_dp(instance: MckpInstance) -> MckpSolution:
    """Certified optimum via a suffix table over groups x budget tenths.

    Among equal-profit solutions the cheapest wins; among equal
    (profit, cost) the reconstruction walks groups first to last taking
    the earliest option (no selection before item 0) that still reaches
    the optimum, which is exactly the enumeration order of
    solve_exhaustive, so the two agree selection-for-selection.
    """
    if instance.budget > DP_BUDGET_LIMIT:
        raise InstanceError(
            f"budget {instance.budget} tenths exceeds the table guard ({DP_BUDGET_LIMIT})"
        )
    limit = instance.cost_limit()
    count = len(instance.groups)
    if limit < 0 or count == 0:
        return _empty_solution(instance, "dp")

    width = limit + 1
    zero = np.zeros(width, dtype=np.int64)
    # levels[g] = (best profit, its min cost) over groups g.. at each capacity
    levels: list[tuple[np.ndarray, np.ndarray]] = [(zero, zero)] * (count + 1)
    for g in range(count - 1, -1, -1):
        next_profit, next_cost = levels[g + 1]
        profit = next_profit.copy()
        cost = next_cost.copy()
        for item in instance.groups[g]:
            if item.cost >= width:
                continue
            cand_profit = next_profit[: width - item.cost] + item.profit
            cand_cost = next_cost[: width - item.cost] + item.cost
            cur_profit = profit[item.cost :]
            cur_cost = cost[item.cost :]
            better = (cand_profit > cur_profit) | (
                (cand_profit == cur_profit) & (cand_cost < cur_cost)
            )
            np.copyto(cur_profit, cand_profit, where=better)
            np.copyto(cur_cost, cand_cost, where=better)
        levels[g] = (profit, cost)

    selection: list[int | None] = []
    w = limit
    for g in range(count):
        profit, cost = levels[g]
        next_profit, next_cost = levels[g + 1]
        target = (int(profit[w]), int(cost[w]))
        if (int(next_profit[w]), int(next_cost[w])) == target:
            selection.append(None)
            continue
        chosen = None
        for j, item in enumerate(instance.groups[g]):
            if item.cost > w:
                continue
            reached = (
                int(next_profit[w - item.cost]) + item.profit,
                int(next_cost[w - item.cost]) + item.cost,
            )
            if reached == target:
                chosen = j
                w -= item.cost
                break
        assert chosen is not None, "table value without a matching option"
        selection.append(chosen)

    top_profit, top_cost = levels[0]
    return MckpSolution(
        selection=tuple(selection),
        total_profit=int(top_profit[limit]),
        total_cost=int(top_cost[limit]),
        solver="dp",
    )


# --- brute-force oracle ----------------------------------------------------

def solve_exhaustive(instance: MckpInstance) -> MckpSolution:
    """Enumerate every per-group choice; the reference the dp is checked against.

    Kept deliberately independent of solve_dp: plain recursion, no tables,
    cost-overrun pruning only. Choices are visited with skip first, then
    items in order, and only strict improvements replace the incumbent, so
    the winner is the earliest optimum in that order.
    """
    size = 1
    for group in instance.groups:
        size *= len(group)
    if size > EXHAUSTIVE_SIZE_LIMIT:
        raise InstanceError(
            f"choice space {size} exceeds the enumeration guard ({EXHAUSTIVE_SIZE_LIMIT})"
        )
    limit = instance.cost_limit()
    count = len(instance.groups)
    if limit < 0 or count == 0:
        return _empty_solution(instance, "exhaustive")

    groups = [tuple((item.profit, item.cost) for item in group) for group in instance.groups]
    best_profit = 0
    best_cost = 0
    best_selection: tuple[int | None, ...] = (None,) * count
    picked: list[int | None] = [None] * count

    def descend(g: int, profit: int, cost: int) -> None:
        nonlocal best_profit, best_cost, best_selection
        if g == count:
            if profit > best_profit or (profit == best_profit and cost < best_cost):
                best_profit = profit
                best_cost = cost
                best_selection = tuple(picked)
            return
        descend(g + 1, profit, cost)
        for j, (item_profit, item_cost) in enumerate(groups[g]):
            grown = cost + item_cost
            if grown > limit:
                continue
            picked[g] = j
            descend(g + 1, profit + item_profit, grown)
        picked[g] = None

    descend(0, 0, 0)
    return MckpSolution(
        selection=best_selection,
        total_profit=best_profit,
        total_cost=best_cost,
        solver="exhaustive",
    )


# --- feasibility checks ----------------------------------------------------

def _budget_finding(instance: MckpInstance, total_cost: int) -> str | None:
    """Budget-violation message, or None. An empty total never violates."""
    if total_cost <= instance.cost_limit():
        return None
    relation = ">" if instance.comparator == "inclusive" else ">="
    return (
        f"budget exceeded: cost {format_tenths(total_cost)} "
        f"{relation} budget {format_tenths(instance.budget)}"
    )


def verify_solution(instance: MckpInstance, solution: MckpSolution) -> list[str]:
    """Feasibility report; empty iff the solution is well-formed and fits."""
    findings: list[str] = []
    count = len(instance.groups)
    if len(solution.selection) != count:
        findings.append(
            f"selection length {len(solution.selection)} does not match group count {count}"
        )
        return findings
    any_selected = False
    for gi, j in enumerate(solution.selection):
        if j is None:
            continue
        any_selected = True
        if not isinstance(j, int) or not 0 <= j < len(instance.groups[gi]):
            findings.append(f"group {gi + 1}: item index {j!r} out of range")
            return findings
    profit, cost = selection_totals(instance, solution.selection)
    if solution.total_profit != profit:
        findings.append(
            f"stated profit {format_tenths(solution.total_profit)} does not match "
            f"selected total {format_tenths(profit)}"
        )
    if solution.total_cost != cost:
        findings.append(
            f"stated cost {format_tenths(solution.total_cost)} does not match "
            f"selected total {format_tenths(cost)}"
        )
    if any_selected:
        budget_finding = _budget_finding(instance, cost)
        if budget_finding is not None:
            findings.append(budget_finding)
    return findings


def verify_picks(
    instance: MckpInstance, picks: Sequence[tuple[int, int]]
) -> list[str]:
    """Check explicit (group, item) picks, both indices 0-based.

    Unlike a solution's selection this form can name one group twice,
    which is reported rather than assumed away.
    """
    findings: list[str] = []
    count = len(instance.groups)
    taken: set[int] = set()
    total_cost = 0
    for gi, j in picks:
        if not 0 <= gi < count:
            findings.append(f"group reference {gi + 1} out of range (instance has {count} groups)")
            continue
        if not 0 <= j < len(instance.groups[gi]):
            findings.append(f"group {gi + 1}: item index {j} out of range")
            continue
        if gi in taken:
            findings.append(f"multiple selections in group {gi + 1}")
            continue
        taken.add(gi)
        total_cost += instance.groups[gi][j].cost
    if findings:
        return findings
    if picks:
        budget_finding = _budget_finding(instance, total_cost)
        if budget_finding is not None:
            findings.append(budget_finding)
    return findings


# --- interchange -----------------------------------------------------------

def _parse_money(raw, path: str) -> int:
    try:
        return parse_tenths(raw)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def parse_instance(document: Mapping) -> MckpInstance:
    """Read an instance document {"budget", "comparator", "groups": [[...]]}."""
    if not isinstance(document, Mapping):
        raise SchemaError("instance document must be a JSON object")
    budget = _parse_money(document.get("budget"), "$.budget")
    comparator = document.get("comparator", "inclusive")
    if comparator not in COMPARATORS:
        raise SchemaError(f"$.comparator: expected one of {', '.join(COMPARATORS)}")
    raw_groups = document.get("groups")
    if not isinstance(raw_groups, Sequence) or isinstance(raw_groups, (str, bytes)):
        raise SchemaError("$.groups: expected a list of item lists")
    groups = []
    for gi, raw_group in enumerate(raw_groups):
        if not isinstance(raw_group, Sequence) or isinstance(raw_group, (str, bytes)):
            raise SchemaError(f"$.groups[{gi}]: expected a list of items")
        items = []
        for j, raw_item in enumerate(raw_group):
            path = f"$.groups[{gi}][{j}]"
            if not isinstance(raw_item, Mapping):
                raise SchemaError(f"{path}: expected an object")
            items.append(
                MckpItem(
                    profit=_parse_money(raw_item.get("profit"), f"{path}.profit"),
                    cost=_parse_money(raw_item.get("cost"), f"{path}.cost"),
                )
            )
        groups.append(tuple(items))
    return MckpInstance(groups=tuple(groups), budget=budget, comparator=comparator)


def serialize_instance(instance: MckpInstance) -> dict:
    return {
        "budget": format_tenths(instance.budget),
        "comparator": instance.comparator,
        "groups": [
            [
                {"profit": format_tenths(item.profit), "cost": format_tenths(item.cost)}
                for item in group
            ]
            for group in instance.groups
        ],
    }


def parse_solution(document: Mapping) -> MckpSolution:
    if not isinstance(document, Mapping):
        raise SchemaError("solution document must be a JSON object")
    solver = document.get("solver")
    if not isinstance(solver, str) or not solver:
        raise SchemaError("$.solver: missing or non-string solver name")
    raw_selection = document.get("selection")
    if not isinstance(raw_selection, Sequence) or isinstance(raw_selection, (str, bytes)):
        raise SchemaError("$.selection: expected a list of item indices or nulls")
    selection: list[int | None] = []
    for gi, entry in enumerate(raw_selection):
        if entry is None:
            selection.append(None)
        elif isinstance(entry, int) and not isinstance(entry, bool) and entry >= 0:
            selection.append(entry)
        else:
            raise SchemaError(f"$.selection[{gi}]: expected a nonnegative index or null")
    return MckpSolution(
        selection=tuple(selection),
        total_profit=_parse_money(document.get("profit"), "$.profit"),
        total_cost=_parse_money(document.get("cost"), "$.cost"),
        solver=solver,
    )


def serialize_solution(solution: MckpSolution) -> dict:
    return {
        "solver": solution.solver,
        "profit": format_tenths(solution.total_profit),
        "cost": format_tenths(solution.total_cost),
        "selection": list(solution.selection),
    }

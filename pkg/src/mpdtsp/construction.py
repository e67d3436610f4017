"""Shared machinery for multi-start tour construction.

Both greedy builders construct one tour per start node; the best tour is the
cheapest successful one, with ties broken by the lowest start id so results
never depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .model import Instance, InfeasibleInstanceError, Tour, validate


class DeadEndError(Exception):
    """Construction stalled: nodes remain but none passes both feasibility gates."""

    def __init__(self, init: int, partial: list[int], remainder: Iterable[int]):
        self.init = init
        self.partial = tuple(partial)
        self.remainder = tuple(sorted(remainder))
        super().__init__(
            f"dead end from start {init}: {len(self.remainder)} nodes unreachable "
            f"after partial tour {list(self.partial)}"
        )


class MultiStartError(Exception):
    """Every attempted start node failed to produce a tour."""

    def __init__(self, failures: dict[int, Exception]):
        self.failures = dict(failures)
        summary = "; ".join(f"init {i}: {e}" for i, e in sorted(failures.items())[:5])
        more = "" if len(failures) <= 5 else f" (+{len(failures) - 5} more)"
        super().__init__(f"no start produced a tour: {summary}{more}")


@dataclass(frozen=True)
class MultiStartResult:
    """Best tour over all attempted starts plus the per-start cost table."""

    best_tour: Tour
    best_init: int
    costs: dict[int, float]        # start id -> tour cost, successful starts only
    dead_ends: tuple[int, ...]     # start ids that stalled

    @property
    def best_cost(self) -> float:
        return self.best_tour.cost


def run_multistart(
    instance: Instance,
    inits: Iterable[int] | None,
    construct: Callable[[Instance, int], Tour],
) -> MultiStartResult:
    """Run ``construct`` from every start and keep the deterministic best."""
    if instance.is_trivially_infeasible:
        raise InfeasibleInstanceError(
            f"items {instance.oversized_items} exceed capacity {instance.capacity:g}"
        )
    if inits is None:
        start_ids = list(range(instance.node_count))
    else:
        start_ids = sorted({instance.normalize_node(i) for i in inits})
    if not start_ids:
        raise ValueError("inits must be nonempty")

    costs: dict[int, float] = {}
    failures: dict[int, Exception] = {}
    best_tour: Tour | None = None
    best_key: tuple[float, int] | None = None
    for init in start_ids:
        try:
            tour = construct(instance, init)
        except DeadEndError as exc:
            failures[init] = exc
            continue
        costs[init] = tour.cost
        key = (tour.cost, init)
        if best_key is None or key < best_key:
            best_key = key
            best_tour = tour
    if best_tour is None:
        raise MultiStartError(failures)
    return MultiStartResult(
        best_tour=best_tour,
        best_init=best_key[1],
        costs=costs,
        dead_ends=tuple(sorted(failures)),
    )


def check_construction(instance: Instance, tour: Tour) -> Tour:
    """Postcondition shared by both builders: the finished tour must validate."""
    report = validate(instance, tour)
    if not report.feasible:
        raise RuntimeError(
            f"constructed tour violates the constraint system ({report}); "
            "this is an implementation bug, not a data problem"
        )
    return tour

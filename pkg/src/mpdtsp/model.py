"""Core data model: instances, tours, payload profiles and the feasibility validator.

An instance with ``n`` commodity pairs has physical nodes ``0..2n``: the depot
is node 0, pickups are ``1..n`` and deliveries are ``n+1..2n``, with pickup
``k`` paired to delivery ``n+k``.  The id ``2n+1`` is accepted everywhere as
an alias of the depot (a tour conventionally terminates at it) and is
collapsed onto node 0 so the cost matrix has no degenerate zero-cost arc.

Payload semantics are event based: every node contributes its load ``q`` at
its visit position.  The start node of a closed tour occurs twice; its event
fires at the opening occurrence when it is a pickup or the depot, and at the
closing occurrence when it is a delivery.  This is the unique convention under
which any-start tours carry a well-defined load and end the tour empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Mapping, Sequence, Union

import numpy as np

from .tsplib import MetricMode, tsplib_distance

#: absolute slack for load comparisons on complete tours (loads are exact for
#: unit masses; the slack only matters for real-valued masses)
LOAD_TOLERANCE = 1e-9

#: absolute slack for cost comparisons in floating metrics
COST_TOLERANCE = 1e-9


class Role(Enum):
    DEPOT = "depot"
    PICKUP = "pickup"
    DELIVERY = "delivery"


class InfeasibleInstanceError(Exception):
    """The instance admits no feasible tour (some item exceeds capacity)."""


def paired_loads(item_loads: Sequence[float]) -> np.ndarray:
    """Full per-node load vector ``[0, +q_1..+q_n, -q_1..-q_n]`` for n items."""
    items = np.asarray(item_loads, dtype=float)
    return np.concatenate(([0.0], items, -items))


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable problem data for a single capacitated agent.

    Fields are validated on construction; prefer :meth:`from_coords` or
    :meth:`from_matrix` over calling the constructor directly.
    """

    n_pairs: int
    cost: np.ndarray          # (2n+1, 2n+1), nonnegative, zero diagonal
    loads: np.ndarray         # (2n+1,), loads[0] == 0, loads[n+k] == -loads[k]
    capacity: float
    metric: MetricMode
    coords: np.ndarray | None = None
    name: str = ""
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        m = self.node_count
        if self.n_pairs < 1:
            raise ValueError("instance needs at least one pickup/delivery pair")
        if self.cost.shape != (m, m):
            raise ValueError(f"cost matrix must be {m}x{m}, got {self.cost.shape}")
        if np.any(self.cost < 0):
            raise ValueError("cost matrix entries must be nonnegative")
        if np.any(np.diagonal(self.cost) != 0):
            raise ValueError("cost matrix diagonal must be zero")
        if self.loads.shape != (m,):
            raise ValueError(f"load vector must have length {m}, got {self.loads.shape}")
        if self.loads[0] != 0:
            raise ValueError("depot load must be zero")
        n = self.n_pairs
        if np.any(self.loads[1 : n + 1] <= 0):
            raise ValueError("pickup loads must be positive")
        if np.any(self.loads[n + 1 :] != -self.loads[1 : n + 1]):
            raise ValueError("delivery loads must exactly negate their pickup loads")
        if self.capacity < 0:
            raise ValueError("capacity must be nonnegative")
        if self.coords is not None and self.coords.shape != (m, 2):
            raise ValueError(f"coords must be ({m}, 2), got {self.coords.shape}")

    # -- structure ---------------------------------------------------------

    @property
    def node_count(self) -> int:
        """Number of physical nodes, ``2n + 1``."""
        return 2 * self.n_pairs + 1

    @property
    def depot(self) -> int:
        return 0

    @property
    def terminal_alias(self) -> int:
        """Logical id of the tour terminal; same physical location as the depot."""
        return 2 * self.n_pairs + 1

    @property
    def pickups(self) -> range:
        return range(1, self.n_pairs + 1)

    @property
    def deliveries(self) -> range:
        return range(self.n_pairs + 1, 2 * self.n_pairs + 1)

    def normalize_node(self, node: int) -> int:
        """Map the terminal alias onto the depot; reject out-of-range ids."""
        node = int(node)
        if node == self.terminal_alias:
            return 0
        if not 0 <= node < self.node_count:
            raise ValueError(f"node id {node} out of range for {self.n_pairs}-pair instance")
        return node

    def role(self, node: int) -> Role:
        node = self.normalize_node(node)
        if node == 0:
            return Role.DEPOT
        return Role.PICKUP if node <= self.n_pairs else Role.DELIVERY

    def pair_index(self, node: int) -> int:
        """1-based commodity index of a pickup or delivery node."""
        node = self.normalize_node(node)
        if node == 0:
            raise ValueError("the depot carries no commodity")
        return node if node <= self.n_pairs else node - self.n_pairs

    def pickup_of(self, delivery: int) -> int:
        delivery = self.normalize_node(delivery)
        if self.role(delivery) is not Role.DELIVERY:
            raise ValueError(f"node {delivery} is not a delivery")
        return delivery - self.n_pairs

    def delivery_of(self, pickup: int) -> int:
        pickup = self.normalize_node(pickup)
        if self.role(pickup) is not Role.PICKUP:
            raise ValueError(f"node {pickup} is not a pickup")
        return pickup + self.n_pairs

    @cached_property
    def _load_list(self) -> list[float]:
        # plain-list view of the loads; scalar indexing into the array is far
        # too slow for the enumeration oracle, which validates millions of tours
        return self.loads.tolist()

    # -- feasibility flag ----------------------------------------------------

    @property
    def oversized_items(self) -> tuple[int, ...]:
        """Pickup ids whose item alone exceeds the capacity."""
        return tuple(int(i) for i in self.pickups if self.loads[i] > self.capacity)

    @property
    def is_trivially_infeasible(self) -> bool:
        """True when some single item cannot be carried at all."""
        return bool(self.oversized_items)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_coords(
        cls,
        coords: Sequence[Sequence[float]] | np.ndarray,
        loads: Sequence[float] | np.ndarray,
        capacity: float,
        metric: MetricMode = MetricMode.EXACT,
        name: str = "",
        meta: Mapping[str, str] | None = None,
    ) -> "Instance":
        """Build an instance from node coordinates (depot first, then pickups, then deliveries)."""
        if metric is MetricMode.EXPLICIT:
            raise ValueError("from_coords needs a coordinate metric; use from_matrix")
        coords = np.asarray(coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ValueError("coords must be an (m, 2) array")
        m = coords.shape[0]
        if m < 3 or m % 2 == 0:
            raise ValueError(f"coordinate count must be odd and >= 3 (2n+1 nodes), got {m}")
        cost = _coordinate_cost_matrix(coords, metric)
        return cls(
            n_pairs=(m - 1) // 2,
            cost=cost,
            loads=np.asarray(loads, dtype=float),
            capacity=float(capacity),
            metric=metric,
            coords=coords,
            name=name,
            meta=dict(meta or {}),
        )

    @classmethod
    def from_matrix(
        cls,
        cost: Sequence[Sequence[float]] | np.ndarray,
        loads: Sequence[float] | np.ndarray,
        capacity: float,
        name: str = "",
        meta: Mapping[str, str] | None = None,
    ) -> "Instance":
        """Build an instance from an explicit (2n+1)-square cost matrix."""
        cost = np.asarray(cost, dtype=float)
        if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
            raise ValueError("cost must be a square matrix")
        m = cost.shape[0]
        if m < 3 or m % 2 == 0:
            raise ValueError(f"matrix side must be odd and >= 3 (2n+1 nodes), got {m}")
        return cls(
            n_pairs=(m - 1) // 2,
            cost=cost,
            loads=np.asarray(loads, dtype=float),
            capacity=float(capacity),
            metric=MetricMode.EXPLICIT,
            name=name,
            meta=dict(meta or {}),
        )

    def with_capacity(self, capacity: float) -> "Instance":
        """Same geometry and loads under a different capacity."""
        return Instance(
            n_pairs=self.n_pairs,
            cost=self.cost,
            loads=self.loads,
            capacity=float(capacity),
            metric=self.metric,
            coords=self.coords,
            name=self.name,
            meta=dict(self.meta),
        )

    def with_metric(self, metric: MetricMode) -> "Instance":
        """Rebuild the cost matrix from coordinates under another metric."""
        if metric is self.metric:
            return self
        if self.coords is None:
            raise ValueError("instance has no coordinates to re-derive costs from")
        return Instance.from_coords(
            self.coords, self.loads, self.capacity, metric, self.name, dict(self.meta)
        )


def _coordinate_cost_matrix(coords: np.ndarray, metric: MetricMode) -> np.ndarray:
    # scalar tsplib_distance per pair keeps the matrix bit-identical to the
    # published convention and exactly symmetric
    m = coords.shape[0]
    cost = np.zeros((m, m), dtype=float)
    pts = [(float(x), float(y)) for x, y in coords]
    for i in range(m):
        for j in range(i + 1, m):
            d = tsplib_distance(pts[i], pts[j], metric)
            cost[i, j] = d
            cost[j, i] = d
    return cost


# -- tours -------------------------------------------------------------------


@dataclass(frozen=True)
class Tour:
    """A closed visit sequence with its total cost.

    ``sequence[0] == sequence[-1]`` is the declared start; a complete tour
    visits every other node exactly once in between.
    """

    sequence: tuple[int, ...]
    cost: float

    @property
    def start(self) -> int:
        return self.sequence[0]

    def __len__(self) -> int:
        return len(self.sequence)

    @classmethod
    def from_sequence(cls, instance: Instance, sequence: Sequence[int]) -> "Tour":
        """Normalize the terminal alias, require closure, and compute the cost."""
        seq = tuple(instance.normalize_node(v) for v in sequence)
        return cls(seq, tour_cost(instance, seq))


TourLike = Union[Tour, Sequence[int]]


def _as_sequence(tour: TourLike) -> tuple[int, ...]:
    if isinstance(tour, Tour):
        return tour.sequence
    if isinstance(tour, tuple):
        return tour
    return tuple(int(v) for v in tour)


def arc_cost(instance: Instance, i: int, j: int) -> float:
    """Cost of traversing arc (i, j); the terminal alias maps onto the depot."""
    return float(instance.cost[instance.normalize_node(i), instance.normalize_node(j)])


def tour_cost(instance: Instance, tour: TourLike) -> float:
    """Sum of arc costs along a closed sequence."""
    seq = _as_sequence(tour)
    if len(seq) < 2:
        raise ValueError("a closed tour needs at least two entries")
    nodes = [instance.normalize_node(v) for v in seq]
    if nodes[0] != nodes[-1]:
        raise ValueError(f"sequence is not closed: starts at {nodes[0]}, ends at {nodes[-1]}")
    return float(sum(instance.cost[a, b] for a, b in zip(nodes, nodes[1:])))


def payload_profile(instance: Instance, tour: TourLike) -> list[float]:
    """Cargo on board when leaving each position of a closed sequence.

    Works on complete tours and on closed partial tours alike.  The entry at
    the final position of a complete tour is 0.
    """
    seq = [instance.normalize_node(v) for v in _as_sequence(tour)]
    if len(seq) < 2 or seq[0] != seq[-1]:
        raise ValueError("payload profile requires a closed sequence")
    start_is_delivery = seq[0] > instance.n_pairs
    loads = instance._load_list
    running = 0.0
    profile: list[float] = []
    last = len(seq) - 1
    for pos, node in enumerate(seq):
        if pos == 0:
            if not start_is_delivery:
                running += loads[node]
        elif pos == last:
            if start_is_delivery:
                running += loads[node]
        else:
            running += loads[node]
        profile.append(running)
    return profile


# -- validation ----------------------------------------------------------------


class ViolationKind(Enum):
    VISIT_COUNT = "visit-count"
    CLOSURE = "closure"
    PRECEDENCE = "precedence"
    CAPACITY_UPPER = "capacity-upper"
    CAPACITY_LOWER = "capacity-lower"
    TERMINAL_LOAD = "terminal-load"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    position: int | None
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    feasible: bool
    violations: tuple[Violation, ...]

    @classmethod
    def from_violations(cls, violations: Sequence[Violation]) -> "ValidationReport":
        return cls(feasible=not violations, violations=tuple(violations))

    def __str__(self) -> str:
        if self.feasible:
            return "feasible"
        lines = ["infeasible:"]
        for v in self.violations:
            where = f" at position {v.position}" if v.position is not None else ""
            lines.append(f"  {v.kind.value}{where}: {v.detail}")
        return "\n".join(lines)


def validate(instance: Instance, tour: TourLike) -> ValidationReport:
    """Check a sequence against all tour constraints.

    Structural defects (unknown ids, missing closure, wrong visit counts) are
    reported rather than raised; load and precedence checks run only on
    structurally sound tours, where they are well defined.
    """
    raw = _as_sequence(tour)
    violations: list[Violation] = []
    terminal = instance.terminal_alias
    node_count = instance.node_count

    seq: list[int] = []
    for pos, v in enumerate(raw):
        if v == terminal:
            v = 0
        if 0 <= v < node_count:
            seq.append(v)
        else:
            violations.append(
                Violation(ViolationKind.VISIT_COUNT, pos, f"unknown node id {v}")
            )

    if len(raw) < 2 or not seq or seq[0] != seq[-1]:
        head = seq[0] if seq else None
        tail = seq[-1] if seq else None
        violations.append(
            Violation(
                ViolationKind.CLOSURE,
                len(raw) - 1 if raw else None,
                f"sequence must start and end at the same node (got {head} .. {tail})",
            )
        )
    if violations:
        return ValidationReport.from_violations(violations)

    counts = [0] * node_count
    first_pos = [-1] * node_count
    for pos, v in enumerate(seq):
        if counts[v] == 0:
            first_pos[v] = pos
        counts[v] += 1
    start = seq[0]
    for v in range(node_count):
        expected = 2 if v == start else 1
        if counts[v] == expected:
            continue
        if counts[v] == 0:
            violations.append(
                Violation(ViolationKind.VISIT_COUNT, None, f"node {v} is never visited")
            )
        else:
            violations.append(
                Violation(
                    ViolationKind.VISIT_COUNT,
                    first_pos[v],
                    f"node {v} visited {counts[v]} times, expected {expected}",
                )
            )
    if violations:
        return ValidationReport.from_violations(violations)

    # structurally sound complete tour: load and precedence checks
    loads = instance._load_list
    n = instance.n_pairs
    start_is_delivery = start > n
    last = len(seq) - 1
    upper = instance.capacity + LOAD_TOLERANCE
    running = 0.0
    for pos, node in enumerate(seq):
        if pos == 0:
            if not start_is_delivery:
                running += loads[node]
        elif pos == last:
            if start_is_delivery:
                running += loads[node]
        else:
            running += loads[node]
        if running > upper:
            violations.append(
                Violation(
                    ViolationKind.CAPACITY_UPPER,
                    pos,
                    f"load {running:g} exceeds capacity {instance.capacity:g} "
                    f"leaving node {node}",
                )
            )
        elif running < -LOAD_TOLERANCE:
            violations.append(
                Violation(
                    ViolationKind.CAPACITY_LOWER,
                    pos,
                    f"load {running:g} is negative leaving node {node}",
                )
            )
    if running > LOAD_TOLERANCE or running < -LOAD_TOLERANCE:
        violations.append(
            Violation(
                ViolationKind.TERMINAL_LOAD,
                last,
                f"tour ends carrying load {running:g}",
            )
        )

    for k in range(1, n + 1):
        delivery = k + n
        if delivery == start:
            # the start delivery unloads at the closing occurrence, which is
            # after every other visit by construction
            continue
        if first_pos[k] > first_pos[delivery]:
            violations.append(
                Violation(
                    ViolationKind.PRECEDENCE,
                    first_pos[delivery],
                    f"delivery {delivery} visited before its pickup {k}",
                )
            )

    violations.sort(key=lambda v: (v.position if v.position is not None else -1))
    return ValidationReport.from_violations(violations)

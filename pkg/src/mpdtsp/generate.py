"""Turn a TSPLIB point cloud into a pickup-and-delivery instance.

The construction is deterministic: rank the points by distance from the
centroid (ties broken by file index), make the closest point the depot, and
pair the remaining ranks from the two ends inward, so rank 2 pairs with rank
m, rank 3 with rank m-1, and so on.  With pickups-central the inner point of
each pair is the pickup; with deliveries-central the roles are reversed.  When
the non-depot count is odd the self-paired middle rank is dropped and recorded
in the instance metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import Instance, paired_loads
from .tsplib import MetricMode, PointCloud


class Direction(Enum):
    PICKUPS_CENTRAL = "pickups-central"
    DELIVERIES_CENTRAL = "deliveries-central"


@dataclass(frozen=True)
class GenerationSpec:
    """Knobs of the instance construction: precedence direction and capacity."""

    direction: Direction
    capacity_items: int
    unit_load: float = 1.0

    def __post_init__(self):
        if self.capacity_items < 1:
            raise ValueError("capacity_items must be >= 1")
        if self.unit_load <= 0:
            raise ValueError("unit_load must be positive")


def centroid(cloud: PointCloud) -> tuple[float, float]:
    """Arithmetic mean of the point coordinates."""
    if len(cloud) == 0:
        raise ValueError("cannot take the centroid of an empty point cloud")
    xy = cloud.coords_array()
    cx, cy = xy.mean(axis=0)
    return float(cx), float(cy)


def _ranked_positions(cloud: PointCloud) -> list[int]:
    # squared distances keep tie detection exact for integer coordinates
    cx, cy = centroid(cloud)
    xy = cloud.coords_array()
    d2 = (xy[:, 0] - cx) ** 2 + (xy[:, 1] - cy) ** 2
    return list(np.argsort(d2, kind="stable"))


def rank_by_centroid(cloud: PointCloud) -> list[int]:
    """File indices ordered by increasing distance from the centroid.

    Equidistant points keep their file order, so the ranking is reproducible.
    """
    return [cloud.points[pos][0] for pos in _ranked_positions(cloud)]


def generate(
    cloud: PointCloud,
    spec: GenerationSpec,
    metric: MetricMode = MetricMode.EXACT,
) -> Instance:
    """Build the instance for one (direction, capacity) configuration."""
    if len(cloud) < 3:
        raise ValueError(f"need at least 3 points to form an instance, got {len(cloud)}")

    order = _ranked_positions(cloud)
    pts = cloud.points
    depot_pos = order[0]
    rest = order[1:]

    dropped = ""
    if len(rest) % 2 == 1:
        middle = rest[len(rest) // 2]
        dropped = str(pts[middle][0])
        rest = rest[: len(rest) // 2] + rest[len(rest) // 2 + 1 :]

    n = len(rest) // 2
    inner = rest[:n]              # ranks 2..n+1, closest to the centroid
    outer = rest[n:][::-1]        # ranks m, m-1, ..., paired end-to-end
    if spec.direction is Direction.PICKUPS_CENTRAL:
        pickup_pos, delivery_pos = inner, outer
    else:
        pickup_pos, delivery_pos = outer, inner

    coords = np.empty((2 * n + 1, 2), dtype=float)
    coords[0] = pts[depot_pos][1:]
    for k in range(n):
        coords[1 + k] = pts[pickup_pos[k]][1:]
        coords[1 + n + k] = pts[delivery_pos[k]][1:]

    loads = paired_loads([spec.unit_load] * n)
    meta = {
        "source": cloud.name,
        "direction": spec.direction.value,
        "capacity_items": str(spec.capacity_items),
        "unit_load": repr(float(spec.unit_load)),
        "dropped_file_index": dropped,
    }
    name = f"{cloud.name}-{spec.direction.value}-Q{spec.capacity_items}"
    return Instance.from_coords(
        coords,
        loads,
        capacity=spec.capacity_items * spec.unit_load,
        metric=metric,
        name=name,
        meta=meta,
    )

"""Shared fixtures and independent reference checkers."""

from pathlib import Path

import numpy as np
import pytest

from mpdtsp import Instance, MetricMode, paired_loads
from mpdtsp import tsplib

CORPUS_DIR = Path(__file__).resolve().parents[1] / "corpus"

# depot at the origin, pickups on the x axis, deliveries one unit above them
TWO_PAIR_COORDS = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0), (2.0, 1.0)]


@pytest.fixture
def one_pair() -> Instance:
    return Instance.from_coords([(0, 0), (1, 0), (0, 1)], paired_loads([1.0]), 1.0)


@pytest.fixture
def two_pair() -> Instance:
    return Instance.from_coords(TWO_PAIR_COORDS, paired_loads([1.0, 1.0]), 2.0)


@pytest.fixture(scope="session")
def eil51_cloud() -> tsplib.PointCloud:
    return tsplib.parse_file(CORPUS_DIR / "eil51.tsp")


def make_random_instance(
    n_pairs: int, capacity: float, seed: int, metric: MetricMode = MetricMode.EXACT
) -> Instance:
    """Uniform unit-square coordinates, unit loads."""
    rng = np.random.RandomState(seed)
    coords = rng.uniform(0.0, 1.0, size=(2 * n_pairs + 1, 2))
    return Instance.from_coords(
        coords, paired_loads([1.0] * n_pairs), float(capacity), metric, name=f"rand{seed}"
    )


def plain_checker(instance: Instance, sequence) -> bool:
    """Independent feasibility walk: a visited set and a running load.

    Deliberately re-derives every rule from scratch (including the
    delivery-start closing convention) so it can arbitrate the validator.
    """
    seq = [0 if v == instance.terminal_alias else int(v) for v in sequence]
    if len(seq) < 2 or seq[0] != seq[-1]:
        return False
    if any(not 0 <= v < instance.node_count for v in seq):
        return False
    body = seq[:-1]
    if sorted(body) != list(range(instance.node_count)):
        return False
    start = seq[0]
    start_is_delivery = start > instance.n_pairs
    load = 0.0
    seen: set[int] = set()
    for pos, node in enumerate(body):
        seen.add(node)
        if node > instance.n_pairs and pos > 0 and (node - instance.n_pairs) not in seen:
            return False  # delivery before its pickup
        if pos == 0 and start_is_delivery:
            continue  # the start delivery unloads at the closing visit
        load += float(instance.loads[node])
        if load > instance.capacity + 1e-9 or load < -1e-9:
            return False
    if start_is_delivery:
        load += float(instance.loads[start])
    return abs(load) <= 1e-9

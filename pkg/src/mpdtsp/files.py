"""On-disk formats: canonical instance files, tour files and metadata sidecars.

Instance format (whitespace-delimited, LF endings, fixed field order)::

    PAIRS <n>
    CAPACITY <Q>
    METRIC <ROUNDED|EXACT>
    <id> <DEPOT|PICKUP|DELIVERY> <pair_index> <x> <y> <load>   # one line per node, id order

Tour files hold one node id per line, first and last identical.  Sidecars are
``key=value`` lines recording how a generated instance was derived.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import numpy as np

from .model import Instance, Role, Tour
from .tsplib import MetricMode

_METRIC_TOKENS = {MetricMode.ROUNDED: "ROUNDED", MetricMode.EXACT: "EXACT"}
_TOKEN_METRICS = {v: k for k, v in _METRIC_TOKENS.items()}
_ROLE_TOKENS = {Role.DEPOT: "DEPOT", Role.PICKUP: "PICKUP", Role.DELIVERY: "DELIVERY"}


def instance_to_text(instance: Instance) -> str:
    if instance.metric not in _METRIC_TOKENS:
        raise ValueError("only coordinate-metric instances have a canonical text form")
    if instance.coords is None:
        raise ValueError("instance has no coordinates to serialize")
    lines = [
        f"PAIRS {instance.n_pairs}",
        f"CAPACITY {instance.capacity!r}",
        f"METRIC {_METRIC_TOKENS[instance.metric]}",
    ]
    for node in range(instance.node_count):
        role = instance.role(node)
        pair = 0 if role is Role.DEPOT else instance.pair_index(node)
        x, y = instance.coords[node]
        lines.append(
            f"{node} {_ROLE_TOKENS[role]} {pair} {float(x)!r} {float(y)!r} "
            f"{float(instance.loads[node])!r}"
        )
    return "\n".join(lines) + "\n"


def instance_from_text(text: str, name: str = "") -> Instance:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if len(lines) < 4:
        raise ValueError("instance text is too short")

    def header(idx: int, key: str) -> str:
        fields = lines[idx].split()
        if len(fields) != 2 or fields[0] != key:
            raise ValueError(f"expected '{key} <value>' on line {idx + 1}, got {lines[idx]!r}")
        return fields[1]

    n = int(header(0, "PAIRS"))
    capacity = float(header(1, "CAPACITY"))
    token = header(2, "METRIC")
    if token not in _TOKEN_METRICS:
        raise ValueError(f"unknown METRIC {token!r} (expected ROUNDED or EXACT)")

    node_lines = lines[3:]
    expected = 2 * n + 1
    if len(node_lines) != expected:
        raise ValueError(f"expected {expected} node lines, got {len(node_lines)}")
    coords = np.empty((expected, 2), dtype=float)
    loads = np.empty(expected, dtype=float)
    for i, line in enumerate(node_lines):
        fields = line.split()
        if len(fields) != 6:
            raise ValueError(f"node line needs 6 fields, got {line!r}")
        node_id, role_token, pair_token = int(fields[0]), fields[1], int(fields[2])
        if node_id != i:
            raise ValueError(f"node lines must be in id order; expected id {i}, got {node_id}")
        expected_role = "DEPOT" if i == 0 else ("PICKUP" if i <= n else "DELIVERY")
        if role_token != expected_role:
            raise ValueError(f"node {i}: role {role_token!r} does not match id convention")
        expected_pair = 0 if i == 0 else (i if i <= n else i - n)
        if pair_token != expected_pair:
            raise ValueError(f"node {i}: pair index {pair_token} does not match id convention")
        coords[i] = (float(fields[3]), float(fields[4]))
        loads[i] = float(fields[5])
    return Instance.from_coords(coords, loads, capacity, _TOKEN_METRICS[token], name=name)


def write_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(instance_to_text(instance), newline="\n")


def read_instance(path: str | Path) -> Instance:
    path = Path(path)
    return instance_from_text(path.read_text(), name=path.stem)


def write_tour(tour: Tour, path: str | Path) -> None:
    Path(path).write_text("\n".join(str(v) for v in tour.sequence) + "\n", newline="\n")


def read_tour_sequence(path: str | Path) -> list[int]:
    """Raw visit sequence from a tour file; validation is the caller's job."""
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            out.append(int(line))
        except ValueError:
            raise ValueError(f"{path}: line {lineno} is not a node id: {line!r}") from None
    return out


def write_sidecar(meta: Mapping[str, str], path: str | Path) -> None:
    body = "".join(f"{key}={meta[key]}\n" for key in meta)
    Path(path).write_text(body, newline="\n")


def read_key_values(path: str | Path) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno} is not 'key=value': {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out

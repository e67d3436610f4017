"""Corpus sweep comparing the two construction heuristics.

For every (file, direction, capacity) combination the harness generates the
instance, runs both multi-start heuristics, re-validates the winning tours and
records cost and wall time.  Rows come back in a fixed sort order regardless
of execution order, so reruns differ only in the timing fields.

Worker parallelism across sweep tasks is opt-in through the ``MPDTSP_THREADS``
environment variable (a positive integer; default 1 keeps everything on one
core, which is also what keeps the timing columns comparable).
"""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import tsplib
from .cheapest_insertion import cih_best
from .generate import Direction, GenerationSpec, generate
from .model import Instance, validate
from .nearest_neighbor import nnh_best
from .tsplib import MetricMode, TsplibParseError

log = logging.getLogger(__name__)

DEFAULT_CAPACITIES = (2, 4, 6, 8, 10)

CSV_HEADER = "instance,direction,Q,heuristic,best_cost,wall_time_s,node_count,init_of_best,dead_end_count"


class InitPolicy:
    ALL = "all"
    DEPOT = "depot"


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_dir: Path
    directions: tuple[Direction, ...] = (Direction.PICKUPS_CENTRAL, Direction.DELIVERIES_CENTRAL)
    capacities: tuple[int, ...] = DEFAULT_CAPACITIES
    metric: MetricMode = MetricMode.EXACT
    init_policy: str = InitPolicy.ALL
    max_nodes: int | None = None

    def __post_init__(self):
        if not self.capacities or any(q < 1 for q in self.capacities):
            raise ValueError("capacities must be a nonempty list of positive integers")
        if self.init_policy not in (InitPolicy.ALL, InitPolicy.DEPOT):
            raise ValueError(f"unknown init policy {self.init_policy!r}")


@dataclass(frozen=True)
class ResultRow:
    instance: str
    direction: str
    capacity_items: int
    heuristic: str           # "NNH" or "CIH"
    best_cost: float
    wall_time_s: float
    node_count: int
    init_of_best: int
    dead_end_count: int

    def sort_key(self):
        return (self.instance, self.direction, self.capacity_items, self.heuristic)


def worker_count() -> int:
    raw = os.environ.get("MPDTSP_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MPDTSP_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"MPDTSP_THREADS must be a positive integer, got {raw!r}")
    return value


def _solve_rows(instance: Instance, source_name: str, direction: Direction, q: int,
                init_policy: str) -> list[ResultRow]:
    inits = None if init_policy == InitPolicy.ALL else [0]
    rows = []
    for label, solver in (("NNH", nnh_best), ("CIH", cih_best)):
        t0 = time.perf_counter()
        result = solver(instance, inits)
        elapsed = time.perf_counter() - t0
        report = validate(instance, result.best_tour)
        if not report.feasible:
            raise RuntimeError(
                f"{label} tour for {instance.name} failed validation ({report}); "
                "aborting the sweep"
            )
        rows.append(
            ResultRow(
                instance=source_name,
                direction=direction.value,
                capacity_items=q,
                heuristic=label,
                best_cost=result.best_cost,
                wall_time_s=elapsed,
                node_count=instance.node_count,
                init_of_best=result.best_init,
                dead_end_count=len(result.dead_ends),
            )
        )
    return rows


def _run_task(args: tuple[str, str, int, str, str]) -> list[ResultRow]:
    path, direction_value, q, metric_value, init_policy = args
    cloud = tsplib.parse_file(path)
    direction = Direction(direction_value)
    instance = generate(cloud, GenerationSpec(direction, q), MetricMode(metric_value))
    return _solve_rows(instance, cloud.name, direction, q, init_policy)


def run_corpus(config: ExperimentConfig) -> list[ResultRow]:
    """Sweep every parsable corpus file across directions and capacities."""
    corpus = Path(config.corpus_dir)
    clouds: list[tuple[Path, str]] = []
    for path in sorted(corpus.glob("*.tsp")):
        try:
            cloud = tsplib.parse_file(path)
        except (TsplibParseError, OSError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            continue
        if config.max_nodes is not None and len(cloud) > config.max_nodes:
            log.info("skipping %s: %d nodes exceeds max_nodes=%d",
                     path.name, len(cloud), config.max_nodes)
            continue
        clouds.append((path, cloud.name))
    if not clouds:
        raise ValueError(f"no instances: {corpus} contains no parsable EUC_2D files")

    tasks = [
        (str(path), direction.value, q, config.metric.value, config.init_policy)
        for path, _ in clouds
        for direction in config.directions
        for q in config.capacities
    ]
    workers = worker_count()
    rows: list[ResultRow] = []
    if workers == 1:
        for task in tasks:
            rows.extend(_run_task(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_run_task, tasks):
                rows.extend(chunk)
    rows.sort(key=ResultRow.sort_key)
    return rows


# -- summary statistics --------------------------------------------------------

RATIO_BUCKET_WIDTH = 0.02


@dataclass(frozen=True)
class Quartiles:
    low: float
    q1: float
    median: float
    q3: float
    high: float

    @classmethod
    def of(cls, values: list[float]) -> "Quartiles":
        arr = np.asarray(values, dtype=float)
        q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
        return cls(float(arr.min()), float(q1), float(med), float(q3), float(arr.max()))


@dataclass(frozen=True)
class DirectionSummary:
    pair_count: int
    nnh_wins: int                                  # NNH cost <= CIH cost, ties included
    win_fraction: float
    ratio_histogram: tuple[tuple[float, int], ...] = ()


@dataclass(frozen=True)
class Summary:
    directions: dict[str, DirectionSummary]
    overall_pairs: int
    overall_win_fraction: float
    max_cost_reduction: float                      # max of (CIH-NNH)/CIH over all pairs
    ratio_by_capacity: dict[int, Quartiles]
    time_ratio_by_node_count: dict[int, Quartiles]


def ratio_bucket(ratio: float) -> float:
    """Left edge of the width-0.02 histogram bucket containing ``ratio``."""
    index = math.floor(ratio / RATIO_BUCKET_WIDTH + 1e-9)
    return round(index * RATIO_BUCKET_WIDTH, 10)


def summarize(rows: list[ResultRow]) -> Summary:
    """Pair NNH/CIH rows and aggregate win fractions, ratios and timings."""
    by_key: dict[tuple[str, str, int], dict[str, ResultRow]] = {}
    for row in rows:
        key = (row.instance, row.direction, row.capacity_items)
        by_key.setdefault(key, {})[row.heuristic] = row
    pairs = []
    for key, entry in sorted(by_key.items()):
        if set(entry) != {"NNH", "CIH"}:
            raise ValueError(f"rows for {key} are unpaired: have {sorted(entry)}")
        pairs.append((key, entry["NNH"], entry["CIH"]))
    if not pairs:
        raise ValueError("no result rows to summarize")

    directions: dict[str, DirectionSummary] = {}
    total_wins = 0
    max_reduction = 0.0
    ratios_by_q: dict[int, list[float]] = {}
    time_by_nodes: dict[int, list[float]] = {}
    for direction in sorted({key[1] for key, _, _ in pairs}):
        dir_pairs = [(k, n, c) for k, n, c in pairs if k[1] == direction]
        wins = sum(1 for _, n, c in dir_pairs if n.best_cost <= c.best_cost)
        total_wins += wins
        histogram: dict[float, int] = {}
        for _, n, c in dir_pairs:
            if n.best_cost > 0:
                bucket = ratio_bucket(c.best_cost / n.best_cost)
                histogram[bucket] = histogram.get(bucket, 0) + 1
        directions[direction] = DirectionSummary(
            pair_count=len(dir_pairs),
            nnh_wins=wins,
            win_fraction=wins / len(dir_pairs),
            ratio_histogram=tuple(sorted(histogram.items())),
        )
    for _, n, c in pairs:
        if c.best_cost > 0:
            max_reduction = max(max_reduction, (c.best_cost - n.best_cost) / c.best_cost)
        if n.best_cost > 0:
            ratios_by_q.setdefault(n.capacity_items, []).append(c.best_cost / n.best_cost)
        if n.wall_time_s > 0:
            time_by_nodes.setdefault(n.node_count, []).append(c.wall_time_s / n.wall_time_s)

    return Summary(
        directions=directions,
        overall_pairs=len(pairs),
        overall_win_fraction=total_wins / len(pairs),
        max_cost_reduction=max_reduction,
        ratio_by_capacity={q: Quartiles.of(v) for q, v in sorted(ratios_by_q.items())},
        time_ratio_by_node_count={m: Quartiles.of(v) for m, v in sorted(time_by_nodes.items())},
    )


# -- emitters --------------------------------------------------------------------


def emit_csv(rows: list[ResultRow], path: str | Path) -> None:
    """Write rows under the fixed header, in the deterministic sort order."""
    lines = [CSV_HEADER]
    for row in sorted(rows, key=ResultRow.sort_key):
        lines.append(
            f"{row.instance},{row.direction},{row.capacity_items},{row.heuristic},"
            f"{row.best_cost!r},{row.wall_time_s!r},{row.node_count},"
            f"{row.init_of_best},{row.dead_end_count}"
        )
    try:
        Path(path).write_text("\n".join(lines) + "\n", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


_SVG_WIDTH = 860
_BAR_AREA = 600
_ROW_H = 18


def emit_svg_histogram(summary: Summary, path: str | Path) -> None:
    """Render the summary as a single static SVG: one ratio histogram per
    direction, then box summaries per capacity and per node count."""
    parts: list[str] = []
    y = 30
    for direction, ds in sorted(summary.directions.items()):
        parts.append(_text(20, y, f"CIH/NNH cost ratio, {direction} "
                                  f"(NNH wins {ds.nnh_wins}/{ds.pair_count})", bold=True))
        y += 12
        top = max((count for _, count in ds.ratio_histogram), default=1)
        for bucket, count in ds.ratio_histogram:
            width = max(1, round(_BAR_AREA * count / top))
            parts.append(
                f'<rect x="150" y="{y}" width="{width}" height="{_ROW_H - 4}" fill="#4878a8"/>'
            )
            parts.append(_text(20, y + _ROW_H - 7, f"[{bucket:.2f},{bucket + 0.02:.2f})"))
            parts.append(_text(155 + width, y + _ROW_H - 7, str(count)))
            y += _ROW_H
        y += 24

    parts.append(_text(20, y, "cost ratio quartiles by capacity", bold=True))
    y += 12
    for q, quart in summary.ratio_by_capacity.items():
        parts.extend(_box_row(f"Q={q}", quart, y))
        y += _ROW_H
    y += 24

    parts.append(_text(20, y, "CIH/NNH time ratio quartiles by node count", bold=True))
    y += 12
    for m, quart in summary.time_ratio_by_node_count.items():
        parts.extend(_box_row(f"{m} nodes", quart, y))
        y += _ROW_H
    y += 20

    body = "\n".join(parts)
    svg = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_WIDTH}" height="{y}" font-family="monospace" font-size="11">\n'
        f"{body}\n</svg>\n"
    )
    try:
        Path(path).write_text(svg, newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc


def _text(x: int, y: int, label: str, bold: bool = False) -> str:
    weight = ' font-weight="bold"' if bold else ""
    return f'<text x="{x}" y="{y}"{weight}>{_escape(label)}</text>'


def _escape(label: str) -> str:
    return label.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _box_row(label: str, quart: Quartiles, y: int) -> list[str]:
    # map values onto the bar area with a shared 0..max scale per row group
    scale = _BAR_AREA / max(quart.high, 1e-12)
    x = lambda v: 150 + round(v * scale)  # noqa: E731 - tiny local helper
    mid_y = y + (_ROW_H - 4) // 2
    return [
        _text(20, y + _ROW_H - 7, label),
        f'<line x1="{x(quart.low)}" y1="{mid_y}" x2="{x(quart.high)}" y2="{mid_y}" stroke="#444"/>',
        f'<rect x="{x(quart.q1)}" y="{y}" width="{max(1, x(quart.q3) - x(quart.q1))}" '
        f'height="{_ROW_H - 4}" fill="#9fc2e0" stroke="#444"/>',
        f'<line x1="{x(quart.median)}" y1="{y}" x2="{x(quart.median)}" y2="{y + _ROW_H - 4}" '
        'stroke="#d0342c" stroke-width="2"/>',
        _text(160 + _BAR_AREA, y + _ROW_H - 7,
              f"med={quart.median:.3f} q1={quart.q1:.3f} q3={quart.q3:.3f}"),
    ]

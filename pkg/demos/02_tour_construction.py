"""Multi-start greedy construction on the 25-pair instance.

Builds tours with both heuristics from a depot start, a pickup start and a
delivery start, then runs the full multi-start sweep and prints a text
histogram of the per-start cost distribution for each capacity.
"""

from pathlib import Path

from mpdtsp import cih_best, cih_from, nnh_best, nnh_from, validate
from mpdtsp.generate import Direction, GenerationSpec, generate
from mpdtsp.tsplib import parse_file

ROOT = Path(__file__).resolve().parents[1]


def text_histogram(costs: dict[int, float], buckets: int = 9, width: int = 46) -> None:
    values = sorted(costs.values())
    lo, hi = values[0], values[-1]
    step = (hi - lo) / buckets or 1.0
    counts = [0] * buckets
    for v in values:
        counts[min(buckets - 1, int((v - lo) / step))] += 1
    top = max(counts)
    for i, c in enumerate(counts):
        bar = "#" * round(width * c / top)
        print(f"  [{lo + i * step:7.1f}, {lo + (i + 1) * step:7.1f})  {bar} {c}")


def main() -> None:
    cloud = parse_file(ROOT / "corpus" / "eil51.tsp")
    instance = generate(cloud, GenerationSpec(Direction.PICKUPS_CENTRAL, 10))
    print(f"{instance.name}: {instance.node_count} nodes, capacity {instance.capacity:g}\n")

    starts = {"depot": 0, "a pickup": 3, "a delivery": instance.n_pairs + 3}
    for label, init in starts.items():
        nnh = nnh_from(instance, init)
        cih = cih_from(instance, init)
        assert validate(instance, nnh).feasible and validate(instance, cih).feasible
        print(f"start at {label:10s} nearest-neighbor {nnh.cost:7.1f}   "
              f"cheapest-insertion {cih.cost:7.1f}")

    print("\nmulti-start from every node, per capacity:")
    for q in (2, 6, 10):
        inst = generate(cloud, GenerationSpec(Direction.PICKUPS_CENTRAL, q))
        nnh = nnh_best(inst)
        cih = cih_best(inst)
        print(f"\nQ = {q:2d}: best NNH {nnh.best_cost:.1f} (start {nnh.best_init}), "
              f"best CIH {cih.best_cost:.1f} (start {cih.best_init})")
        print("NNH per-start cost spread:")
        text_histogram(nnh.costs)


if __name__ == "__main__":
    main()

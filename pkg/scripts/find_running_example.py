"""Search generated graphs for a double flow with the index sets of the running
example (I={1,2,3}, J={1,3,4}, I'={2,4}, J'={2,3}) whose symmetric difference
splits into three exchange paths and one cycle; write it as a JSON fixture."""
from __future__ import annotations

import argparse
import json
from pathlib import Path

from qpath.exchange import DoubleFlow, decompose
from qpath.minors import MinorIndex, enumerate_flows
from qpath.segraph import full_grid, generate_grid_subgraph, to_json

IDX = MinorIndex((1, 2, 3), (1, 3, 4))
IDX2 = MinorIndex((2, 4), (2, 3))


def _graphs(max_seeds: int, density: float):
    yield "full", full_grid(4, 4)
    for extra in range(5):
        for s in range(max_seeds):
            yield f"seed={s},density={density},extra_cols={extra}", generate_grid_subgraph(4, 4, s, density, extra)


def search(max_seeds: int, density: float):
    for tag, g in _graphs(max_seeds, density):
        F, F2 = enumerate_flows(g, IDX), enumerate_flows(g, IDX2)
        for a, f in enumerate(F):
            for b, f2 in enumerate(F2):
                dec = decompose(DoubleFlow(f, f2), g)
                if len(dec.exchange_paths) == 3 and len(dec.cycles) == 1:
                    return tag, g, a, b, f, f2, dec
    return None


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-seeds", type=int, default=40)
    ap.add_argument("--density", type=float, default=0.6)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/fixtures/running_example.json"))
    args = ap.parse_args(argv)
    hit = search(args.max_seeds, args.density)
    if hit is None:
        print("no instance found")
        return 1
    tag, g, a, b, f, f2, dec = hit
    data = {"graph": to_json(g), "source": str(tag), "phi": f.to_dict(), "phi2": f2.to_dict(),
            "exchange_paths": len(dec.exchange_paths), "cycles": len(dec.cycles),
            "couples": dec.matching.to_list()}
    Path(args.out).write_text(json.dumps(data, indent=1) + "\n")
    print(f"graph {tag}: flows #{a} and #{b}; couples {dec.matching.to_list()}; written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

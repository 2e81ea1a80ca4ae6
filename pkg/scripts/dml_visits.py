"""Visit sets of the diagonal and of the graph of f under (f, g) for sample maps.

    python3 scripts/dml_visits.py --window 500
"""
import argparse
import json
from pathlib import Path

from loxodromic.intersect import parse_variety, subvariety_visit_set
from loxodromic.specs import load_map
from loxodromic.torus import TorusPoint

MAPS = Path(__file__).resolve().parent / "maps"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=int, default=500)
    a = ap.parse_args()

    f = load_map(MAPS / "torus_f.json")
    cases = [("diagonal, g = f", "torus_f", "variety_diagonal"),
             ("diagonal, g = f^2", "torus_f2", "variety_diagonal"),
             ("graph of f, g = f^2", "torus_f2", "variety_graph_f")]
    x0 = TorusPoint(1, 1)
    for label, gname, vname in cases:
        g = load_map(MAPS / f"{gname}.json")
        V = parse_variety(json.loads((MAPS / f"{vname}.json").read_text()))
        vs = subvariety_visit_set(f, g, x0, x0, V, (0, a.window))
        d = vs.decomposition
        print(f"{label:22s} visits {len(vs.indices):4d}  progressions {d.progressions}  "
              f"sporadic {d.sporadic}  undecided {vs.undecided}")


if __name__ == "__main__":
    main()

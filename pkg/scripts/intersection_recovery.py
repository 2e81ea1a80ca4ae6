"""Plant g = f^k, then recover the intersection set, the common iterate and the progression.

    python3 scripts/intersection_recovery.py --k 2 3 5 --window 300
"""
import argparse
import time

from loxodromic.fields import QQ
from loxodromic.intersect import (IntersectionWindow, banach_density_estimate, common_iterate_search,
                                  decompose_arithmetic_progressions, find_intersections)
from loxodromic.torus import PseudoMonomialMap, TorusPoint, power


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--window", type=int, default=300)
    ap.add_argument("--matrix", default="2,1,1,1")
    ap.add_argument("--translation", default="2,3")
    a = ap.parse_args()

    m = [int(x) for x in a.matrix.split(",")]
    f = PseudoMonomialMap.make([m[:2], m[2:]], a.translation.split(","), QQ)
    p = TorusPoint(1, 1)
    for k in a.k:
        t0 = time.perf_counter()
        g = power(f, k)
        win = IntersectionWindow((0, a.window), (0, a.window // k))
        iset = find_intersections(f, p, g, p, win)
        cert = common_iterate_search(f, g, 12)
        image = iset.iota_image
        dec = decompose_arithmetic_progressions(image, win.f_range)
        dens = banach_density_estimate(image, win.f_range)
        print(f"k={k}: {len(iset.pairs)} pairs, certificate {cert and (cert.N, cert.M)}, "
              f"progressions {dec.progressions}, sporadic {dec.sporadic}, "
              f"density {dens.value:.4f}  [{time.perf_counter() - t0:.2f} s]")


if __name__ == "__main__":
    main()

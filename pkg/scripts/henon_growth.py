"""Height growth of a Henon map along an exact orbit.

    python3 scripts/henon_growth.py --n 16 --point 1,0
"""
import argparse
from fractions import Fraction

from loxodromic.henon import PlaneAutomorphism, height_growth_profile, plane_dynamical_degree


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--point", default="1,0")
    ap.add_argument("--poly", default="0,0,1", help="coefficients of p(y), constant term first")
    ap.add_argument("--delta", default="1")
    ap.add_argument("--max-digits", type=int, default=200_000)
    a = ap.parse_args()

    h = PlaneAutomorphism.henon(tuple(Fraction(c) for c in a.poly.split(",")), Fraction(a.delta))
    p = tuple(Fraction(c) for c in a.point.split(","))
    prof = height_growth_profile(h, p, a.n, max_digits=a.max_digits)
    print(f"lambda = {plane_dynamical_degree(h)}")
    print(f"{'n':>3}  {'h(p_n)':>14}  {'ratio':>8}")
    for r in prof.records:
        ratio = "" if r.ratio is None else f"{r.ratio:8.4f}"
        print(f"{r.n:3d}  {r.height:14.6f}  {ratio:>8}")
    if prof.truncated:
        print("(stopped at the digit cap)")


if __name__ == "__main__":
    main()

"""Small-|y| behaviour of the pole/zero density: r * rho(r e^{i theta})
against the limiting profile h(theta), and a root count against the
integrated density."""
import argparse

import numpy as np

from painleve3.density import count_vs_integral, h_profile, rho_contour


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", action="store_true", help="also run the n=20 root count (about a minute)")
    a = ap.parse_args()
    print("theta, h(theta), r=0.04: r*rho, r=0.02: r*rho")
    for th in (-1.0, -0.5, 0.0, 0.5, 1.0):
        h = h_profile(th)
        vals = [r * rho_contour(r * np.exp(1j * th)).rho for r in (0.04, 0.02)]
        print(f"{th:+.2f}, {h:.5f}, {vals[0]:.5f}, {vals[1]:.5f}")
    if a.count:
        for m in (0, 1):
            r = count_vs_integral(20, m, ((0.08, 0.18), (-0.05, 0.05)))
            print(f"m={m}: expected {r['expected']:.2f}, zeros {r['observed_zeros']}, poles {r['observed_poles']}")


if __name__ == "__main__":
    main()

"""Error of the exterior approximation i p(y) against exact u_n(n y; m) for
several n.  At m = 0 the error falls like n^-2, at m = 1 like n^-1."""
import argparse

import mpmath
import numpy as np

from painleve3.outer_approx import udot_outer
from painleve3.umemura import eval_un


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", default="10,20,40")
    args = ap.parse_args()
    ns = [int(v) for v in args.ns.split(",")]
    print("y, m, n, error, n*error, n^2*error")
    for y in (0.6, 5 * np.exp(0.25j * np.pi)):
        for m in ("0", "1", "i/5"):
            for n in ns:
                e = abs(complex(eval_un(mpmath.mpc(n * y), n, m)) - udot_outer(y))
                print(f"{complex(y):.4g}, {m}, {n}, {e:.3e}, {n * e:.4f}, {n * n * e:.4f}")


if __name__ == "__main__":
    main()

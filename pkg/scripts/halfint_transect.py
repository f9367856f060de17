"""Layered half-integer approximation along the real axis across the right
eyebrow, against exact u_n(n r; -(k+1/2)).

Prints one row per radius with the regime chosen by each partition and its
error.  With --ul-sign-check the UL layer formula is also evaluated with the
opposite sign convention, (-1)^ell, to show which one the exact values
support."""
import argparse
import dataclasses

import mpmath
import numpy as np

from painleve3.halfint_approx import LayerRegime, _E, _layer_data, udot_halfint
from painleve3.landscape import in_tube, p_outer
from painleve3.umemura import eval_un


def ul_value(n, k, y, ell, flip):
    cf = _layer_data(k, LayerRegime(k, "layer", ell, "UL"))
    if flip:
        cf = dataclasses.replace(cf, sign=-cf.sign)
    p = complex(p_outer(y))
    E = _E(n, p, y)
    A = 1j * cf.sign * float(n) ** cf.a * cf.F * (1 / p + p) ** cf.b * (1 / p - p) ** cf.c
    return 1j / p * (E - A * p) / (E - A / p)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--r0", type=float, default=0.30)
    ap.add_argument("--r1", type=float, default=0.37)
    ap.add_argument("--samples", type=int, default=15)
    ap.add_argument("--ul-sign-check", action="store_true")
    a = ap.parse_args()
    m = -(a.k + 0.5)
    ms = f"-{2 * a.k + 1}/2"
    print("r, c, exact, theorem_regime, theorem_err, balanced_regime, balanced_err")
    for r in np.linspace(a.r0, a.r1, a.samples):
        ex = complex(eval_un(mpmath.mpc(a.n * r), a.n, ms))
        t = udot_halfint(a.n, r, m)
        b = udot_halfint(a.n, r, m, partition="balanced")
        c = in_tube(r)[1]
        print(f"{r:.4f}, {c:+.4f}, {ex.real:+.4f}, {t.regime}, {abs(t.value - ex):.3f}, "
              f"{b.regime}, {abs(b.value - ex):.3f}")
    if a.ul_sign_check:
        print("\nUL layer formulas: error with sign (-1)^(ell-1) vs (-1)^ell, best point per layer")
        for ell in range(1, a.k + 1):
            best = []
            for r in np.linspace(a.r0, a.r1, 4 * a.samples):
                ex = complex(eval_un(mpmath.mpc(a.n * r), a.n, ms))
                best.append((abs(ul_value(a.n, a.k, r, ell, False) - ex),
                             abs(ul_value(a.n, a.k, r, ell, True) - ex), r))
            e0 = min(best)
            e1 = min(best, key=lambda t: t[1])
            print(f"ell={ell}: (-1)^(ell-1) best {e0[0]:.3f} at r={e0[2]:.4f}; (-1)^ell best {e1[1]:.3f} "
                  f"at r={e1[2]:.4f}")


if __name__ == "__main__":
    main()

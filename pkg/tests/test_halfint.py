import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from painleve3.errors import HalfIntegerM
from painleve3.halfint_approx import (HALFINT_TUBE, LayerRegime, classify, dist_to_curve,
                                      equilibrium_halfint, exact_k0_oracle, eyebrow_curves, layer_value,
                                      udot_halfint)
from painleve3.landscape import RED, in_tube, p_branch, p_outer
from painleve3.umemura import classified_roots, eval_un


def test_rejects_non_half_integer():
    with pytest.raises(HalfIntegerM):
        udot_halfint(10, 0.33, 0.25)


def test_deep_inside_and_outside():
    # [PAPER] c << 0 gives i/p, c >> 0 gives i p
    for y in (0.25, 0.29):
        assert abs(udot_halfint(100, y, -0.5).value - 1j / p_outer(y)) < 1e-3
    for y in (0.4, 0.5):
        assert abs(udot_halfint(100, y, -0.5).value - 1j * p_outer(y)) < 1e-3


@pytest.mark.parametrize("n", [10, 20])
def test_shared_boundaries_agree(n):
    # [PAPER] at c = -(k - 2l) ln(n)/(2n) the formulas on both sides coincide
    k, L = 2, math.log(n) / (2 * n)
    y = 0.34 * np.exp(0.2j)
    for ell in range(1, k + 1):
        left = LayerRegime(k, "layer", ell, "UU_last")
        right = LayerRegime(k, "layer", ell + 1, "UU_first") if ell < k else LayerRegime(k, "outer_right")
        assert abs(layer_value(n, k, y, left)[0] - layer_value(n, k, y, right)[0]) < 1e-10
    a = layer_value(n, k, y, LayerRegime(k, "outer_left"))[0]
    b = layer_value(n, k, y, LayerRegime(k, "layer", 1, "UU_first"))[0]
    assert abs(a - b) < 1e-10
    assert classify(n, k, -k * L).tag == "outer_left"


@given(st.integers(0, 3), st.integers(5, 60), st.floats(-0.3, 0.3), st.floats(0, 0.2))
def test_partition_monotone(k, n, c, dc):
    # [TRIVIAL] regimes are ordered along c: a larger c never maps to an earlier formula
    def rank(c):
        reg = classify(n, k, c)
        if reg.tag == "outer_left":
            return 0
        if reg.tag == "outer_right":
            return 3 * k + 1
        return 3 * (reg.ell - 1) + {"UU_first": 1, "UL": 2, "UU_last": 3}[reg.sub]
    assert rank(c) <= rank(c + dc)


def test_positive_m_by_symmetry():
    # [PAPER] m = k + 1/2 through u_n(x; m) = 1/u_n(-x; -m)
    y = -0.33 + 0.02j
    a = udot_halfint(20, y, 1.5).value
    b = udot_halfint(20, -y, -1.5).value
    assert abs(a * b - 1) < 1e-12


def test_equilibrium_decay():
    # [PAPER] |1/u_n - 1/(i p_red)| halves from n = 10 to n = 20 at y = 0.2
    y = 0.2
    e = [abs(1 / complex(eval_un(mpmath.mpc(n * y), n, "-1/2")) - 1 / (1j * p_branch(y, RED))) for n in (10, 20)]
    assert 0.25 <= e[1] / e[0] <= 0.75
    assert udot_halfint(20, y, -0.5).value == equilibrium_halfint(y, -0.5)


def test_oracle_matches_exact():
    # [DERIVED] two independent exact computations
    for y in (0.33, 0.3 + 0.1j):
        ex = complex(eval_un(mpmath.mpc(6 * y), 6, "-1/2"))
        assert abs(exact_k0_oracle(6, y) - ex) < 1e-8


def test_oracle_conjugation():
    # [TRIVIAL] real data: conjugate point gives conjugate value
    y = 0.32 + 0.07j
    assert abs(exact_k0_oracle(8, y.conjugate()) - exact_k0_oracle(8, y).conjugate()) < 1e-10


def test_oracle_vs_layered():
    # [PAPER] error O(1/n) at the eyebrow midpoint
    assert abs(exact_k0_oracle(20, 0.333) - udot_halfint(20, 0.333, -0.5).value) < 0.15


def test_curves_k0():
    # [PAPER] two curves, zero right of pole
    cs = eyebrow_curves(20, 0, rays=21)
    assert [c.kind for c in cs] == ["pole", "zero"]
    mid = [abs(c.path.nodes[10]) for c in cs]
    assert mid[0] < mid[1]


@pytest.mark.parametrize("k", [1, 2])
def test_curves_count_and_order(k):
    # [PAPER] 4k+2 curves, ordering from the layer structure
    cs = eyebrow_curves(10, k, rays=11)
    assert len(cs) == 4 * k + 2
    expect = ["pole", "zero"] + ["zero", "pole", "pole", "zero"] * k
    assert [c.kind for c in cs] == expect
    radii = [abs(c.path.nodes[5]) for c in cs]
    assert all(a < b for a, b in zip(radii, radii[1:]))


def test_exact_roots_near_curves_k0():
    # [DERIVED] exact roots of u_20(20 y; -1/2) in the tube sit on same-type curves
    n = 20
    cs = eyebrow_curves(n, 0, rays=61)
    sol = classified_roots(n, "-1/2")
    checked = 0
    for kind, roots in (("zero", sol.zeros()), ("pole", sol.poles())):
        for x in roots:
            y = complex(x) / n
            if y.real <= 0 or not in_tube(y, type(HALFINT_TUBE)(0.2, 0.08))[0]:
                continue
            checked += 1
            d = min(dist_to_curve(y, c) for c in cs if c.kind == kind)
            assert d < 0.5 / n
    assert checked > 0

"""Half-integer m = -(k + 1/2): layered Moebius approximations near the
right eyebrow, the pole/zero curves they predict, and a contour-integral
oracle for k = 0.

Every layer formula has the shape

    udot = i * P0 * (E - i s n^a F P1 S^b D^c) / (E - i s n^a F P2 S^b D^c)

with E = exp(2 n V(1/p; y)), S = 1/p + p, D = 1/p - p and (P0, P1, P2)
either (p, 1/p, p) or (1/p, p, 1/p).  ``_layer_data`` returns the
constants for each regime.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from .errors import BracketFailure, HalfIntegerM, NonConvergence
from .landscape import BLUE, RED, TubeParams, in_tube, p_branch, p_outer
from .numerics import Path
from .values import ApproxValue


@dataclass(frozen=True)
class LayerRegime:
    k: int
    tag: str            # outer_left, layer, outer_right, equilibrium_outside_T
    ell: int = 0
    sub: str = ""       # UU_first, UL, UU_last inside a layer
    c: float = float("nan")


@dataclass(frozen=True)
class _Coeffs:
    upper: bool         # True: P0 = p; False: P0 = 1/p
    sign: int
    a: int              # power of n
    F: float
    b: int              # power of S
    c: int              # power of D


def _layer_data(k: int, reg: LayerRegime) -> _Coeffs:
    f = math.factorial
    if reg.tag == "outer_left" or (reg.tag == "layer" and reg.sub == "UU_first"):
        ell = 1 if reg.tag == "outer_left" else reg.ell
        return _Coeffs(True, (-1) ** (ell - 1), 2 * ell - k - 2, f(k - ell + 1) / f(ell - 1),
                       k - 2 * ell + 2, 6 * ell - 3 * k - 6)
    if reg.tag == "layer" and reg.sub == "UL":
        ell = reg.ell
        # sign (-1)^(ell-1): checked against exact u_n for k <= 3, see notes
        return _Coeffs(False, (-1) ** (ell - 1), 2 * ell - k - 1, f(k - ell) / f(ell - 1),
                       k - 2 * ell + 1, 6 * ell - 3 * k - 3)
    if reg.tag == "layer" and reg.sub == "UU_last":
        ell = reg.ell
        return _Coeffs(True, (-1) ** ell, 2 * ell - k, f(k - ell) / f(ell), k - 2 * ell, 6 * ell - 3 * k)
    if reg.tag == "outer_right":
        return _Coeffs(True, (-1) ** k, k, 1 / f(k), -k, 3 * k)
    raise ValueError(f"no layer formula for {reg}")


def classify(n: int, k: int, c: float) -> LayerRegime:
    """Regime from the layer coordinate c = Re V(1/p; y).  Boundaries are
    assigned to the left-hand regime; adjacent formulas agree there."""
    L = math.log(n) / (2 * n)
    if c <= -k * L:
        return LayerRegime(k, "outer_left", c=c)
    for ell in range(1, k + 1):
        base = k - 2 * ell
        if c <= -(base + 1.5) * L:
            return LayerRegime(k, "layer", ell, "UU_first", c)
        if c <= -(base + 0.5) * L:
            return LayerRegime(k, "layer", ell, "UL", c)
        if c <= -base * L:
            return LayerRegime(k, "layer", ell, "UU_last", c)
    return LayerRegime(k, "outer_right", c=c)


def _formula_sequence(k: int):
    """The distinct layer formulas from inside E outwards: UU(1), UL(1),
    UU(2), ..., UL(k), UU(k+1).  UU(l) is UU_first for layer l, which equals
    UU_last for layer l - 1."""
    seq = [LayerRegime(k, "outer_left")]
    for ell in range(1, k + 1):
        seq.append(LayerRegime(k, "layer", ell, "UL"))
        seq.append(LayerRegime(k, "layer", ell + 1, "UU_first") if ell < k else LayerRegime(k, "outer_right"))
    return seq


def classify_balanced(n: int, k: int, y, c: float) -> LayerRegime:
    """Finite-n partition: formula j is centred where |E| equals the size of
    its coefficient, ln|A_j| / (2n), and boundaries sit midway between
    consecutive centres.  Differs from ``classify`` by O(1/n) in c."""
    p = complex(p_outer(complex(y)))
    S, D = abs(1 / p + p), abs(1 / p - p)
    seq = _formula_sequence(k)
    centres = []
    for reg in seq:
        cf = _layer_data(k, reg)
        centres.append((cf.a * math.log(n) + math.log(cf.F) + cf.b * math.log(S) + cf.c * math.log(D)) / (2 * n))
    j = 0
    while j + 1 < len(seq) and c > 0.5 * (centres[j] + centres[j + 1]):
        j += 1
    reg = seq[j]
    if reg.tag == "layer" and reg.sub == "UU_first" and c < centres[j]:
        reg = LayerRegime(k, "layer", reg.ell - 1, "UU_last")
    return LayerRegime(k, reg.tag, reg.ell, reg.sub, c)


def _half_k(m) -> tuple[int, int]:
    """(k, sign) with m = sign * (k + 1/2)."""
    m = complex(m)
    if m.imag != 0:
        raise HalfIntegerM(f"m={m} is not a half-integer")
    twice = 2 * m.real
    if abs(twice - round(twice)) > 1e-12 or round(twice) % 2 == 0:
        raise HalfIntegerM(f"m={m.real} is not a half-integer")
    k2 = int(round(twice))
    return (abs(k2) - 1) // 2, (1 if k2 > 0 else -1)


def _E(n, p, y):
    """exp(2 n V(1/p; y)) with V(1/p) = log p + i y (p - 1/p)."""
    return np.exp(2 * n * (np.log(p) + 1j * y * (p - 1 / p)))


def layer_value(n: int, k: int, y, reg: LayerRegime) -> tuple[complex, float]:
    """(udot, distance estimate in y to its nearest zero or pole)."""
    y = complex(y)
    p = complex(p_outer(y))
    E = _E(n, p, y)
    S, D = 1 / p + p, 1 / p - p
    cf = _layer_data(k, reg)
    P0, P1, P2 = (p, 1 / p, p) if cf.upper else (1 / p, p, 1 / p)
    A = 1j * cf.sign * float(n) ** cf.a * cf.F * S ** cf.b * D ** cf.c
    num, den = E - A * P1, E - A * P2
    # dE/dy = 2 n E dV/dy and dV/dy = -i (1/p - p) at the critical point
    dE = abs(2 * n * E * D)
    dist = min(abs(num), abs(den)) / dE if dE > 0 else math.inf
    return complex(1j * P0 * num / den), dist


HALFINT_TUBE = TubeParams(0.2, 0.3)


def udot_halfint(n: int, y, m, eps: float = 0.05, tube: TubeParams = HALFINT_TUBE,
                 partition: str = "theorem") -> ApproxValue:
    """Approximation of u_n(n y; m) for m = -(k+1/2) (layers about the right
    eyebrow) or m = k+1/2 (via u_n(x; m) = 1/u_n(-x; -m)).

    ``partition`` is "theorem" (layer boundaries at multiples of
    ln(n)/(2n)) or "balanced" (see ``classify_balanced``)."""
    k, sgn = _half_k(m)
    y = complex(y)
    if sgn > 0:
        inner = udot_halfint(n, -y, -complex(m), eps, tube, partition)
        return ApproxValue(1 / inner.value, inner.regime, inner.carveout, inner.flagged)
    if y.real > 0:
        inside, c = in_tube(y, tube)
    else:
        inside, c = False, float("nan")
    if not inside:
        return ApproxValue(1j * p_branch(y, RED), "equilibrium_outside_T")
    reg = classify(n, k, c) if partition == "theorem" else classify_balanced(n, k, y, c)
    val, dist = layer_value(n, k, y, reg)
    name = reg.tag if reg.tag != "layer" else f"layer{reg.ell}_{reg.sub}"
    carve = n * dist
    return ApproxValue(val, name, carve, carve < eps)


def equilibrium_halfint(y, m) -> complex:
    """Away from the relevant eyebrow: i p_red for m < 0, i p_blue for m > 0."""
    _, sgn = _half_k(m)
    return 1j * p_branch(complex(y), RED if sgn < 0 else BLUE)


# ---------------------------------------------------------------- curves

@dataclass(frozen=True)
class EyebrowCurve:
    index: int
    kind: str           # "zero" or "pole"
    provenance: str     # which layer formula the curve comes from
    path: Path


def _curve_specs(n: int, k: int):
    """(kind, provenance, log RHS(y)) left to right."""
    f = math.factorial

    def rhs(coef, sp, dp, pw):
        def g(y):
            p = complex(p_outer(y))
            return (math.log(coef) + sp * math.log(abs(1 / p + p)) - dp * math.log(abs(1 / p - p))
                    - (sp * math.log(n)) + pw * math.log(abs(p)))
        return g
    specs = [("pole", "outer_left", rhs(f(k), k, 3 * k, 1)),
             ("zero", "outer_left", rhs(f(k), k, 3 * k, -1))]
    for ell in range(1, k + 1):
        c1 = f(k - ell) / f(ell - 1)
        e1 = k - 2 * ell + 1
        specs.append(("zero", f"layer{ell}_UL", rhs(c1, e1, 3 * e1, 1)))
        specs.append(("pole", f"layer{ell}_UL", rhs(c1, e1, 3 * e1, -1)))
        c2 = f(k - ell) / f(ell)
        e2 = k - 2 * ell
        specs.append(("pole", f"layer{ell}_UU", rhs(c2, e2, 3 * e2, 1)))
        specs.append(("zero", f"layer{ell}_UU", rhs(c2, e2, 3 * e2, -1)))
    return specs


def _c_on_ray(r, th):
    return in_tube(r * np.exp(1j * th), TubeParams(0.0, np.inf))[1]


def _ray_bracket(th, cmax):
    """Radii on the ray arg y = th where the layer coordinate is -cmax and +cmax."""
    def at(target):
        g = lambda r: _c_on_ray(r, th) - target
        lo, hi = 0.05, 2.0
        while g(lo) > 0 and lo > 1e-4:
            lo /= 2
        while g(hi) < 0 and hi < 100:
            hi *= 2
        if g(lo) * g(hi) > 0:
            raise BracketFailure(f"layer coordinate {target} not reached on ray {th}")
        return brentq(g, lo, hi, xtol=1e-12)
    return at(-cmax), at(cmax)


def eyebrow_curves(n: int, k: int, rays: int = 61, delta1: float = 0.2) -> list[EyebrowCurve]:
    """The 4k+2 curves carrying the zeros and poles of the layered
    approximation, each traced ray by ray by bisection."""
    if n < 2:
        raise ValueError("need n >= 2")
    specs = _curve_specs(n, k)
    cmax = max(0.5, (k + 2) * math.log(n) / n)
    thetas = np.linspace(-(np.pi / 2 - delta1), np.pi / 2 - delta1, rays)
    pts = [[] for _ in specs]
    for th in thetas:
        rlo, rhi = _ray_bracket(th, cmax)
        for i, (_, _, lr) in enumerate(specs):
            g = lambda r: 2 * n * _c_on_ray(r, th) - lr(r * np.exp(1j * th))
            if g(rlo) * g(rhi) > 0:
                raise BracketFailure(f"curve {i} not bracketed on ray {th}")
            r = brentq(g, rlo, rhi, xtol=1e-9)
            pts[i].append(complex(r * np.exp(1j * th)))
    return [EyebrowCurve(i, kind, prov, Path(tuple(z))) for i, ((kind, prov, _), z) in enumerate(zip(specs, pts))]


def dist_to_curve(y, curve: EyebrowCurve) -> float:
    z = np.array(curve.path.nodes)
    a, b = z[:-1], z[1:]
    d = b - a
    t = np.clip(np.real((y - a) * np.conj(d)) / np.abs(d) ** 2, 0, 1)
    return float(np.min(np.abs(a + t * d - y)))


# ---------------------------------------------------------------- k = 0 oracle

def exact_k0_oracle(n: int, y, dps: int | None = None) -> complex:
    """u_n(n y; -1/2) as a ratio of two contour integrals.

    With lam = t^2 the integrands become t^(2n) e^{i n y (t^2 - t^-2)} and
    t^(2n-2) e^{...}, single valued in t.  The contour comes in from
    infinity along the steepest direction pi/4 - arg(y)/2, turns clockwise on
    |t| = 1 and leaves to 0 along pi/4 + arg(y)/2 - pi."""
    y = complex(y)
    th = np.angle(y)
    if abs(th) >= np.pi / 2:
        raise NonConvergence("the oracle contour needs Re y > 0")
    dps = dps or 30 + 2 * n
    with mp.workdps(dps):
        yy = mp.mpc(y)
        a_inf = mp.mpf(np.pi / 4 - th / 2)
        a_zero = mp.mpf(np.pi / 4 + th / 2) - mp.pi

        def integral(pw):
            f = lambda t: t ** pw * mp.exp(1j * n * yy * (t * t - 1 / (t * t)))
            ein, ez = mp.expj(a_inf), mp.expj(a_zero)
            part1 = mp.quad(lambda s: f(s * ein) * ein, [mp.inf, 4, 2, 1])
            part2 = mp.quad(lambda ph: f(mp.expj(ph)) * 1j * mp.expj(ph),
                            mp.linspace(a_inf, a_zero, 5))
            part3 = mp.quad(lambda s: f(s * ez) * ez, [1, 0.5, 0.25, 0])
            return part1 + part2 + part3
        return complex(1j * integral(2 * n) / integral(2 * n - 2))

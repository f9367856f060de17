"""Limiting density of zeros and poles in the right half of the eye:
rho = |grad K1 x grad K2| / (2 pi^2), and its small-|y| profile h(theta)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic_approx import l3_path, periods
from .errors import ContinuationStall, StencilOutsideDomain
from .landscape import in_eye
from .numerics import adaptive_gk
from .spectral import _sc, a_cycle, b_cycle, path_integral, solve_boutroux, solve_smallY_seed


@dataclass(frozen=True)
class DensitySample:
    y: complex
    rho: float
    gradK1: tuple
    gradK2: tuple


def K_pair(y):
    """(K1, K2) at y; K2 is only meaningful modulo 2 pi."""
    _, _, _, K1, K2 = periods(solve_boutroux(y))
    return float(K1.real), float(K2.real)


def _wrap(d):
    return (d + np.pi) % (2 * np.pi) - np.pi


def rho(y, h: float | None = None, richardson: bool = False) -> DensitySample:
    """Density from central differences of K1, K2 in Re y and Im y.
    Differences of K2 are wrapped into (-pi, pi].  With ``richardson`` the
    step h/2 is also taken and the two estimates are extrapolated."""
    y = complex(y)
    h = 1e-3 * abs(y) if h is None else h
    pts = [y + h, y - h, y + 1j * h, y - 1j * h]
    for p in pts:
        if p.real <= 0 or not in_eye(p):
            raise StencilOutsideDomain(f"stencil point {p} leaves the right half of the eye")
    (a1, a2), (b1, b2), (c1, c2), (d1, d2) = (K_pair(p) for p in pts)
    g1 = ((a1 - b1) / (2 * h), (c1 - d1) / (2 * h))
    g2 = (_wrap(a2 - b2) / (2 * h), _wrap(c2 - d2) / (2 * h))
    if richardson:
        half = rho(y, h / 2)
        g1 = tuple((4 * b - a) / 3 for a, b in zip(g1, half.gradK1))
        g2 = tuple((4 * b - a) / 3 for a, b in zip(g2, half.gradK2))
    cross = g1[0] * g2[1] - g1[1] * g2[0]
    return DensitySample(y, abs(cross) / (2 * np.pi ** 2), g1, g2)


def rho_contour(y) -> DensitySample:
    """Density with the gradients obtained by differentiating the period
    integrals under the integral sign.

    dP = P_y dy + lam^2 dC, so d(int g R) = int g dP / (2R).  The response
    dC to a real step in y is fixed by keeping both Boutroux conditions
    (Re of the a- and b-cycles of R/lam^2) at zero."""
    curve = solve_boutroux(y)
    yy = curve.y
    Py = lambda lam: (-yy * lam ** 4 + 1j * lam ** 3 + 1j * lam - yy) / 2
    Ya = a_cycle(curve, lambda lam: Py(lam) / lam ** 2)
    Yb = b_cycle(curve, lambda lam, hints=(): Py(lam) / (lam ** 2 * curve.R(lam, hints)))
    Da = a_cycle(curve)
    Db = b_cycle(curve, lambda lam, hints=(): 1 / curve.R(lam, hints))
    path = l3_path(curve)
    L_y = path_integral(lambda lam, hints=(): Py(lam) / (lam ** 2 * curve.R(lam, hints)), path, True, True,
                        offsets=True)
    L_c = path_integral(lambda lam, hints=(): 1 / curve.R(lam, hints), path, True, True, offsets=True)
    M = np.array([[Da.real, -Da.imag], [Db.real, -Db.imag]])
    g1, g2 = [], []
    for v in (1.0, 1j):
        dc = np.linalg.solve(M, -np.array([(Ya * v).real, (Yb * v).real]))
        dC = complex(dc[0], dc[1])
        g1.append(float((0.5j * (Ya * v + Da * dC)).real))
        g2.append(float((-1j * (L_y * v + L_c * dC)).real))
    cross = g1[0] * g2[1] - g1[1] * g2[0]
    return DensitySample(complex(y), abs(cross) / (2 * np.pi ** 2), tuple(g1), tuple(g2))


# ---------------------------------------------------------------- small |y|

def _limit_roots(Ct):
    s = np.sqrt(Ct * Ct + 1)
    return 1j * (Ct + s), 1j * (Ct - s)


def _Rt_factory(theta, Ct):
    """Limit of R / sqrt(r) as r -> 0: sqrt((i e^{i theta}/2) lam (lam^2 - 2 i Ct lam + 1))
    cut on [rho_-, 0] and on the ray from rho_+ in the direction of lam0."""
    rp, rm = _limit_roots(Ct)
    ray = np.exp(1j * (np.pi / 2 - theta))
    k = np.sqrt(0.5j * np.exp(1j * theta))

    def Rt(lam):
        lam = np.asarray(lam, dtype=complex)
        # sqrt(lam - rho_+) with its cut along rho_+ + t * ray, t > 0
        far = np.sqrt((lam - rp) / (-ray)) * np.sqrt(-ray)
        return k * _sc(lam, rm, 0j) * far
    return Rt, rp, rm


def _anchor_sign(theta, Rt):
    """Match the branch of the limit curve to R / sqrt(r) at r = 0.02."""
    r = 0.02
    curve = solve_boutroux(r * np.exp(1j * theta))
    probe = 0.7 * np.exp(1j * (np.pi / 2 - theta)) + 0.3
    return 1.0 if abs(curve.R(probe) / np.sqrt(r) - Rt(probe)) < abs(curve.R(probe) / np.sqrt(r) + Rt(probe)) else -1.0


def _poly_integral(f, nodes):
    total = 0j
    for a, b in zip(nodes, nodes[1:]):
        d = b - a
        total += adaptive_gk(lambda t: f(a + d * t) * d, 0.0, 1.0, 1e-12)
    return total


def _arc_integral(f, a, w, b):
    """a -> w -> b with inverse square root singularities at a and b."""
    total = 0j
    d = w - a
    total += adaptive_gk(lambda s: f(a + d * s * s) * 2 * d * s, 0.0, 1.0, 1e-12)
    d = b - w
    total += adaptive_gk(lambda s: f(b - d * s * s) * 2 * d * s, 0.0, 1.0, 1e-12)
    return total


def h_profile(theta: float, dtheta: float = 1e-4) -> float:
    """Limit of r * rho(r e^{i theta}) as r -> 0, from the determinant of
    loop integrals on the limiting cubic curve."""
    if abs(theta) >= np.pi / 2 - 0.1:
        raise ContinuationStall("h(theta) needs |theta| < pi/2 - 0.1")
    Ct = complex(solve_smallY_seed(theta))
    Ct_th = (complex(solve_smallY_seed(theta + dtheta)) - complex(solve_smallY_seed(theta - dtheta))) / (2 * dtheta)
    Rt, rp, rm = _Rt_factory(theta, Ct)
    sgn = _anchor_sign(theta, Rt)
    f1 = lambda lam: (lam + 1 / lam) / (sgn * Rt(lam))
    f2 = lambda lam: 1 / (sgn * Rt(lam))
    # C1: counterclockwise polygon about the segment [rho_-, 0]
    c, L = rm / 2, abs(rm)
    u = rm / L
    pad = 0.3 * L
    corners = [c + u * (L / 2 + pad) * a + 1j * u * pad * b for a, b in ((1, -1), (1, 1), (-1, 1), (-1, -1))]
    loop = corners + [corners[0]]
    if np.imag(np.conj(corners[1] - corners[0]) * (corners[2] - corners[1])) < 0:
        loop = loop[::-1]
    C1 = [_poly_integral(f, loop) for f in (f1, f2)]
    # C2: two arcs rho_+ -> rho_- passing the blue cut and 0 on opposite sides
    span = rm - rp
    mid = (rp + rm) / 2
    off = 1j * span * 0.6
    C2 = [_arc_integral(f, rp, mid + off, rm) + _arc_integral(f, rp, mid - off, rm) for f in (f1, f2)]
    det = C1[0] * C2[1] - C1[1] * C2[0]
    return float(abs(-1j * np.exp(2j * theta) * Ct_th / (16 * np.pi ** 2) * det))


# ---------------------------------------------------------------- counting

def count_vs_integral(n: int, m, region, grid: int = 16, method: str = "contour"):
    """Expected n^2 * integral of rho over a rectangle (midpoint rule) and
    the observed numbers of exact zeros and poles of u_n(n y; m) there.

    ``region`` is ((x0, x1), (y0, y1)) in the y-plane.  ``method`` picks the
    density route, "contour" (one curve per node) or "fd"."""
    from .umemura import classified_roots
    (x0, x1), (y0, y1) = region
    xs = x0 + (np.arange(grid) + 0.5) * (x1 - x0) / grid
    ys = y0 + (np.arange(grid) + 0.5) * (y1 - y0) / grid
    cell = (x1 - x0) * (y1 - y0) / grid ** 2
    dens = rho_contour if method == "contour" else rho
    total = sum(dens(complex(a, b)).rho for a in xs for b in ys) * cell
    sol = classified_roots(n, m)

    def inside(x):
        z = complex(x) / n
        return x0 <= z.real <= x1 and y0 <= z.imag <= y1
    zeros = sum(1 for x in sol.zeros() if inside(x))
    poles = sum(1 for x in sol.poles() if inside(x))
    return {"expected": float(n * n * total), "observed_zeros": zeros, "observed_poles": poles}

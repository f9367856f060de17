"""Numerical kernels: path quadrature, polynomial roots, 2-d Newton.

Two quadrature routes are provided.  ``integrate_path`` works on mpmath
numbers at the ambient working precision; ``integrate_path_np`` is an
adaptive Gauss-Kronrod (7/15) rule on vectorised numpy integrands and is
what the spectral and elliptic modules use, since double precision is
plenty for their tolerances.  ``segment_integral`` removes inverse
square-root endpoint singularities by a change of variable first.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Sequence

import gmpy2
import mpmath
import numpy as np

from .errors import NonConvergence, SingularJacobian

BigComplex = mpmath.mpc

DEFAULT_PREC = 256
ROOT_PREC = 512
MAX_DEPTH = 20


def working_prec(default: int = DEFAULT_PREC) -> int:
    import os
    v = os.environ.get("PAINLEVE3_PRECISION")
    return int(v) if v else default


def big(z, prec: int | None = None) -> mpmath.mpc:
    """Coerce to an mpmath complex at ``prec`` bits (ambient if omitted)."""
    if prec is None:
        return mpmath.mpc(z)
    with mpmath.workprec(prec):
        return +mpmath.mpc(z)


@dataclass(frozen=True)
class Path:
    nodes: tuple
    closed: bool = False

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least two nodes")
        for a, b in zip(self.nodes, self.nodes[1:]):
            if a == b:
                raise ValueError("consecutive path nodes must differ")

    @classmethod
    def of(cls, *nodes, closed=False):
        return cls(tuple(nodes), closed)

    def segments(self):
        pts = list(self.nodes)
        if self.closed and pts[0] != pts[-1]:
            pts.append(pts[0])
        return list(zip(pts, pts[1:]))

    def reversed(self):
        return Path(tuple(reversed(self.nodes)), self.closed)

    def __add__(self, other):
        if self.nodes[-1] != other.nodes[0]:
            raise ValueError("paths do not join")
        return Path(self.nodes + other.nodes[1:], False)


def circle_path(center, radius, k=64, start_angle=0.0):
    """Closed counterclockwise polygon approximating a circle (for loops
    of analytic integrands only the homotopy class matters)."""
    t = start_angle + 2 * np.pi * np.arange(k) / k
    return Path(tuple(complex(center + radius * np.exp(1j * s)) for s in t), closed=True)


# ---------------------------------------------------------------- mp route

def integrate_path(f: Callable, path: Path, tol=1e-30, max_depth=MAX_DEPTH, prec: int | None = None) -> mpmath.mpc:
    """Tanh-sinh along each segment at ``prec`` bits (working_prec() by default)."""
    with mpmath.workprec(prec or working_prec()):
        total = mpmath.mpc(0)
        for a, b in path.segments():
            total += _mp_segment(f, mpmath.mpc(a), mpmath.mpc(b), tol, max_depth)
        return +total


def _mp_segment(f, a, b, tol, depth):
    g = lambda t: f(a + (b - a) * t) * (b - a)
    val, err = mpmath.quad(g, [0, 1], error=True)
    if err <= tol:
        return val
    if depth == 0:
        raise NonConvergence(f"quadrature on [{a}, {b}] stalled at error {err}")
    mid = (a + b) / 2
    return _mp_segment(f, a, mid, tol / 2, depth - 1) + _mp_segment(f, mid, b, tol / 2, depth - 1)


# ---------------------------------------------------------------- numpy route

_XGK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                 0.207784955007898467600689403773245, 0.0])
_WGK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
_X15 = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_W15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_W7 = np.zeros(15)
_W7[1:7:2] = _WG[:3]
_W7[7] = _WG[3]
_W7[9:15:2] = _WG[2::-1]


def _gk(g, lo, hi):
    h = (hi - lo) / 2
    vals = g(lo + h * (_X15 + 1))
    k = h * np.dot(_W15, vals)
    return k, abs(k - h * np.dot(_W7, vals))


def adaptive_gk(g: Callable, lo: float, hi: float, tol=1e-13, max_depth=MAX_DEPTH, max_intervals=4000,
                rtol=1e-13):
    """Globally adaptive G7K15 on [lo, hi] for a vectorised complex integrand.
    Stops once the error estimate is below max(tol, rtol * |integral|)."""
    k, e = _gk(g, lo, hi)
    heap = [(-e, lo, hi, k, 0)]
    total, err = k, e
    while err > max(tol, rtol * abs(total)):
        ne, a, b, ka, d = heapq.heappop(heap)
        if d >= max_depth or len(heap) > max_intervals:
            raise NonConvergence(f"adaptive quadrature stalled, error {err:.3g} > tol {tol:.3g}")
        m = (a + b) / 2
        k1, e1 = _gk(g, a, m)
        k2, e2 = _gk(g, m, b)
        total += k1 + k2 - ka
        err += e1 + e2 + ne
        heapq.heappush(heap, (-e1, a, m, k1, d + 1))
        heapq.heappush(heap, (-e2, m, b, k2, d + 1))
    return total


def segment_integral(f: Callable, a: complex, b: complex, sing_a=False, sing_b=False, tol=1e-13,
                     offsets=False):
    """Integral of f along the segment a->b.  ``sing_a``/``sing_b`` flag an
    inverse-square-root (or square-root) singularity at that endpoint; the
    substitution makes the transformed integrand smooth.

    With ``offsets`` the integrand is called as f(lam, hints) where hints is
    ((a, lam - a), (b, lam - b)) with both differences formed without
    cancellation, so f can evaluate factors vanishing at an endpoint to full
    relative accuracy."""
    a, b = complex(a), complex(b)
    d = b - a
    call = (lambda lam, da, db: f(lam, ((a, da), (b, db)))) if offsets else (lambda lam, da, db: f(lam))
    if sing_a and sing_b:
        def g(p):
            da, db = d * np.sin(p / 2) ** 2, -d * np.cos(p / 2) ** 2
            return call(a + da, da, db) * (d / 2) * np.sin(p)
        return adaptive_gk(g, 0.0, np.pi, tol)
    if sing_a:
        g = lambda s: call(a + d * s * s, d * s * s, d * (s * s - 1)) * 2 * d * s
        return adaptive_gk(g, 0.0, 1.0, tol)
    if sing_b:
        g = lambda s: call(b - d * s * s, d * (1 - s * s), -d * s * s) * 2 * d * s
        return adaptive_gk(g, 0.0, 1.0, tol)
    return adaptive_gk(lambda t: call(a + d * t, d * t, d * (t - 1)) * d, 0.0, 1.0, tol)


def integrate_path_np(f: Callable, path: Path, tol=1e-13, sing_start=False, sing_end=False):
    segs = path.segments()
    total = 0j
    for i, (a, b) in enumerate(segs):
        total += segment_integral(f, a, b, sing_start and i == 0, sing_end and i == len(segs) - 1, tol)
    return total


# ---------------------------------------------------------------- roots

def _fujiwara(c):
    n = len(c) - 1
    lead = abs(c[-1])
    terms = [abs(c[n - k] / lead) ** (gmpy2.mpfr(1) / k) for k in range(1, n)]
    terms.append(abs(c[0] / (2 * lead)) ** (gmpy2.mpfr(1) / n))
    return 2 * max(terms)


def find_roots_poly(coeffs: Sequence, precision_bits: int = ROOT_PREC, max_iter: int = 3000):
    """All roots (with multiplicity) of sum coeffs[k] x^k by Aberth-Ehrlich
    iteration in gmpy2 at ``precision_bits``.  Returns mpmath complexes."""
    ctx = gmpy2.get_context().copy()
    ctx.precision = precision_bits
    with gmpy2.context(ctx):
        c = [_to_gmpy(z) for z in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        n = len(c) - 1
        if n < 1:
            raise ValueError("degree must be at least 1")
        # roots at the origin are split off exactly
        nz = 0
        while c[0] == 0:
            c.pop(0)
            nz += 1
        n -= nz
        roots = []
        if n >= 1:
            roots = _aberth(c, n, precision_bits, max_iter)
        roots += [gmpy2.mpc(0)] * nz
    with mpmath.workprec(precision_bits):
        return [mpmath.mpc(_gm2mp(r.real), _gm2mp(r.imag)) for r in roots]


def _gm2mp(x):
    m, e = x.as_mantissa_exp()
    return mpmath.ldexp(mpmath.mpf(int(m)), int(e))


def _to_gmpy(z):
    if isinstance(z, mpmath.mpc) or isinstance(z, mpmath.mpf):
        z = mpmath.mpc(z)
        return gmpy2.mpc(_mp2gm(z.real), _mp2gm(z.imag))
    if hasattr(z, "re") and hasattr(z, "im"):
        return gmpy2.mpc(gmpy2.mpq(z.re), gmpy2.mpq(z.im))
    return gmpy2.mpc(z)


def _mp2gm(x):
    m, e = mpmath.mpf(x).man_exp
    return gmpy2.mul_2exp(gmpy2.mpfr(int(m)), int(e)) if e >= 0 else gmpy2.div_2exp(gmpy2.mpfr(int(m)), int(-e))


def _seeds(mon, n):
    """Starting points: double-precision companion eigenvalues when the
    coefficients fit in a double, otherwise the Fujiwara circle."""
    try:
        cd = np.array([complex(float(c.real), float(c.imag)) for c in mon])
        if np.all(np.isfinite(cd)) and np.all(np.abs(cd[cd != 0]) > 1e-290):
            r = np.roots(cd[::-1])
            if len(r) == n and np.all(np.isfinite(r)):
                # nudge exact coincidences apart so the Aberth sum stays finite
                r = r + 1e-9 * (1 + np.abs(r)) * np.exp(1j * (0.4 + np.arange(n)))
                return [gmpy2.mpc(complex(v)) for v in r]
    except (OverflowError, ValueError, np.linalg.LinAlgError):
        pass
    rad = _fujiwara(mon)
    two_pi = 2 * gmpy2.const_pi()
    return [rad * gmpy2.exp(gmpy2.mpc(0, two_pi * k / n + gmpy2.mpfr(0.4))) for k in range(n)]


def _aberth(c, n, prec, max_iter):
    lead = c[-1]
    mon = [ci / lead for ci in c]
    dmon = [k * mon[k] for k in range(1, n + 1)]
    z = _seeds(mon, n)
    eps = gmpy2.mpfr(2) ** (-(prec // 2))
    done = [False] * n
    for _ in range(max_iter):
        worst = gmpy2.mpfr(0)
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            p = mon[n]
            for k in range(n - 1, -1, -1):
                p = p * zi + mon[k]
            dp = dmon[n - 1]
            for k in range(n - 2, -1, -1):
                dp = dp * zi + dmon[k]
            if p == 0:
                done[i] = True
                continue
            ratio = p / dp if dp != 0 else gmpy2.mpc(eps)
            s = gmpy2.mpc(0)
            for j in range(n):
                if j != i:
                    s += 1 / (zi - z[j])
            step = ratio / (1 - ratio * s)
            z[i] = zi - step
            a = abs(ratio)
            if a < eps * max(1, abs(zi)):
                done[i] = True
            worst = max(worst, a)
        if all(done):
            return z
    raise NonConvergence("Aberth iteration cap reached; raise precision")


def poly_eval_mp(coeffs, x):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------- Newton

def newton2(F: Callable, J: Callable, start, tol=1e-12, max_iter=50):
    """Damped Newton for two real unknowns; halves the step while the
    residual max-norm fails to decrease."""
    x = np.array(start, dtype=float)
    fx = np.asarray(F(x), dtype=float)
    for _ in range(max_iter):
        r = np.max(np.abs(fx))
        if r < tol:
            return x
        jac = np.asarray(J(x), dtype=float)
        if not np.all(np.isfinite(jac)) or abs(np.linalg.det(jac)) < 1e-300:
            raise SingularJacobian(f"singular Jacobian at {x}")
        step = np.linalg.solve(jac, fx)
        lam = 1.0
        while True:
            xn = x - lam * step
            fn = np.asarray(F(xn), dtype=float)
            if np.all(np.isfinite(fn)) and np.max(np.abs(fn)) < r:
                break
            lam /= 2
            if lam < 1e-6:
                raise NonConvergence(f"damping failed at {x}, residual {r:.3g}")
        x, fx = xn, fn
    if np.max(np.abs(fx)) < tol:
        return x
    raise NonConvergence(f"Newton did not converge, residual {np.max(np.abs(fx)):.3g}")

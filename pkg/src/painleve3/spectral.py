"""Quartic spectral curve, Boutroux conditions and the solver for C(y).

P(lam) = -(y^2/4) lam^4 + (i y/2) lam^3 + C lam^2 + (i y/2) lam - y^2/4 has
roots lam0, lam1, 1/lam1, 1/lam0.  R = sqrt(P) carries two straight cuts,
[lam0, lam1] ("red") and [1/lam1, 1/lam0] ("blue"), and R ~ (i y/2) lam^2
at infinity.  Cycle a is a counterclockwise loop around the red cut,
cycle b is twice the sheet-one path from 1/lam1 to lam1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContinuationStall, DegenerateCurve, NonConvergence, OutsideDomain, PathBlocked
from .landscape import in_eye, p_outer
from .numerics import Path, adaptive_gk, newton2, segment_integral

TOL = 1e-13


def quartic_P(lam, y, C):
    return -(y * y / 4) * lam ** 4 + (0.5j * y) * lam ** 3 + C * lam ** 2 + (0.5j * y) * lam - y * y / 4


def quartic_roots(y, C):
    return np.roots([-(y * y) / 4, 0.5j * y, C, 0.5j * y, -(y * y) / 4])


def label_roots(roots, previous=None):
    """Return (lam0, lam1) from the four roots: by continuity with
    ``previous`` when given, otherwise the two roots outside the unit
    circle ordered by decreasing modulus."""
    roots = np.asarray(roots, dtype=complex)
    if previous is not None:
        l0 = roots[np.argmin(np.abs(roots - previous[0]))]
        l1 = roots[np.argmin(np.abs(roots - previous[1]))]
        if l0 != l1:
            return complex(l0), complex(l1)
    big = sorted(roots, key=lambda z: -abs(z))[:2]
    return complex(big[0]), complex(big[1])


def _sc(lam, a, b, hints=()):
    """(lam-a) sqrt((lam-b)/(lam-a)): cut on [a, b], ~ lam at infinity.
    ``hints`` supplies exact differences lam - point for nearby points."""
    da, db = _diff(lam, a, hints), _diff(lam, b, hints)
    return da * np.sqrt(db / da)


def _diff(lam, pt, hints):
    for q, off in hints:
        if q == pt:
            return off
    return lam - pt


@dataclass
class SpectralCurve:
    y: complex
    C: complex
    lam0: complex
    lam1: complex
    regime: str = "interior"
    residual: float = np.nan
    jacobian_det: float = np.nan

    @property
    def roots(self):
        return (self.lam0, self.lam1, self.inv1, self.inv0)

    @property
    def red(self):
        return (self.lam0, self.lam1)

    @property
    def blue(self):
        return (self.inv1, self.inv0)

    @property
    def inv0(self):
        return 1 / self.lam0

    @property
    def inv1(self):
        return 1 / self.lam1

    @property
    def cuts(self):
        return (Path.of(*self.red), Path.of(*self.blue))

    def R(self, lam, hints=()):
        lam = np.asarray(lam, dtype=complex)
        a, b = self.red
        c, d = self.blue
        return 0.5j * self.y * _sc(lam, a, b, hints) * _sc(lam, c, d, hints)

    def sc_plus(self, t, which):
        """Boundary value from the left of the oriented cut at parameter t
        (lam = a + t (b - a)), divided by sqrt(t (1 - t))."""
        a, b = self.red if which == "red" else self.blue
        return 1j * (b - a)

    def other_factor(self, lam, which):
        if which == "red":
            c, d = self.blue
        else:
            c, d = self.red
        return _sc(lam, c, d)

    def cut_integral(self, g, which, power=-1, tol=None):
        """int over the oriented cut of g(lam) R_+(lam)^power dlam, power = +-1,
        with the endpoint square roots cancelled analytically."""
        a, b = self.red if which == "red" else self.blue
        d = b - a
        k = 0.5j * self.y

        def h(phi):
            lam = a + d * np.sin(phi / 2) ** 2
            s = np.sin(phi)
            oth = self.other_factor(lam, which)
            if power == -1:
                return g(lam) / (k * 1j * oth)
            return g(lam) * k * 1j * d * (s / 2) * oth * (d / 2) * s

        return adaptive_gk(h, 0.0, np.pi, TOL if tol is None else tol)

    def R_plus(self, lam, which):
        """Left boundary value of R on a cut (lam must lie on it)."""
        a, b = self.red if which == "red" else self.blue
        t = (lam - a) / (b - a)
        return 0.5j * self.y * 1j * (b - a) * np.sqrt(np.real(t) * (1 - np.real(t))) * self.other_factor(lam, which)

    def clearance(self):
        pts = list(self.roots) + [0j]
        gap = min(abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1:])
        return 0.25 * gap


def R_eval(lam, curve: SpectralCurve, side: int | None = None):
    """R on sheet one; ``side`` = +1/-1 selects a boundary value when lam
    lies on a cut."""
    for which in ("red", "blue"):
        a, b = curve.red if which == "red" else curve.blue
        t = (lam - a) / (b - a)
        if abs(np.imag(t)) < 1e-14 and 0 < np.real(t) < 1:
            if side is None:
                from .errors import OnBranchCut
                raise OnBranchCut("lam on a cut; pass side=+1 or -1")
            return side * curve.R_plus(lam, which)
    return complex(curve.R(lam))


# ---------------------------------------------------------------- paths

def _seg_dist(p, a, b):
    d = b - a
    if d == 0:
        return abs(p - a)
    t = np.clip(np.real((p - a) * np.conj(d)) / abs(d) ** 2, 0, 1)
    return np.abs(a + t * d - p)


def _segment_ok(p, q, obstacles, clear, allowed):
    s = np.linspace(0, 1, 241)
    pts = p + (q - p) * s
    for kind, obj in obstacles:
        if kind == "seg":
            dist = _seg_dist(pts, obj[0], obj[1])
        else:
            dist = np.abs(pts - obj)
        need = np.full_like(dist, clear)
        for e in allowed:
            need = np.minimum(need, 0.3 * np.abs(pts - e))
        if np.any(dist < need - 1e-15):
            return False
    return True


def clear_path(a, b, curve: SpectralCurve, avoid_zero=True, side=None, clear=None):
    """Polyline a -> b that keeps clear of both cuts (and of 0 when asked).
    ``side`` = +1/-1 forces the path to pass 0 on the left/right of the
    line a->b.  Raises PathBlocked when no candidate works."""
    clear = curve.clearance() if clear is None else clear
    obstacles = [("seg", curve.red), ("seg", curve.blue)]
    if avoid_zero:
        obstacles.append(("pt", 0j))
    allowed = [z for z in curve.roots if abs(z - a) < 1e-12 or abs(z - b) < 1e-12]
    if avoid_zero and (abs(a) < 1e-14 or abs(b) < 1e-14):
        obstacles = obstacles[:2]

    def side_of_zero(nodes):
        # winding of the polyline relative to 0 compared to the chord
        ang = sum(np.angle((q - 0) / (p - 0)) for p, q in zip(nodes, nodes[1:]))
        return np.sign(ang - np.angle(b / a)) if a != 0 and b != 0 else 0

    def ok(nodes):
        if not all(_segment_ok(p, q, obstacles, clear, allowed) for p, q in zip(nodes, nodes[1:])):
            return False
        if side is not None and avoid_zero:
            ang = sum(np.angle(q / p) for p, q in zip(nodes, nodes[1:]))
            chord = np.angle(b / a)
            # ang - chord is 0 for the same side as the chord, +-2pi otherwise
            return (ang > chord - 1e-9) if side > 0 else (ang < chord + 1e-9)
        return True

    if side is None and ok([a, b]):
        return Path.of(a, b)
    L = abs(b - a)
    scale = max(L, max(abs(z) for z in curve.roots if np.isfinite(z)) * 0.2, 1e-3)
    mid = (a + b) / 2
    u = (b - a) / L if L else 1
    cands = []
    for frac in (0.25, 0.5, 0.75, 1.0, 1.5, 2.5, 4.0):
        for t in (0.5, 0.3, 0.7, 0.15, 0.85, 0.0, 1.0):
            for sgn in (1, -1):
                cands.append(a + t * (b - a) + sgn * 1j * u * frac * scale)
    for w in cands:
        if ok([a, w, b]):
            return Path.of(a, w, b)
    for w1 in cands[::3]:
        for w2 in cands[1::3]:
            if ok([a, w1, w2, b]):
                return Path.of(a, w1, w2, b)
    raise PathBlocked(f"no clearance-respecting path from {a} to {b}")


def path_integral(f, path: Path, sing_start=False, sing_end=False, tol=None, offsets=False):
    tol = TOL if tol is None else tol
    segs = path.segments()
    total = 0j
    for i, (p, q) in enumerate(segs):
        total += segment_integral(f, p, q, sing_start and i == 0, sing_end and i == len(segs) - 1, tol,
                                  offsets)
    return total


# ---------------------------------------------------------------- cycles

def a_cycle(curve: SpectralCurve, g=None, power=-1):
    """ccw loop around the red cut: -2 * int_red g R_+^power."""
    g = g or (lambda lam: np.ones_like(lam))
    return -2 * curve.cut_integral(g, "red", power)


def b_cycle(curve: SpectralCurve, f, sing=True):
    """2 * int_{1/lam1}^{lam1} f on sheet one; f is called as f(lam, hints)."""
    path = clear_path(curve.inv1, curve.lam1, curve, avoid_zero=True)
    return 2 * path_integral(f, path, sing, sing, offsets=True)


def mu(curve):
    return lambda lam, hints=(): curve.R(lam, hints) / lam ** 2


@dataclass
class BoutrouxResidual:
    Ba: float
    Bb: float


def _cycles(curve: SpectralCurve):
    Ia = a_cycle(curve, lambda lam: 1 / lam ** 2, power=1)
    Ib = b_cycle(curve, mu(curve))
    Da = a_cycle(curve)
    Db = b_cycle(curve, lambda lam, hints=(): 1 / curve.R(lam, hints))
    return Ia, Ib, Da, Db


def _curve_at(y, C, previous=None):
    r = quartic_roots(y, C)
    l0, l1 = label_roots(r, previous)
    sep = min(abs(p - q) for i, p in enumerate(r) for q in r[i + 1:])
    if sep < 1e-8:
        raise DegenerateCurve(f"roots collide at y={y}, C={C}")
    return SpectralCurve(complex(y), complex(C), l0, l1)


def boutroux_residual(y, C, previous=None) -> BoutrouxResidual:
    curve = _curve_at(y, C, previous)
    Ia, Ib, _, _ = _cycles(curve)
    return BoutrouxResidual(float(np.real(Ia)), float(np.real(Ib)))


def boutroux_jacobian(curve: SpectralCurve):
    _, _, Da, Db = _cycles(curve)
    return np.array([[0.5 * np.real(Da), -0.5 * np.imag(Da)],
                     [0.5 * np.real(Db), -0.5 * np.imag(Db)]])


def _newton_C(y, C0, previous, tol=1e-12):
    state = {"prev": previous}

    def F(v):
        curve = _curve_at(y, complex(v[0], v[1]), state["prev"])
        Ia, Ib, Da, Db = _cycles(curve)
        state["last"] = (curve, Da, Db)
        return np.array([np.real(Ia), np.real(Ib)])

    def J(v):
        curve, Da, Db = state["last"]
        if abs(curve.C - complex(v[0], v[1])) > 0:
            F(v)
            curve, Da, Db = state["last"]
        return np.array([[0.5 * np.real(Da), -0.5 * np.imag(Da)],
                         [0.5 * np.real(Db), -0.5 * np.imag(Db)]])

    v = newton2(F, J, [C0.real, C0.imag], tol=tol, max_iter=30)
    res = F(v)
    curve, Da, Db = state["last"]
    curve.residual = float(np.max(np.abs(res)))
    jac = np.array([[0.5 * np.real(Da), -0.5 * np.imag(Da)], [0.5 * np.real(Db), -0.5 * np.imag(Db)]])
    curve.jacobian_det = float(np.linalg.det(jac))
    return curve


# ---------------------------------------------------------------- small y

def _away(a, mid):
    return (a - mid) / abs(a - mid)


def _sqrt_away(lam, a, mid):
    """A branch of sqrt(lam - a) cut along the ray from a pointing away from mid."""
    u = _away(a, mid)
    return np.sqrt((lam - a) / (-u)) * np.sqrt(-u)


def J_of_Ct(Ct: float) -> float:
    """int_0^{t+} (t - Ct) / (sqrt(t) sqrt(1 + 2 Ct t - t^2)) dt.

    With t = t+ sin^2(p/2) the two endpoint square roots cancel against
    dt exactly, leaving a smooth integrand in p."""
    tp = Ct + np.sqrt(Ct * Ct + 1)
    tm = Ct - np.sqrt(Ct * Ct + 1)

    def g(p):
        t = tp * np.sin(p / 2) ** 2
        return (t - Ct) / np.sqrt(t - tm)
    return float(np.real(adaptive_gk(g, 0.0, np.pi, 1e-13)))


def small_y_conditions(theta: float, Ct: complex):
    """Real parts of int_0^{rho+-} mu0 dlam for the r -> 0 limit curve."""
    s = np.sqrt(Ct * Ct + 1)
    rp, rm = 1j * (Ct + s), 1j * (Ct - s)
    pref = np.sqrt(1j * np.exp(1j * theta))
    out = []
    for end, other in ((rp, rm), (rm, rp)):
        mid = end / 2
        phase = end / (abs(end) * np.sqrt(-_away(0j, mid)) * np.sqrt(-_away(end, mid)))

        # lam = end sin^2(p/2); sqrt-away factors at 0 and end cancel dlam
        def g(p, end=end, other=other, mid=mid, phase=phase):
            lam = end * np.sin(p / 2) ** 2
            return pref * (lam - 1j * Ct) / _sqrt_away(lam, other, mid) * phase
        out.append(adaptive_gk(g, 0.0, np.pi, 1e-13))
    return np.array([np.real(out[0]), np.real(out[1])])


_SEED_CACHE: dict = {}
C_TILDE_0 = None


def seed_theta0() -> float:
    global C_TILDE_0
    if C_TILDE_0 is None:
        from scipy.optimize import brentq
        C_TILDE_0 = brentq(J_of_Ct, 1e-3, 4.0, xtol=1e-14)
    return C_TILDE_0


def solve_smallY_seed(theta: float) -> complex:
    """C~ with C = y C~ in the r -> 0 limit, by continuation in theta from
    0 (or from pi through lam -> -lam)."""
    theta = float(np.angle(np.exp(1j * theta)))
    if abs(abs(theta) - np.pi / 2) < 1e-3:
        raise ContinuationStall("the small-y seed is singular on the imaginary axis")
    if abs(theta) > np.pi / 2:
        # y -> -y maps the curve with C~ to the one with -C~ (lam -> -lam)
        return -solve_smallY_seed(np.angle(-np.exp(1j * theta)))
    key = round(theta, 12)
    if key in _SEED_CACHE:
        return _SEED_CACHE[key]
    C = complex(seed_theta0())
    if theta == 0:
        return C
    steps = max(2, int(np.ceil(abs(theta) / 0.05)))
    for th in np.linspace(0, theta, steps + 1)[1:]:
        C = _newton_seed(th, C)
    _SEED_CACHE[key] = C
    return C


def _newton_seed(theta, C0):
    F = lambda v: small_y_conditions(theta, complex(v[0], v[1]))

    def J(v):
        h = 1e-7
        f0 = F(v)
        return np.column_stack([(F(v + [h, 0]) - f0) / h, (F(v + [0, h]) - f0) / h])

    v = newton2(F, J, [C0.real, C0.imag], tol=1e-13)
    return complex(v[0], v[1])


# ---------------------------------------------------------------- continuation

_CURVE_CACHE: dict = {}
R_START = 0.02
R_MIN = 0.005
DR = 0.01


def _ray_key(theta):
    return round(float(theta), 12)


def exterior_curve(y) -> SpectralCurve:
    p = complex(p_outer(y))
    C = -(2 * y * y - 1) / 4
    return SpectralCurve(complex(y), complex(C), 1 / p if abs(p) < 1 else p, 1 / p if abs(p) < 1 else p,
                         regime="exterior_double_double", residual=0.0)


def solve_boutroux(y, dr: float | None = None) -> SpectralCurve:
    """Solve the Boutroux conditions at y in E_R by radial continuation
    from r = min(0.02, |y|) seeded with the small-y limit."""
    dr = DR if dr is None else dr
    y = complex(y)
    if y.real <= 0:
        raise OutsideDomain("solve_boutroux works in E_R only (use the y -> -y symmetry)")
    if not in_eye(y):
        raise OutsideDomain(f"y={y} lies outside the eye")
    if abs(y) < R_MIN:
        raise OutsideDomain("|y| below the smallest radius seeded from the small-y limit")
    r, theta = abs(y), float(np.angle(y))
    key = (round(r, 14), _ray_key(theta))
    if key in _CURVE_CACHE:
        return _CURVE_CACHE[key]
    ray = _CURVE_CACHE.setdefault(("ray", _ray_key(theta)), {})
    # start from the largest cached radius not beyond r
    done = sorted(k for k in ray if k <= r + 1e-15)
    if done:
        r0 = done[-1]
        curve = ray[r0]
    else:
        Ct = solve_smallY_seed(theta)
        r0 = min(R_START, r)
        y0 = r0 * np.exp(1j * theta)
        curve = _newton_C(y0, y0 * Ct, None)
        ray[r0] = curve
    step = dr
    prev_curve, prev_prev = curve, None
    while r0 < r - 1e-15:
        r1 = min(r0 + step, r)
        y1 = r1 * np.exp(1j * theta)
        # linear prediction in C~ = C / y
        Ct_pred = prev_curve.C / prev_curve.y
        if prev_prev is not None:
            dCt = (prev_curve.C / prev_curve.y - prev_prev.C / prev_prev.y) / (abs(prev_curve.y) - abs(prev_prev.y))
            Ct_pred = Ct_pred + dCt * (r1 - r0)
        try:
            nxt = _newton_C(y1, y1 * Ct_pred, (prev_curve.lam0, prev_curve.lam1))
        except (NonConvergence, DegenerateCurve, PathBlocked, Exception) as exc:
            step /= 2
            if step < 1e-5:
                raise ContinuationStall(f"continuation stalled near y={y1}: {exc}")
            continue
        ray[r1] = nxt
        prev_prev, prev_curve, r0 = prev_curve, nxt, r1
        step = min(dr, step * 2)
    _CURVE_CACHE[key] = prev_curve
    return prev_curve

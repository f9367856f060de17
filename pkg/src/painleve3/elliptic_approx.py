"""Genus-one data on the Boutroux curve and the interior approximation
u_n(ny + w; m) ~ N Z. Zo / (P. Po) for y in the right half of the eye.

All integrals run in double precision on straight cuts (see spectral.py);
the theta function is summed directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivergentParameter, HalfIntegerM, NearDivisor, OutsideDomain, PathBlocked
from .landscape import in_eye
from .numerics import Path, adaptive_gk, segment_integral
from .spectral import SpectralCurve, a_cycle, clear_path, path_integral, solve_boutroux
from .umemura import gq
from .values import ApproxValue

TWO_PI_I = 2j * np.pi
CARVE_EPS = 0.05


# ---------------------------------------------------------------- theta

def theta(z, B, tol=1e-30):
    """sum_k exp(k z + B k^2 / 2), summed outward from the dominant term."""
    B = complex(B)
    if B.real >= 0:
        raise DivergentParameter(f"Re B = {B.real} >= 0")
    z = np.asarray(z, dtype=complex)
    # the terms peak near k = -Re z / Re B
    k0 = np.rint(-np.real(z) / B.real)
    k0 = np.asarray(k0, dtype=float)
    total = np.zeros_like(z)
    k = 0
    while True:
        ks = (k0 + k, k0 - k - 1)
        terms = [np.exp(kk * z + 0.5 * B * kk * kk) for kk in ks]
        total = total + terms[0] + terms[1]
        bound = np.max(np.abs(terms[0]) + np.abs(terms[1]))
        k += 1
        if bound <= tol * max(np.max(np.abs(total)), 1e-300) and k > 2:
            break
        if k > 400:
            break
    return total if total.ndim else complex(total)


def theta_log_scale(z, B):
    """Theta together with its dominant exponent, for arguments with large
    real part: returns (mantissa, exponent) with Theta = mantissa e^exponent."""
    B = complex(B)
    z = complex(z)
    k0 = float(np.rint(-z.real / B.real))
    shift = k0 * z + 0.5 * B * k0 * k0
    zz = z + B * k0
    return theta(zz, B), shift


# ---------------------------------------------------------------- lattice

def lattice_coords(z, B):
    """Real (alpha, beta) with z = 2 pi i alpha + B beta."""
    z, B = complex(z), complex(B)
    beta = z.real / B.real
    alpha = (z.imag - beta * B.imag) / (2 * np.pi)
    return alpha, beta


def lattice_dist(z, B):
    """Distance from z to the lattice 2 pi i Z + B Z."""
    alpha, beta = lattice_coords(z, B)
    best = np.inf
    for da in (-1, 0, 1):
        for db in (-1, 0, 1):
            a, b = np.rint(alpha) + da, np.rint(beta) + db
            best = min(best, abs(complex(z) - TWO_PI_I * a - complex(B) * b))
    return float(best)


# ---------------------------------------------------------------- log branch

def _bullet_cut(curve: SpectralCurve):
    """Polyline model of the log branch cut, running from infinity in the
    direction -pi/2 - arg y to 1/lam1, along the blue cut to 1/lam0 and
    straight into 0."""
    far = 10.0 * (max(abs(z) for z in curve.roots) + 1.0)
    start = curve.inv1 + far * np.exp(-1j * (np.pi / 2 + np.angle(curve.y)))
    return (start, curve.inv1, curve.inv0, 0j)


def _crossing(p, q, a, b):
    """Sign of the crossing of segment p->q over a->b (0 if none)."""
    d1, d2 = q - p, b - a
    den = (d1.conjugate() * d2).imag
    if den == 0:
        return 0
    w = a - p
    t = (w.conjugate() * d2).imag / den
    s = (w.conjugate() * d1).imag / den
    if 0 <= t <= 1 and 0 <= s <= 1:
        return int(np.sign((d2.conjugate() * d1).imag))
    return 0


def arg_bullet(lam, curve: SpectralCurve):
    """Argument of lam with the cut of _bullet_cut, equal to 0 on large
    positive lam when Im y >= 0 and to pi on large negative lam otherwise."""
    lam = complex(lam)
    cut = _bullet_cut(curve)
    big = 10.0 * (max(abs(z) for z in curve.roots) + 1.0)
    if curve.y.imag >= 0:
        ref, a0 = complex(big), 0.0
    else:
        ref, a0 = complex(-big), np.pi
    nodes = [ref, lam]
    # keep the probe path away from the origin
    if _seg_near_zero(ref, lam):
        nodes = [ref, ref * 1j if curve.y.imag >= 0 else -ref * 1j, lam]
        if _seg_near_zero(nodes[1], lam):
            nodes = [ref, -ref * 1j if curve.y.imag >= 0 else ref * 1j, lam]
    total = a0
    for p, q in zip(nodes, nodes[1:]):
        total += np.angle(q / p)
        for a, b in zip(cut, cut[1:]):
            total += 2 * np.pi * _crossing(p, q, a, b)
    return total


def _seg_near_zero(p, q):
    d = q - p
    t = np.clip(-(p * d.conjugate()).real / abs(d) ** 2, 0, 1)
    return abs(p + t * d) < 1e-9 * max(abs(p), abs(q))


def log_bullet(lam, curve):
    return np.log(abs(lam)) + 1j * arg_bullet(lam, curve)


def log_bullet_avg_blue(lam, curve):
    """Average of the two boundary values of log_bullet on the blue cut."""
    a, b = curve.blue
    n = 1j * (b - a) / abs(b - a)
    eps = 1e-9 * abs(b - a)
    s = arg_bullet(lam + eps * n, curve) + arg_bullet(lam - eps * n, curve)
    return np.log(abs(lam)) + 0.5j * s


# ---------------------------------------------------------------- Abel map

def _inv_R(curve):
    return lambda lam, hints=(): 1 / curve.R(lam, hints)


def _a_period(curve):
    return a_cycle(curve)


def abel_map(lam, curve: SpectralCurve, Da=None):
    """2 pi i / (loop integral of 1/R around the red cut) times the
    sheet-one integral of 1/R from lam0 to lam (lam may be "inf" or 0)."""
    Da = _a_period(curve) if Da is None else Da
    f = _inv_R(curve)
    l0 = curve.lam0
    if isinstance(lam, str):
        if lam not in ("inf", "infinity"):
            raise ValueError(lam)
        X = 2 * l0
        head = path_integral(f, Path.of(l0, X), True, False, offsets=True)

        # lam = X / u, u in (0, 1]: integrand X / (u^2 R(X/u)) is smooth at u = 0
        def tail(u):
            u = np.asarray(u, dtype=float)
            out = np.empty(u.shape, dtype=complex)
            small = u < 1e-300
            out[small] = X / (0.5j * curve.y * X * X)
            uu = u[~small]
            out[~small] = X / (uu * uu * curve.R(X / uu))
            return out
        return TWO_PI_I / Da * (head + adaptive_gk(tail, 0.0, 1.0))
    lam = complex(lam)
    if lam == l0:
        return 0j
    path = clear_path(l0, lam, curve, avoid_zero=False)
    end_sing = any(lam == z for z in curve.roots)
    return TWO_PI_I / Da * path_integral(f, path, True, end_sing, offsets=True)


# ---------------------------------------------------------------- constants

@dataclass
class EllipticData:
    y: complex
    m: complex
    A_inf: complex
    A_0: complex
    A_kappa: complex
    B: complex
    K1: float
    K2: float
    eta: complex
    nu: complex
    gamma_tilde: complex
    delta: complex
    kappa: complex
    N: complex
    Da: complex = 0j
    I_blue: complex = 0j
    K1_imag: float = 0.0
    K2_imag: float = 0.0
    kappa_flipped: bool = False
    identity_residuals: tuple = (np.nan, np.nan)
    curve: SpectralCurve | None = None


def l3_path(curve: SpectralCurve) -> Path:
    """Sheet-one path from lam1 to 1/lam0 (the arc joining the red cut to
    the root of the blue cut adjacent to the origin)."""
    return clear_path(curve.lam1, curve.inv0, curve, avoid_zero=True)


def periods(curve: SpectralCurve):
    """(Da, I_blue, B, K1, K2) with K1, K2 returned complex so the
    imaginary parts can be inspected."""
    Da = _a_period(curve)
    I_blue = curve.cut_integral(lambda lam: np.ones_like(lam), "blue", -1)
    path = l3_path(curve)
    f = _inv_R(curve)
    I3 = path_integral(f, path, True, True, offsets=True)
    B = -2 * TWO_PI_I / Da * I3
    Ia = a_cycle(curve, lambda lam: 1 / lam ** 2, power=1)
    K1 = 1j * Ia
    mu = lambda lam, hints=(): curve.R(lam, hints) / lam ** 2
    K2 = -2j * path_integral(mu, path, True, True, offsets=True)
    return Da, I_blue, B, K1, K2


def _gamma_tilde(curve, m, I_blue):
    f = _inv_R(curve)
    L0 = path_integral(f, Path.of(curve.inv0, 0j), True, False, offsets=True)
    red = curve.cut_integral(np.vectorize(lambda lam: log_bullet(lam, curve), otypes=[complex]), "red", -1)
    blue = curve.cut_integral(np.vectorize(lambda lam: log_bullet_avg_blue(lam, curve), otypes=[complex]),
                              "blue", -1)
    return (TWO_PI_I * (m + 0.5) * L0 + (m + 1) * (red + blue)) / I_blue


def _as_complex_m(m):
    if isinstance(m, (int, float, complex)):
        return complex(m)
    return complex(gq(m))


def is_half_integer(m, tol=1e-14):
    m = _as_complex_m(m)
    return abs(m.imag) < tol and abs((m.real - 0.5) - np.rint(m.real - 0.5)) < tol


def elliptic_data(curve: SpectralCurve, m) -> EllipticData:
    m = _as_complex_m(m)
    if is_half_integer(m):
        raise HalfIntegerM("delta is undefined for half-integer m")
    Da, I_blue, B, K1, K2 = periods(curve)
    A_inf = abel_map("inf", curve, Da)
    A_0 = abel_map(0j, curve, Da)
    l0, l1 = curve.lam0, curve.lam1
    kappa = (l0 + l1) / (1 + l0 * l1)
    A_k = abel_map(kappa, curve, Da)
    r1 = lattice_dist(2 * A_inf + 2 * A_k + B, B)
    flipped = False
    if r1 > 1e-6:
        r1b = lattice_dist(2 * A_inf - 2 * A_k + B, B)
        if r1b < r1:
            A_k, r1, flipped = -A_k, r1b, True
    r2 = lattice_dist(2 * A_0 - 2 * A_k - TWO_PI_I, B)
    K1r, K2r = K1.real, K2.real
    eta = -1j * K2r + K1r * B / (2 * np.pi)
    nu = 4 * np.pi / (curve.y * I_blue)
    gt = _gamma_tilde(curve, m, I_blue)
    delta = np.log(complex(-2 * np.cos(np.pi * m))) + gt
    sh = 1j * np.pi + B / 2
    N = (1j / kappa) * theta(A_0 + A_k + sh, B) * theta(A_0 - A_k - sh, B) / (
        theta(A_inf + A_k + sh, B) * theta(A_inf - A_k - sh, B))
    return EllipticData(curve.y, m, A_inf, A_0, A_k, B, K1r, K2r, eta, nu, gt, delta, kappa, N, Da, I_blue,
                        float(K1.imag), float(K2.imag), flipped, (r1, r2), curve)


@lru_cache(maxsize=512)
def _data_cached(y: complex, m: complex) -> EllipticData:
    return elliptic_data(solve_boutroux(y), m)


def data_at(y, m) -> EllipticData:
    return _data_cached(complex(y), _as_complex_m(m))


# ---------------------------------------------------------------- u-dot

def phases(d: EllipticData, n, w):
    """s_n and the four divisor phases (z., zo, p., po) whose lattice
    membership marks a zero or singularity of u-dot."""
    s = -d.delta - 1j * w * d.nu - n * d.eta
    zo = d.A_inf + d.A_kappa - s
    zb = d.A_inf - d.A_kappa + s
    pb = d.A_0 + d.A_kappa - s
    po = d.A_0 - d.A_kappa + s
    return s, (zb, zo, pb, po)


def udot_from_data(d: EllipticData, n, w):
    s, (zb, zo, pb, po) = phases(d, n, w)
    sh = 1j * np.pi + d.B / 2
    # the four theta factors share the scale of exp(-k s); take logs to avoid overflow
    vals = []
    for z, sign in ((zb, -1), (zo, +1), (pb, +1), (po, -1)):
        mant, ex = theta_log_scale(z + sign * sh, d.B)
        vals.append((mant, ex))
    num = vals[0][0] * vals[1][0]
    den = vals[2][0] * vals[3][0]
    ex = vals[0][1] + vals[1][1] - vals[2][1] - vals[3][1]
    value = d.N * num / den * np.exp(ex)
    carve = min(lattice_dist(z, d.B) for z in (zb, zo, pb, po))
    return complex(value), carve


def udot_elliptic(n: int, y, w=0j, m=0, eps: float = CARVE_EPS, strict: bool = False) -> ApproxValue:
    """Interior approximation of u_n(n y + w; m).  For Re y < 0 uses
    u_n(n y + w; m) = 1 / u_n(-(n y + w); -m)."""
    y, w = complex(y), complex(w)
    m = _as_complex_m(m)
    if not in_eye(y) or y.real == 0:
        raise OutsideDomain(f"y={y} is not in the open left or right half of the eye")
    if y.real < 0:
        inner = udot_elliptic(n, -y, -w, -m, eps, strict)
        return ApproxValue(1 / inner.value, "elliptic", inner.carveout, inner.flagged)
    d = data_at(y, m)
    value, carve = udot_from_data(d, n, w)
    flagged = carve < eps
    if flagged and strict:
        raise NearDivisor(f"carve-out distance {carve:.3g} < {eps}")
    return ApproxValue(value, "elliptic", carve, flagged)


def ode_residual_w(n, y, w, m, h=1e-5, C=None):
    """|(dp/dw)^2 - (16/y^2) P(p; y, C)| for p = -i u-dot, by central
    differences in w."""
    from .spectral import quartic_P
    d = data_at(y, m)
    y = complex(y)
    _, carve = udot_from_data(d, n, w)
    if carve < 10 * h * abs(d.nu):
        raise NearDivisor("w too close to a zero or singularity for the stencil")
    pm = -1j * udot_from_data(d, n, w - h)[0]
    pp = -1j * udot_from_data(d, n, w + h)[0]
    p0 = -1j * udot_from_data(d, n, w)[0]
    dp = (pp - pm) / (2 * h)
    C = d.curve.C if C is None else C
    return float(abs(dp * dp - 16 / y ** 2 * quartic_P(p0, y, C)))


@dataclass(frozen=True)
class QuantIndices:
    alpha0_pm: tuple
    beta0_pm: tuple
    alphaInf_pm: tuple
    betaInf_pm: tuple


def quantization_indices(n, y, w=0j, m=0) -> QuantIndices:
    """Real coordinates along (2 pi i, B) of A(inf) +- A(kappa) -+ s_n and
    A(0) +- A(kappa) -+ s_n."""
    d = data_at(y, m)
    s, _ = phases(d, n, w)
    out = {}
    for name, base in (("0", d.A_inf), ("inf", d.A_0)):
        al, be = [], []
        for sg in (+1, -1):
            a, b = lattice_coords(base + sg * d.A_kappa - sg * s, d.B)
            al.append(a)
            be.append(b)
        out[name] = (tuple(al), tuple(be))
    return QuantIndices(out["0"][0], out["0"][1], out["inf"][0], out["inf"][1])

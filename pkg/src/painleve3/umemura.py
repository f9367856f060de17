"""Exact Umemura polynomials s_n(x;m) and the rational solutions u_n(x;m).

Polynomials live over the Gaussian rationals as a pair of flint
``fmpq_poly`` (real part, imaginary part), so the recurrence

    s_{n+1} = [(4x+2m+1) s_n^2 - s_n s_n' - x (s_n s_n'' - s_n'^2)] / (2 s_{n-1})

is carried out without rounding and its division is checked to be exact.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint
import mpmath

from .errors import InexactDivision, PoleAt
from .numerics import ROOT_PREC, find_roots_poly

GUARD_BITS = 320


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, o):
        o = gq(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-gq(o))

    def __mul__(self, o):
        o = gq(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_mp(self):
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)

    @property
    def is_real(self):
        return self.im == 0

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i"


def gq(v) -> GaussianRational:
    """Coerce ints, Fractions, GaussianRationals or strings such as
    '1/4', '-3/2', 'i/5', '1-2i', '4i/5' to a GaussianRational."""
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, (int, Fraction)):
        return GaussianRational(Fraction(v))
    if isinstance(v, float):
        return GaussianRational(Fraction(v).limit_denominator(10**12))
    if isinstance(v, complex):
        return GaussianRational(Fraction(v.real).limit_denominator(10**12),
                                Fraction(v.imag).limit_denominator(10**12))
    if isinstance(v, str):
        s = v.replace(" ", "")
        if "i" not in s:
            return GaussianRational(Fraction(s))
        if s[0] not in "+-":
            s = "+" + s
        # split at the last sign that starts the imaginary term
        k = max(i for i, ch in enumerate(s) if ch in "+-" and (i == 0 or s[i - 1] != "/"))
        real_part, imag_part = s[:k], s[k:]
        if "i" not in imag_part:
            raise ValueError(f"cannot parse {v!r}")
        sign = -1 if imag_part[0] == "-" else 1
        body = imag_part[1:]
        num, _, den = body.partition("/")
        num = num.replace("*", "").replace("i", "")
        den = den.replace("*", "").replace("i", "")
        val = Fraction(num or "1")
        if den:
            val /= Fraction(den)
        return GaussianRational(Fraction(real_part) if real_part not in ("", "+") else Fraction(0), sign * val)
    raise TypeError(f"cannot coerce {type(v)} to GaussianRational")


class ExactPolynomial:
    """Polynomial with Gaussian-rational coefficients, stored as re + i*im."""

    __slots__ = ("re", "im", "_mp_cache")

    def __init__(self, re_part, im_part=None):
        self.re = flint.fmpq_poly(re_part)
        self.im = flint.fmpq_poly(im_part if im_part is not None else 0)
        self._mp_cache = {}

    @classmethod
    def const(cls, c: GaussianRational):
        c = gq(c)
        return cls(flint.fmpq_poly([flint.fmpq(c.re.numerator, c.re.denominator)]),
                   flint.fmpq_poly([flint.fmpq(c.im.numerator, c.im.denominator)]))

    @classmethod
    def x(cls):
        return cls(flint.fmpq_poly([0, 1]))

    def __add__(self, o):
        return ExactPolynomial(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return ExactPolynomial(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        if self.im == 0 and o.im == 0:
            return ExactPolynomial(self.re * o.re)
        return ExactPolynomial(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def scale(self, c: GaussianRational):
        return self * ExactPolynomial.const(c)

    def derivative(self):
        return ExactPolynomial(self.re.derivative(), self.im.derivative())

    def __eq__(self, o):
        return isinstance(o, ExactPolynomial) and self.re == o.re and self.im == o.im

    def is_zero(self):
        return self.re == 0 and self.im == 0

    @property
    def degree(self) -> int:
        return max(self.re.degree(), self.im.degree())

    def divexact(self, d: "ExactPolynomial") -> "ExactPolynomial":
        """Exact quotient; raises InexactDivision on a nonzero remainder."""
        if d.im == 0:
            qr, rr = divmod(self.re, d.re)
            qi, ri = divmod(self.im, d.re)
            if rr != 0 or ri != 0:
                raise InexactDivision("nonzero remainder in the recurrence")
            return ExactPolynomial(qr, qi)
        norm = d.re * d.re + d.im * d.im
        num = self * ExactPolynomial(d.re, -d.im)
        qr, rr = divmod(num.re, norm)
        qi, ri = divmod(num.im, norm)
        if rr != 0 or ri != 0:
            raise InexactDivision("nonzero remainder in the recurrence")
        return ExactPolynomial(qr, qi)

    def coeffs(self) -> list[GaussianRational]:
        n = self.degree + 1
        rc, ic = self.re.coeffs(), self.im.coeffs()
        rc += [0] * (n - len(rc))
        ic += [0] * (n - len(ic))
        return [GaussianRational(Fraction(int(a.p), int(a.q)) if a != 0 else 0,
                                 Fraction(int(b.p), int(b.q)) if b != 0 else 0)
                for a, b in zip(map(flint.fmpq, rc), map(flint.fmpq, ic))]

    def mp_coeffs(self):
        prec = mpmath.mp.prec
        c = self._mp_cache.get(prec)
        if c is None:
            c = [g.to_mp() for g in self.coeffs()]
            self._mp_cache[prec] = c
        return c

    def eval_derivs(self, x, k=0):
        """(p(x), p'(x), ..., p^(k)(x)) by Horner at the ambient mp precision."""
        c = self.mp_coeffs()
        out = [mpmath.mpc(0)] * (k + 1)
        for a in reversed(c):
            for j in range(k, 0, -1):
                out[j] = out[j] * x + out[j - 1]
            out[0] = out[0] * x + a
        fact = 1
        for j in range(2, k + 1):
            fact *= j
            out[j] *= fact
        return out

    def __call__(self, x):
        return self.eval_derivs(x, 0)[0]

    def __repr__(self):
        return f"ExactPolynomial(re={self.re}, im={self.im})"


_SEQ_CACHE: dict = {}


def build_sequence(n_max: int, m) -> list[ExactPolynomial]:
    """[s_{-1}, s_0, ..., s_{n_max}] for parameter m (exact)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    m = gq(m)
    seq = _SEQ_CACHE.setdefault(m, [ExactPolynomial.const(1), ExactPolynomial.const(1)])
    X = ExactPolynomial.x()
    lin = ExactPolynomial(flint.fmpq_poly([0, 4])) + ExactPolynomial.const(2 * m + 1)
    two = ExactPolynomial.const(2)
    while len(seq) < n_max + 2:
        s, sm1 = seq[-1], seq[-2]
        d1 = s.derivative()
        d2 = d1.derivative()
        num = lin * s * s - s * d1 - X * (s * d2 - d1 * d1)
        seq.append(num.divexact(two * sm1))
    return seq[: n_max + 2]


def s_poly(n: int, m) -> ExactPolynomial:
    if n < -1:
        raise ValueError("s_n defined for n >= -1")
    return build_sequence(max(n, 0), m)[n + 1]


def factors(n: int, m):
    """The four polynomials (s_n(m-1), s_{n-1}(m), s_n(m), s_{n-1}(m-1)):
    zero-filled, zero-open, pole-filled, pole-open (n >= 1)."""
    m = gq(m)
    m1 = m - 1
    return s_poly(n, m1), s_poly(n - 1, m), s_poly(n, m), s_poly(n - 1, m1)


def eval_un(x, n: int, m, prec: int = 256):
    """u_n(x;m) at an mpmath point, evaluated with guard bits."""
    if n == 0:
        return mpmath.mpc(1)
    if n < 0:
        return 1 / eval_un(x, -n, m, prec)
    f1, f2, f3, f4 = factors(n, m)
    with mpmath.workprec(prec + GUARD_BITS):
        x = mpmath.mpc(x)
        num = f1(x) * f2(x)
        den = f3(x) * f4(x)
        if den == 0 or abs(den) < mpmath.mpf(2) ** (-prec) * max(1, abs(num)):
            raise PoleAt(x)
        val = num / den
    with mpmath.workprec(prec):
        return +val


def piii_residual(n: int, m, x, prec: int = 256):
    """LHS - RHS of the Painleve-III equation at x, via logarithmic
    derivatives of the four factors (no finite differences)."""
    m = gq(m)
    with mpmath.workprec(prec + GUARD_BITS):
        x = mpmath.mpc(x)
        mm = m.to_mp()
        theta0 = n + mm
        theta_inf = mm - n + 1
        if n == 0:
            u, L, M = mpmath.mpc(1), mpmath.mpc(0), mpmath.mpc(0)
        else:
            nn = abs(n)
            sgn = (1, 1, -1, -1) if n > 0 else (-1, -1, 1, 1)
            u = mpmath.mpc(1)
            L = M = mpmath.mpc(0)
            for s, f in zip(sgn, factors(nn, m)):
                p0, p1, p2 = f.eval_derivs(x, 2)
                if p0 == 0:
                    raise PoleAt(x)
                r = p1 / p0
                u = u * p0 if s > 0 else u / p0
                L += s * r
                M += s * (p2 / p0 - r * r)
        res = u * M + u * L / x - (4 * theta0 * u * u + 4 * (1 - theta_inf)) / x - 4 * u ** 3 + 4 / u
    with mpmath.workprec(prec):
        return +res


@dataclass
class RationalSolution:
    n: int
    m: GaussianRational
    s_n_mMinus1: ExactPolynomial
    s_nm1_m: ExactPolynomial
    s_n_m: ExactPolynomial
    s_nm1_mMinus1: ExactPolynomial
    zero_roots_filled: list = field(default_factory=list)
    zero_roots_open: list = field(default_factory=list)
    pole_roots_filled: list = field(default_factory=list)
    pole_roots_open: list = field(default_factory=list)

    def zeros(self):
        return self.zero_roots_filled + self.zero_roots_open

    def poles(self):
        return self.pole_roots_filled + self.pole_roots_open

    def by_class(self):
        return {"zero_filled": self.zero_roots_filled, "zero_open": self.zero_roots_open,
                "pole_filled": self.pole_roots_filled, "pole_open": self.pole_roots_open}


def _poly_roots(p: ExactPolynomial, prec: int):
    if p.degree < 1:
        return []
    return find_roots_poly(p.coeffs(), prec)


@lru_cache(maxsize=128)
def classified_roots(n: int, m, prec: int = ROOT_PREC) -> RationalSolution:
    if n < 1:
        raise ValueError("classified_roots needs n >= 1")
    m = gq(m)
    f = factors(n, m)
    sol = RationalSolution(n, m, *f)
    sol.zero_roots_filled = _poly_roots(f[0], prec)
    sol.zero_roots_open = _poly_roots(f[1], prec)
    sol.pole_roots_filled = _poly_roots(f[2], prec)
    sol.pole_roots_open = _poly_roots(f[3], prec)
    return sol


def write_roots_csv(sol: RationalSolution, fh, digits: int = 25):
    w = csv.writer(fh)
    w.writerow(["n", "m_re", "m_im", "class", "re", "im"])
    for cls, roots in sol.by_class().items():
        for r in roots:
            w.writerow([sol.n, str(sol.m.re), str(sol.m.im), cls,
                        mpmath.nstr(r.real, digits), mpmath.nstr(r.imag, digits)])

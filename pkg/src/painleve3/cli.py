"""Command-line front end.  Exit codes: 0 ok, 2 usage error, 3 numeric failure."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import mpmath
import numpy as np

from . import spectral
from .errors import OutsideDomain, Painleve3Error, PoleAt
from .landscape import TubeParams, dist_to_eye, in_eye, trace_eye_boundary
from .numerics import working_prec

DIGITS = 25


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    quad_tol: float = 1e-13
    dr: float = 0.01
    eps: float = 0.05
    delta1: float = 0.2
    delta2: float = 0.3
    fmt: str = "csv"

    def __post_init__(self):
        for name in ("precision_bits", "quad_tol", "dr", "eps", "delta1", "delta2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")

    def apply(self):
        spectral.TOL = self.quad_tol
        spectral.DR = self.dr


def num(x) -> str:
    x = float(x)
    return mpmath.nstr(mpmath.mpf(x), DIGITS) if np.isfinite(x) else str(x)


def cnum(z):
    z = complex(z)
    return num(z.real), num(z.imag)


def parse_complex(s: str) -> complex:
    return complex(s.replace(" ", "").replace("i", "j"))


def _floats(s: str, k: int):
    parts = [float(v) for v in s.split(",")]
    if len(parts) != k:
        raise argparse.ArgumentTypeError(f"expected {k} comma-separated numbers, got {s!r}")
    return parts


def _emit_json(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_csv(header, rows, out):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if out:
            fh.close()


def _emit_table(cfg, header, rows, out):
    if cfg.fmt == "json":
        _emit_json([dict(zip(header, r)) for r in rows], out)
    else:
        _emit_csv(header, rows, out)


# ---------------------------------------------------------------- commands

def cmd_umemura(a, cfg):
    from .umemura import s_poly
    p = s_poly(a.n, a.m)
    rows = [[k, str(c.re), str(c.im)] for k, c in enumerate(p.coeffs())]
    _emit_table(cfg, ["power", "re", "im"], rows, a.out)


def cmd_roots(a, cfg):
    from .umemura import classified_roots
    sol = classified_roots(a.n, a.m)
    rows = [[sol.n, str(sol.m.re), str(sol.m.im), cls, mpmath.nstr(r.real, DIGITS), mpmath.nstr(r.imag, DIGITS)]
            for cls, roots in sol.by_class().items() for r in roots]
    _emit_table(cfg, ["n", "m_re", "m_im", "class", "re", "im"], rows, a.out)


def cmd_eval(a, cfg):
    from .umemura import eval_un
    v = eval_un(mpmath.mpc(parse_complex(a.x)), a.n, a.m, prec=cfg.precision_bits)
    _emit_json({"n": str(a.n), "m": a.m, "x": a.x,
                "re": mpmath.nstr(v.real, DIGITS), "im": mpmath.nstr(v.imag, DIGITS)}, a.out)


def cmd_eye(a, cfg):
    g = trace_eye_boundary(a.samples)
    rows = []
    for th, r in zip(g.theta, g.r):
        z = r * np.exp(1j * th)
        rows.append([num(th), num(r), *cnum(z)])
    for th, r in zip(g.theta, g.r):
        z = -r * np.exp(1j * th)
        rows.append([num(np.angle(z)), num(r), *cnum(z)])
    _emit_table(cfg, ["theta", "r", "re_y", "im_y"], rows, a.out)


def cmd_boutroux(a, cfg):
    from .spectral import boutroux_jacobian, boutroux_residual, exterior_curve, solve_boutroux
    y = parse_complex(a.y)
    if not in_eye(y):
        c = exterior_curve(y)
        res, det = 0.0, float("nan")
    elif y.real > 0:
        c = solve_boutroux(y)
        r = boutroux_residual(c.y, c.C, (c.lam0, c.lam1))
        res, det = max(abs(r.Ba), abs(r.Bb)), float(np.linalg.det(boutroux_jacobian(c)))
    else:
        raise OutsideDomain("boutroux solves in the right half of the eye; use y -> -y")
    _emit_json({"y": a.y, "regime": c.regime, "C": list(cnum(c.C)), "lam0": list(cnum(c.lam0)),
                "lam1": list(cnum(c.lam1)), "residual": num(res), "jacobian_det": num(det)}, a.out)


def cmd_approx_outer(a, cfg):
    from .outer_approx import udot_outer
    v = udot_outer(parse_complex(a.y), a.j, a.n)
    _emit_json({"value": list(cnum(v)), "regime": "outer"}, a.out)


def _approx_json(v):
    return {"value": list(cnum(v.value)), "regime": v.regime, "carveout": num(v.carveout),
            "flagged": str(bool(v.flagged)).lower()}


def cmd_approx_elliptic(a, cfg):
    from .elliptic_approx import udot_elliptic
    v = udot_elliptic(a.n, parse_complex(a.y), parse_complex(a.w), parse_complex(a.m), cfg.eps)
    _emit_json(_approx_json(v), a.out)


def cmd_approx_halfint(a, cfg):
    from .halfint_approx import udot_halfint
    m = a.sign * (a.k + 0.5)
    v = udot_halfint(a.n, parse_complex(a.y), m, cfg.eps, TubeParams(cfg.delta1, cfg.delta2), a.partition)
    _emit_json(_approx_json(v), a.out)


def cmd_eyebrow_curves(a, cfg):
    from .halfint_approx import eyebrow_curves
    rows = []
    for c in eyebrow_curves(a.n, a.k, a.rays, cfg.delta1):
        for z in c.path.nodes:
            rows.append([c.index, c.kind, *cnum(z)])
    _emit_table(cfg, ["curve_id", "type", "re_y", "im_y"], rows, a.out)


def cmd_density(a, cfg):
    from .density import rho, rho_contour
    x0, x1, y0, y1, nx, ny = a.grid
    f = rho_contour if a.method == "contour" else rho
    rows = []
    for xv in np.linspace(x0, x1, int(nx)):
        for yv in np.linspace(y0, y1, int(ny)):
            z = complex(xv, yv)
            try:
                v = f(z).rho if z.real > 0 and in_eye(z) else float("nan")
            except Painleve3Error:
                v = float("nan")
            rows.append([*cnum(z), num(v)])
    _emit_table(cfg, ["re_y", "im_y", "rho"], rows, a.out)


def cmd_count(a, cfg):
    from .density import count_vs_integral
    x0, x1, y0, y1 = a.rect
    r = count_vs_integral(a.n, a.m, ((x0, x1), (y0, y1)), a.grid, a.method)
    _emit_json({"expected": num(r["expected"]), "observed_zeros": str(r["observed_zeros"]),
                "observed_poles": str(r["observed_poles"])}, a.out)


def approximate(n, y, m: complex, cfg: RunConfig):
    """Pick the approximation that applies at y: the layered formulas for
    half-integer m, the equilibrium outside the eye, the elliptic one inside."""
    from .elliptic_approx import is_half_integer, udot_elliptic
    from .halfint_approx import udot_halfint
    from .outer_approx import udot_outer
    from .values import ApproxValue
    if is_half_integer(m):
        return udot_halfint(n, y, m, cfg.eps, TubeParams(cfg.delta1, cfg.delta2))
    if not in_eye(y):
        # outer error behaves like 1 / (n dist), so n dist plays the carve-out role
        return ApproxValue(udot_outer(y, 0, n), "outer", n * dist_to_eye(y))
    return udot_elliptic(n, y, 0j, m, cfg.eps)


def cmd_compare(a, cfg):
    from .umemura import eval_un, gq
    from .values import ApproxValue
    y0, y1 = (parse_complex(v) for v in a.segment.split(","))
    m = complex(gq(a.m))
    rows = []
    for t in (np.arange(a.samples) + 0.5) / a.samples:
        y = y0 + (y1 - y0) * t
        try:
            ex = complex(eval_un(mpmath.mpc(a.n * y), a.n, a.m, prec=cfg.precision_bits))
        except PoleAt:
            ex = complex(np.inf, 0)
        try:
            ap = approximate(a.n, y, m, cfg)
        except Painleve3Error as e:
            ap = ApproxValue(complex(np.nan, np.nan), f"unavailable:{type(e).__name__}", 0.0, True)
        err = abs(ap.value - ex)
        rel = err / abs(ex) if ex != 0 else float("inf")
        rows.append([*cnum(y), *cnum(ex), *cnum(ap.value), ap.regime, num(ap.carveout), num(err), num(rel)])
    _emit_table(cfg, ["re_y", "im_y", "exact_re", "exact_im", "approx_re", "approx_im", "regime", "carveout",
                      "abs_error", "rel_error"], rows, a.out)


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    def common(default):
        g = _Parser(add_help=False)
        d = (lambda v: v) if default else (lambda v: argparse.SUPPRESS)
        g.add_argument("--precision", type=int, default=d(None), help="working precision in bits")
        g.add_argument("--tol", type=float, default=d(1e-13), help="double-precision quadrature tolerance")
        g.add_argument("--dr", type=float, default=d(0.01), help="radial continuation step")
        g.add_argument("--eps", type=float, default=d(0.05), help="carve-out radius")
        g.add_argument("--delta1", type=float, default=d(0.2))
        g.add_argument("--delta2", type=float, default=d(0.3))
        g.add_argument("--format", choices=("csv", "json"), default=d("csv"))
        return g

    p = _Parser(prog="painleve3", description=__doc__, parents=[common(True)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    shared = common(False)

    def add(name, fn, **kw):
        s = sub.add_parser(name, parents=[shared], **kw)
        s.set_defaults(fn=fn)
        s.add_argument("--out", default=None)
        return s

    s = add("umemura", cmd_umemura)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", default="0")
    s = add("roots", cmd_roots)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", default="0")
    s = add("eval", cmd_eval)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", default="0")
    s.add_argument("--x", required=True)
    s = add("eye", cmd_eye)
    s.add_argument("--samples", type=int, default=400)
    s = add("boutroux", cmd_boutroux)
    s.add_argument("--y", required=True)
    s = add("approx-outer", cmd_approx_outer)
    s.add_argument("--y", required=True)
    s.add_argument("--j", type=int, default=0)
    s.add_argument("--n", type=int, default=1)
    s = add("approx-elliptic", cmd_approx_elliptic)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--w", default="0")
    s.add_argument("--m", default="0")
    s = add("approx-halfint", cmd_approx_halfint)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--sign", type=int, choices=(-1, 1), default=-1)
    s.add_argument("--y", required=True)
    s.add_argument("--partition", choices=("theorem", "balanced"), default="theorem")
    s = add("eyebrow-curves", cmd_eyebrow_curves)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--rays", type=int, default=61)
    s = add("density", cmd_density)
    s.add_argument("--grid", type=lambda v: _floats(v, 6), required=True, help="x0,x1,y0,y1,nx,ny")
    s.add_argument("--method", choices=("fd", "contour"), default="fd")
    s = add("count", cmd_count)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", default="0")
    s.add_argument("--rect", type=lambda v: _floats(v, 4), required=True, help="x0,x1,y0,y1")
    s.add_argument("--grid", type=int, default=16)
    s.add_argument("--method", choices=("fd", "contour"), default="contour")
    s = add("compare", cmd_compare)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", default="0")
    s.add_argument("--segment", required=True, help="y0,y1 (complex allowed, e.g. 0.1+0.2i)")
    s.add_argument("--samples", type=int, default=200)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        cfg = RunConfig(a.precision or working_prec(), a.tol, a.dr, a.eps, a.delta1, a.delta2, a.format)
    except ValueError as e:
        print(f"painleve3: error: {e}", file=sys.stderr)
        return 2
    cfg.apply()
    try:
        a.fn(a, cfg)
    except Painleve3Error as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as e:
        print(f"painleve3: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

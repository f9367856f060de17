"""Phase V(lambda;y), the equilibrium branches p(y), and the eye E.

Everything here is double precision: the eye is a level set of a
branch-free harmonic function and only needs ~1e-10 accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import BracketFailure, OnBranchCut
from .numerics import Path

OUTER, BLUE, RED = "outer", "blue_continuation", "red_continuation"


@dataclass(frozen=True)
class PhaseContext:
    y: complex
    log_branch_anchor: str = "principal"


@dataclass(frozen=True)
class TubeParams:
    delta1: float = 0.2
    delta2: float = 0.08


def V_eval(lam, ctx_or_y, log=None):
    """-log(lam) - i y (lam - 1/lam); ``log`` overrides the principal log."""
    y = ctx_or_y.y if isinstance(ctx_or_y, PhaseContext) else ctx_or_y
    lg = np.log(lam) if log is None else log(lam)
    return -lg - 1j * y * (lam - 1 / lam)


def re_V(lam, y):
    return -np.log(np.abs(lam)) + np.imag(y * (lam - 1 / lam))


def p_outer(y):
    """Branch of p + 1/p = i/y analytic off the segment [-i/2, i/2],
    tending to -i at infinity."""
    y = np.asarray(y, dtype=complex)
    return 1j / (2 * y) - 1j * np.sqrt(1 + 1 / (4 * y * y))


def eye_function(y):
    """Re V(p(y); y): positive inside E_R, zero on the right eyebrow."""
    p = p_outer(y)
    return re_V(p, y)


def in_eye(y) -> bool:
    y = complex(y)
    if y == 0:
        return True
    if y.real == 0:
        return abs(y.imag) < 0.5
    if y.real > 0:
        return bool(eye_function(y) > 0)
    return bool(eye_function(-y) > 0)


def p_branch(y, tag: str = OUTER):
    y = complex(y)
    if tag == OUTER:
        if y.real == 0 and abs(y.imag) <= 0.5:
            raise OnBranchCut(f"y={y} lies on the cut of the outer branch")
        return complex(p_outer(y))
    if tag == BLUE:
        if y == 0:
            return 0j
        if y.real > 0 or abs(y.imag) > 0.5 or in_eye(y):
            return complex(1j / (2 * y) - (1j / y) * np.sqrt(y - 0.5j) * np.sqrt(y + 0.5j))
        return complex(p_outer(y))
    if tag == RED:
        if y == 0:
            raise OnBranchCut("the red branch has a pole at the origin")
        if y.real < 0 or abs(y.imag) > 0.5 or in_eye(y):
            return complex(1j / (2 * y) + (1j / y) * np.sqrt(-(y - 0.5j)) * np.sqrt(-(y + 0.5j)))
        return complex(p_outer(y))
    raise ValueError(f"unknown branch tag {tag!r}")


@dataclass(frozen=True)
class EyeGeometry:
    theta: np.ndarray
    r: np.ndarray
    right_eyebrow: Path
    left_eyebrow: Path
    corners: tuple = (0.5j, -0.5j)
    real_halfwidth: float = 0.0

    def radius_at(self, theta: float) -> float:
        return eyebrow_radius(theta)


def eyebrow_radius(theta: float, tol: float = 1e-13) -> float:
    """Radius of the right eyebrow along the ray arg y = theta."""
    f = lambda r: float(eye_function(r * np.exp(1j * theta)))
    lo, hi = 0.05, 0.6
    if not (f(lo) > 0 > f(hi)):
        raise BracketFailure(f"no sign change on ray theta={theta}")
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


@lru_cache(maxsize=8)
def trace_eye_boundary(samples: int = 400) -> EyeGeometry:
    if samples < 16:
        raise ValueError("need at least 16 samples")
    th = -np.pi / 2 + np.pi * (np.arange(samples) + 0.5) / samples
    r = np.array([eyebrow_radius(t) for t in th])
    pts = r * np.exp(1j * th)
    right = (-0.5j,) + tuple(complex(z) for z in pts) + (0.5j,)
    left = tuple(-z for z in right)
    return EyeGeometry(th, r, Path(right), Path(left), (0.5j, -0.5j), eyebrow_radius(0.0))


def left_eyebrow_radius(arg: float) -> float:
    """Radius of the left eyebrow along arg y = arg (|arg| > pi/2)."""
    return eyebrow_radius(np.angle(-np.exp(1j * arg)))


def dist_to_eye(y, geom: EyeGeometry | None = None) -> float:
    """Euclidean distance from y to E (0 inside)."""
    if in_eye(y):
        return 0.0
    geom = geom or trace_eye_boundary()
    best = np.inf
    for path in (geom.right_eyebrow, geom.left_eyebrow):
        z = np.array(path.nodes)
        a, b = z[:-1], z[1:]
        d = b - a
        t = np.clip(np.real((y - a) * np.conj(d)) / np.abs(d) ** 2, 0, 1)
        best = min(best, float(np.min(np.abs(a + t * d - y))))
    return best


def in_tube(y, params: TubeParams = TubeParams()):
    """(membership in the tube about the right eyebrow, layer coordinate
    c = Re V(p(y)^{-1}; y) = -Re V(p(y); y))."""
    y = complex(y)
    c = -float(eye_function(y))
    inside = abs(np.angle(y)) <= np.pi / 2 - params.delta1 and abs(c) <= params.delta2
    return bool(inside), c

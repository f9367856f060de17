"""Equilibrium approximation u_n(n y) ~ i p(y) outside the eye, with
derivatives transferred by Cauchy's formula on a small circle."""
from __future__ import annotations

import math

import numpy as np

from .errors import TooCloseToEye
from .landscape import dist_to_eye, p_outer

NODES = 64


def cauchy_derivative(f, y, j: int, radius: float, nodes: int = NODES):
    """j-th derivative of an analytic f at y by the trapezoid rule on a circle."""
    t = 2 * np.pi * np.arange(nodes) / nodes
    z = radius * np.exp(1j * t)
    vals = np.array([f(y + zz) for zz in z])
    return complex(math.factorial(j) * np.mean(vals * z ** (-j)))


def udot_outer(y, j: int = 0, n: int = 1) -> complex:
    """i p(y) for j = 0; for j >= 1 the x-derivative u_n^{(j)}(n y)
    approximated by i n^{-j} p^{(j)}(y)."""
    y = complex(y)
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    d = dist_to_eye(y)
    if d <= 0:
        raise TooCloseToEye(f"y={y} is not outside the eye")
    if j == 0:
        return complex(1j * p_outer(y))
    radius = min(0.5 * d, 0.5 * abs(y))
    return 1j * n ** (-j) * cauchy_derivative(lambda z: complex(p_outer(z)), y, j, radius)

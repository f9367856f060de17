import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from painleve3.elliptic_approx import (TWO_PI_I, abel_map, data_at, l3_path, lattice_coords, lattice_dist,
                                       ode_residual_w, phases, quantization_indices, theta, udot_elliptic,
                                       udot_from_data)
from painleve3.errors import DivergentParameter, HalfIntegerM
from painleve3.spectral import path_integral, solve_boutroux
from painleve3.umemura import eval_un

B0 = -1 + 0.3j
zs = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
GRID = [0.25, 0.2 + 0.25j, 0.1 - 0.1j, 0.3 + 0.05j]


@given(zs)
def test_theta_periodic(z):
    # [PAPER] 2 pi i periodicity
    assert abs(theta(z + TWO_PI_I, B0) - theta(z, B0)) < 1e-12 * max(1, abs(theta(z, B0)))


@given(zs)
def test_theta_quasiperiodic(z):
    # [PAPER] Theta(z + B) = exp(-z - B/2) Theta(z)
    lhs, rhs = theta(z + B0, B0), np.exp(-z - B0 / 2) * theta(z, B0)
    assert abs(lhs - rhs) < 1e-12 * max(1, abs(rhs))


def test_theta_zero_and_value():
    # [PAPER] zero at i pi + B/2
    assert abs(theta(1j * np.pi + B0 / 2, B0)) < 1e-12
    # [DERIVED] direct summation oracle; the 10-digit reference sqrt(2 pi) omits the e^{-2 pi^2} image terms
    direct = float(mpmath.nsum(lambda k: mpmath.exp(-k * k / 2), [-mpmath.inf, mpmath.inf]))
    assert abs(theta(0, -1) - direct) < 1e-13
    assert abs(theta(0, -1) - 2.5066282746) < 1e-7
    with pytest.raises(DivergentParameter):
        theta(0, 0.1)


def test_abel_base_point():
    # [TRIVIAL]
    c = solve_boutroux(0.25)
    assert abel_map(c.lam0, c) == 0


@pytest.mark.parametrize("y", GRID)
def test_lattice_identities(y):
    # [PAPER] 2A(inf) + 2A(kappa) = -B and 2A(0) - 2A(kappa) = 2 pi i modulo the lattice
    d = data_at(y, 0)
    assert lattice_dist(2 * d.A_inf + 2 * d.A_kappa + d.B, d.B) < 1e-8
    assert lattice_dist(2 * d.A_0 - 2 * d.A_kappa - TWO_PI_I, d.B) < 1e-8
    # [PAPER] the four factors never vanish together: no half-period coincidences
    for z in (2 * d.A_inf, 2 * d.A_0, d.A_inf + d.A_0, d.A_inf - d.A_0):
        assert lattice_dist(z, d.B) > 1e-6


def test_B_real_negative():
    # [PAPER] real y gives real negative B
    d = data_at(0.25, 0)
    assert d.B.real < 0 and abs(d.B.imag) < 1e-10


@pytest.mark.parametrize("y", GRID)
def test_K_real(y):
    # [PAPER] Boutroux conditions make K1, K2 real
    d = data_at(y, 0)
    assert abs(d.K1_imag) < 1e-9 and abs(d.K2_imag) < 1e-9


@pytest.mark.parametrize("y", [0.25, 0.2 + 0.25j])
def test_eta_defining_relation(y):
    # [TRIVIAL] i K1 int_L3 dl/R + (i K2 + eta) int_blue dl/R_+ = 0
    d = data_at(y, 0)
    c = d.curve
    I3 = path_integral(lambda lam, h=(): 1 / c.R(lam, h), l3_path(c), True, True, offsets=True)
    assert abs(1j * d.K1 * I3 + (1j * d.K2 + d.eta) * d.I_blue) < 1e-10


def test_halfint_m_rejected():
    # [PAPER] delta is undefined at half-integer m
    with pytest.raises(HalfIntegerM):
        data_at(0.25, 0.5)


def test_against_exact_real_point():
    # [PAPER] interior approximation at y = 0.2, n = 20
    a = udot_elliptic(20, 0.2)
    assert a.carveout >= 0.1
    assert abs(a.value - complex(eval_un(mpmath.mpc(4), 20, 0))) < 0.1


@pytest.mark.parametrize("y,w,m", [(0.2 + 0.1j, 0.3, 0.25), (0.15, 0.1j, "i/5")])
def test_left_half_reciprocal(y, w, m):
    # [PAPER] left half of the eye by u_n(-x; -m) = 1/u_n(x; m)
    mm = complex(0.25) if m == 0.25 else 0.2j
    a = udot_elliptic(9, y, w, mm).value
    b = udot_elliptic(9, -y, -w, -mm).value
    assert abs(a * b - 1) < 1e-12


def test_w_period():
    # [DERIVED] w -> w + 2 pi / nu shifts every phase by 2 pi i
    d = data_at(0.2 + 0.1j, 0)
    v0, _ = udot_from_data(d, 12, 0.2)
    v1, _ = udot_from_data(d, 12, 0.2 + 2 * np.pi / d.nu)
    assert abs(v0 - v1) < 1e-10 * max(1, abs(v0))


def test_ode_in_w():
    # [DERIVED] the interior approximation solves the autonomous ODE in w
    r1 = ode_residual_w(7, 0.25, 0.3, 0, h=1e-5)
    assert r1 < 1e-6
    # [TRIVIAL] central differences are second order
    a, b = ode_residual_w(7, 0.25, 0.3, 0, h=1e-3), ode_residual_w(7, 0.25, 0.3, 0, h=5e-4)
    assert 3.0 < a / b < 5.0


def test_quantization_reconstruction():
    # [TRIVIAL] 2 pi i alpha + B beta reproduces the decomposed quantity
    d = data_at(0.2 + 0.1j, 0)
    s, _ = phases(d, 10, 0.1)
    z = d.A_inf + d.A_kappa - s
    a, b = lattice_coords(z, d.B)
    assert abs(TWO_PI_I * a + d.B * b - z) < 1e-10


def test_quantization_n_dependence():
    # [PAPER] alpha(n) - alpha(0) = -+ n K2 / (2 pi)
    y, n = 0.2 + 0.1j, 13
    d = data_at(y, 0)
    q0, qn = quantization_indices(0, y), quantization_indices(n, y)
    assert abs((qn.alpha0_pm[0] - q0.alpha0_pm[0]) + n * d.K2 / (2 * np.pi)) < 1e-9
    assert abs((qn.alpha0_pm[1] - q0.alpha0_pm[1]) - n * d.K2 / (2 * np.pi)) < 1e-9


def test_quantization_at_theta_root():
    # [DERIVED] Newton on the open-zero theta factor, then decompose: integer indices
    y, n = 0.2 + 0.1j, 10
    d = data_at(y, 0)
    sh = 1j * np.pi + d.B / 2
    f = lambda w: theta(d.A_inf + d.A_kappa - phases(d, n, w)[0] + sh, d.B)
    a, b = lattice_coords(d.A_inf + d.A_kappa - phases(d, n, 0)[0], d.B)
    target = TWO_PI_I * np.rint(a) + d.B * np.rint(b)
    w = (target - (d.A_inf + d.A_kappa - phases(d, n, 0)[0])) / (1j * d.nu) + 0.01
    for _ in range(30):
        h = 1e-7
        w = w - f(w) / ((f(w + h) - f(w - h)) / (2 * h))
    assert abs(f(w)) < 1e-10
    q = quantization_indices(n, y, w)
    assert abs(q.alpha0_pm[0] - round(q.alpha0_pm[0])) < 1e-6
    assert abs(q.beta0_pm[0] - round(q.beta0_pm[0])) < 1e-6

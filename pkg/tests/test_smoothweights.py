import math

import numpy as np
import pytest

from hlsums.rng import uniform
from hlsums.smoothweights import (
    BumpSpec,
    eta0,
    f_beta1,
    gamma0,
    mellin_phi0,
    phi0,
    psi0,
    quad_smooth,
    smooth_step,
)


def test_smooth_step_basics():
    assert smooth_step(-1.0) == 0.0
    assert smooth_step(0.0) == 0.0
    assert smooth_step(1.0) == 1.0
    assert smooth_step(2.0) == 1.0
    assert smooth_step(0.5) == 0.5
    for i in range(50):
        t = uniform(111, i)
        assert abs(smooth_step(t) + smooth_step(1.0 - t) - 1.0) < 1e-15


def test_psi0_examples():
    assert psi0(2.0) == 1.0
    assert psi0(0.25) == 0.0
    v = psi0(0.75)
    assert 0.0 < v < 1.0
    assert abs(v - (1.0 - psi0(1.5 - 0.75))) < 1e-15


def test_f_beta1_examples():
    big_x = 1e9
    assert f_beta1(0.5, 0.1, big_x) == 1.0
    assert f_beta1(0.0, 0.1, big_x) == 0.0
    for i in range(60):
        y = uniform(13, i)
        assert abs(f_beta1(y, 0.1, big_x) - f_beta1(1.0 - y, 0.1, big_x)) < 1e-15
    with pytest.raises(ValueError):
        f_beta1(0.5, 0.1, 2.0)  # X^-beta1 >= 1/4


def test_f_beta1_derivative_growth():
    # r-th derivative bounded by C_r * X^(beta1*r): finite differences
    beta1, big_x = 0.2, 1e6
    eps = big_x**-beta1
    h = eps / 64.0
    ys = np.linspace(eps * 0.5, eps * 2.5, 200)
    vals = [f_beta1(ys + k * h, beta1, big_x) for k in range(-2, 3)]
    d1 = np.max(np.abs((vals[3] - vals[1]) / (2 * h)))
    d2 = np.max(np.abs((vals[3] - 2 * vals[2] + vals[1]) / h**2))
    assert d1 <= 10.0 * big_x**beta1
    assert d2 <= 100.0 * big_x ** (2 * beta1)


def test_gamma0_properties():
    assert gamma0(0.5) == 0.5
    assert gamma0(1.0) == 0.0
    assert gamma0(-1.2) == 0.0
    for i in range(200):
        y = uniform(17, i)
        assert abs(gamma0(y) + gamma0(1.0 - y) - 1.0) < 1e-15
        assert gamma0(y) == gamma0(-y)


def test_gamma0_shift_partition():
    for i in range(1000):
        y = -4.0 + 8.0 * uniform(6, i)
        total = sum(gamma0(y - m) for m in range(-6, 7))
        assert abs(total - 1.0) <= 1e-9


def test_phi0_properties():
    assert phi0(3.0) == 0.0
    assert phi0(0.3) == 0.0
    for i in range(100):
        x = math.exp(-2.0 + 4.0 * uniform(19, i))
        assert abs(phi0(x) - phi0(1.0 / x)) < 1e-12
    with pytest.raises(ValueError):
        phi0(0.0)
    with pytest.raises(ValueError):
        phi0(-1.0)


def test_phi0_shift_partition():
    for i in range(1000):
        x = math.exp(-3.0 + 6.0 * uniform(5, i))
        total = sum(phi0(x / math.exp(m)) for m in range(-5, 6))
        assert abs(total - 1.0) <= 1e-9


def test_all_bumps_in_unit_interval():
    ys = np.linspace(-3.0, 3.0, 500)
    for fn in (psi0, gamma0, smooth_step):
        v = fn(ys)
        assert np.all(v >= 0.0) and np.all(v <= 1.0)
    xs = np.linspace(0.01, 5.0, 500)
    v = phi0(xs)
    assert np.all(v >= 0.0) and np.all(v <= 1.0)


def test_eta0_support_and_mass():
    assert eta0(0.9) == 0.0
    assert eta0(2.1) == 0.0
    assert eta0(1.5) > 0.0
    mass = quad_smooth(lambda t: eta0(t), 1.0, 2.0, 64, 40)
    assert abs(mass - 1.0) < 1e-12


def test_mellin_phi0_normalization_and_symmetry():
    m0 = mellin_phi0(0)
    assert abs(m0 - 1.0) < 1e-6
    for theta in (2.0, 5.0, 11.5):
        a = mellin_phi0(1j * theta)
        b = mellin_phi0(-1j * theta)
        assert abs(a - b.conjugate()) < 1e-12
    with pytest.raises(ValueError):
        mellin_phi0(1.0 + 1j)


def test_mellin_phi0_decay_frozen():
    # decay constant at |s| = 20 measured once and frozen (2.237e-3)
    ratio = abs(mellin_phi0(20j)) / abs(mellin_phi0(0))
    assert ratio <= 2.5e-3
    # and it keeps decaying
    assert abs(mellin_phi0(40j)) < abs(mellin_phi0(20j))


def test_mellin_phi0_two_orders_agree():
    for theta in (0.0, 7.0, 20.0):
        a = mellin_phi0(1j * theta, order=16)
        b = mellin_phi0(1j * theta, order=24)
        assert abs(a - b) < 1e-10


def test_bumpspec_roundtrip():
    spec = BumpSpec("dyadic", {"C": 1000.0})
    assert spec(999.0) == 0.0
    assert spec(1500.0) == 1.0
    assert spec(2001.0) == 0.0
    spec2 = BumpSpec("f_beta1", {"beta1": 0.1, "X": 1e9})
    assert spec2(0.5) == 1.0
    with pytest.raises(ValueError):
        BumpSpec("unknown", {})
    assert BumpSpec("psi0")(2.0) == 1.0
    assert BumpSpec("eta0")(1.5) == eta0(1.5)

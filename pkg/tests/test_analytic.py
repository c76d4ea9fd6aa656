import cmath
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from diracosc import analytic
from diracosc import fockspace as fs
from diracosc.analytic import RamseyParams


def test_energy_and_coefficients():
    a, b = analytic.eigen_coefficients(0.1, 2)
    assert a == pytest.approx(0.9341724, abs=1e-7)
    assert b == pytest.approx(0.3568221, abs=1e-7)
    assert a * a + b * b == pytest.approx(1.0, abs=1e-15)
    assert analytic.nr_energy(0.1, 2) == pytest.approx(1.4)


def test_zitterbewegung_amplitude():
    assert analytic.zb_amplitude(0.2, 3) == pytest.approx(12 / 17)


def test_zb_from_two_level_rabi_formula():
    # Rabi: P = (Omega/W)^2 sin^2(W t / 2) with Omega = 2 eta, detuning 2
    xi, n = 0.07, 4
    eta = 2 * math.sqrt(xi * n)
    t = np.linspace(0, 10, 50)
    w = math.sqrt(4 * eta**2 + 4)
    p = (2 * eta / w) ** 2 * np.sin(w * t / 2) ** 2
    _, sz, _ = analytic.zb_exact(xi, n, t)
    assert np.allclose(sz, p - 0.5, atol=1e-15)


def test_zb_first_order_is_leading_expansion():
    x, t = sp.symbols("x t", positive=True)
    exact = 4 * x / (1 + 4 * x) * sp.sin(sp.sqrt(1 + 4 * x) * t) ** 2
    lead = sp.series(exact, x, 0, 2).removeO()
    first = 4 * x * sp.sin((1 + 2 * x) * t) ** 2
    diff = sp.simplify(sp.series(first, x, 0, 2).removeO() - lead)
    assert diff == 0


def test_time_avg_values():
    lz, sz, jz = analytic.zb_time_avg(0.01, 3)
    assert sz == pytest.approx(-0.44)
    assert lz == pytest.approx(-2.06)
    assert jz == -2.5
    assert analytic.first_order_visibility(0.01, 1) == pytest.approx(0.04)


@pytest.mark.parametrize("fn", [analytic.zb_exact, analytic.zb_first_order])
def test_zb_rejects_vacuum(fn):
    with pytest.raises(ValueError):
        fn(0.1, 0, 0.0)


def test_ramsey_params_validation():
    with pytest.raises(ValueError):
        RamseyParams(1.0, 0.8, 0.8, 0.01)
    rp = RamseyParams(1j, 1.0, 0.0, 0.05)
    assert rp.phase == pytest.approx(math.pi / 2)
    assert rp.omega1 == pytest.approx(1.1)


def test_envelope_value():
    rp = RamseyParams(1.0, math.sqrt(0.5), math.sqrt(0.5), 0.01)
    t = math.pi / 4 / (2 * 0.01)
    assert analytic.ramsey_envelope(rp, t) == pytest.approx(0.5 * math.exp(-1), rel=1e-14)


@settings(max_examples=25, deadline=None)
@given(r=st.floats(0.0, 2.0), theta=st.floats(0.0, 2 * math.pi))
def test_envelope_is_coherent_overlap(r, theta):
    space = fs.build_space(0, 60)
    z = r * cmath.exp(0.3j)
    a = fs.coherent_left(space, z * cmath.exp(-1j * theta))
    b = fs.coherent_left(space, z * cmath.exp(1j * theta))
    rp = RamseyParams(z, 1.0, 0.0, 1.0)
    # envelope at 2 w t = theta with |alpha* beta| replaced by 1
    expected = math.exp(-2 * r * r * math.sin(theta) ** 2)
    assert abs(a.inner(b)) == pytest.approx(expected, abs=1e-12)
    env = analytic.ramsey_envelope(RamseyParams(z, math.sqrt(0.5), math.sqrt(0.5), 1.0), theta / 2)
    assert env == pytest.approx(0.5 * expected, abs=1e-12)
    assert rp.omega0 == 1.0


def test_circular_orbit_radius():
    t = np.linspace(0, 100, 300)
    x, y = analytic.circular_orbit(1.7 * cmath.exp(0.2j), 0.03, t)
    assert np.allclose(np.hypot(x, y), 1.7, atol=1e-14)
    rp = RamseyParams(1.7 * cmath.exp(0.2j), 1.0, 0.0, 0.03)
    ox, oy = analytic.orbit(rp, t)
    assert np.allclose(ox, x, atol=1e-14) and np.allclose(oy, y, atol=1e-14)


def test_orbit_ellipse_and_flat_cases():
    t = np.linspace(0, math.pi / 0.01, 2001)
    rp = RamseyParams(1j, math.sqrt(2 / 3), math.sqrt(1 / 3), 0.01)
    x, y = analytic.orbit(rp, t)
    assert np.abs(y).max() / np.abs(x).max() == pytest.approx(3.0, rel=1e-6)
    flat = RamseyParams(1j, math.sqrt(0.5), math.sqrt(0.5), 0.01)
    x, _ = analytic.orbit(flat, t)
    assert np.abs(x).max() < 1e-15


def test_mixed_state_statics():
    lz, sz, jz = analytic.mixed_state_statics(3, math.sqrt(0.25), math.sqrt(0.75))
    assert (lz, sz, jz) == pytest.approx((-2.25, -0.25, -2.5))
    with pytest.raises(ValueError):
        analytic.mixed_state_statics(3, 1.0, 1.0)


def test_analytic_is_independent_of_numerics():
    import diracosc.analytic as mod

    src = open(mod.__file__).read()
    for name in ("fockspace", "dynamics", "model", "interferometer"):
        assert f"from .{name}" not in src and f"import {name}" not in src

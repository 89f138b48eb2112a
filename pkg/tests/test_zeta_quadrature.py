import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from symsieve.arith import DomainError
from symsieve.quadrature import composite_rule, integrate, panels_for
from symsieve.zeta import eis_weight, zeta, zeta_borwein


def mp_zeta(s):
    with mpmath.workdps(30):
        return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))


@pytest.mark.parametrize("s", [2, 0.5 + 14.134725j, 1 + 2j, 1 + 200j, 1 + 2000j, 0.25 + 3j,
                               3.5 - 40j, 1.0001, 1 + 1e-3j])
def test_zeta_matches_mpmath(s):
    z = zeta(s)[0]
    assert abs(z - mp_zeta(complex(s))) <= 1e-10 * max(1, abs(z))


def test_zeta_at_two():
    assert abs(zeta(2)[0] - math.pi**2 / 6) < 1e-12


@given(st.floats(0.05, 4), st.floats(-500, 500))
def test_zeta_property_against_mpmath(sigma, t):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-3:
        return
    z = zeta(s)[0]
    assert abs(z - mp_zeta(s)) <= 1e-10 * max(1, abs(z))


def test_borwein_oracle_agrees():
    s = 1 + 2j * np.array([0.5, 1, 2.5, 5, 10])
    assert np.max(np.abs(zeta(s) - zeta_borwein(s))) < 1e-12


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta(1)
    with pytest.raises(DomainError):
        zeta(-0.5 + 2j)


def test_eis_weight():
    assert eis_weight(3.7) == eis_weight(-3.7)
    assert abs(eis_weight(1.0) - abs(zeta_borwein(1 + 2j)[0]) ** 2) < 1e-12
    with pytest.raises(DomainError):
        eis_weight(0.2)
    arr = eis_weight(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert arr.shape == (2, 2)


def test_eis_weight_stays_off_zero():
    t = np.linspace(10, 1000, 20001)
    w = eis_weight(t)
    assert np.all(w > 0.05) and np.all(w < 20)


def test_composite_rule():
    rule = composite_rule(0, 2, 4, order=5)
    assert rule.nodes.shape == (20,) and abs(rule.weights.sum() - 2) < 1e-14
    assert np.all(np.diff(rule.nodes) > 0)
    with pytest.raises(ValueError):
        composite_rule(0, 1, 0)
    assert panels_for(0, 10, 3) == 4
    assert panels_for(0, 1, 3) == 1


def test_integrate():
    assert abs(integrate(np.sin, 0, math.pi, 1) - 2) < 1e-14
    # polynomials of degree 2*order - 1 are exact on a single panel
    assert abs(integrate(lambda x: x**31, 0, 1, 1) - 1 / 32) < 1e-15
    osc = integrate(lambda x: np.cos(50 * x), 0, 3, 20)
    assert abs(osc - math.sin(150) / 50) < 1e-13
    vec = integrate(lambda x: np.stack([x, x * x], axis=1), 0, 1, 2)
    assert np.allclose(vec, [0.5, 1 / 3])

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaseinv.errors import DomainError
from phaseinv.forward import RadialPotential
from phaseinv.liouville import (PotentialCurve, TransformParams, auxiliary_curve, auxiliary_potential,
                                physical_potential, q_norm_bound, r_of_x, x_of_r)

cs = st.floats(min_value=-5.0, max_value=-0.1)
aa = st.floats(min_value=0.2, max_value=10.0)


@settings(max_examples=100, deadline=None)
@given(a=aa, c=cs, frac=st.floats(min_value=1e-3, max_value=1.0))
def test_coordinate_round_trip(a, c, frac):
    p = TransformParams(a, c, 1.0)
    r = frac * a
    x = x_of_r(r, p)
    assert x >= 0
    assert r_of_x(x, p) == pytest.approx(r, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(a=aa, c=cs, k=st.floats(min_value=0.1, max_value=3.0), depth=st.floats(min_value=-5.0, max_value=5.0))
def test_auxiliary_then_physical_is_identity(a, c, k, depth):
    p = TransformParams(a, c, k)
    q = RadialPotential.gauss(depth, 1.0, a)
    x = np.linspace(0.0, 3.0, 40)
    back = physical_potential(auxiliary_curve(q, p, x), p)
    assert np.allclose(back.values, q(back.grid), rtol=1e-10, atol=1e-10 * (1 + abs(depth) + k * k))


def test_free_depth_and_constant_q():
    p = TransformParams(2.0, -1.0, 1.0)
    assert p.free_depth == pytest.approx(-4.0)
    assert auxiliary_potential(lambda r: np.zeros_like(r), p, 0.0) == pytest.approx(-4.0)
    # Q(x) = -(ka/c)^2 exp(2x/c) for q = 0
    assert auxiliary_potential(lambda r: np.zeros_like(r), p, 1.0) == pytest.approx(-4.0 * np.exp(-2.0))


def test_gauss_auxiliary_at_origin():
    # Q(0) = (a/c)^2 (q(a) - k^2), and q(a) = 0 because r = a is outside the support
    p = TransformParams(1.5, -0.74, 1.5)
    q = RadialPotential.gauss(-4.0, 5.0, 1.5)
    assert auxiliary_potential(q, p, 0.0) == pytest.approx((1.5 / 0.74) ** 2 * -2.25, rel=1e-14)
    assert auxiliary_potential(q, p, 0.0) == pytest.approx(-9.2449, abs=1e-4)


def test_norm_bound_constant():
    p = TransformParams(2.0, -1.0, 1.0)
    val = q_norm_bound(lambda r: np.full_like(r, 1.2), p)
    assert val == pytest.approx(4.0 / 2 + 2.0 * 1.2 * 2.0, rel=1e-6)


def test_validation():
    with pytest.raises(DomainError):
        TransformParams(1.0, 0.5, 1.0)
    p = TransformParams(1.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        x_of_r(1.5, p)
    with pytest.raises(DomainError):
        r_of_x(-1.0, p)
    with pytest.raises(DomainError):
        PotentialCurve(np.array([0.0, 0.0]), np.array([1.0, 2.0]))
    curve = PotentialCurve(np.array([0.0, 1.0]), np.array([1.0, 3.0]))
    assert curve(0.5) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        curve(2.0)

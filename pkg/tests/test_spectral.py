import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaseinv.errors import DomainError, PoleError, SingularMomentError
from phaseinv.forward import PhaseShiftSet
from phaseinv.spectral import default_dps, m0_value, m_value, moment, moments

TABLE2_MOMENTS = {0: -0.1714, 1: -0.0043, 2: 0.0151, 10: 0.0111}


def test_table2_moments(table2_phases):
    mu = moments(table2_phases, -0.3, -0.5).as_array()
    for l, ref in TABLE2_MOMENTS.items():
        assert abs(mu[l] - ref) < 5e-4


def test_table2_moments_frozen(table2_phases):
    mu = moments(table2_phases, -0.3, -0.5).as_array()
    assert mu[0] == pytest.approx(-0.171428, abs=2e-6)
    assert mu[10] == pytest.approx(0.0110995, abs=2e-7)


def test_m_value_closed_form():
    # delta = 0, l = 0: R = cot(ka) - 1/(2 ka)
    ka, c = 2.0, -1.0
    expected = ka / c * (1 / math.tan(ka) - 1 / (2 * ka))
    assert m_value(0, 0.0, ka, c) == pytest.approx(expected, rel=1e-13)
    assert m_value(0, 0.0, ka, c) == pytest.approx(1.415315, abs=1e-6)


def test_free_moments_vanish_where_m_is_free():
    # mu_l = 0 exactly when m equals its free value (l + 1/2)/c + h
    c, h = -0.7, 0.3
    for l in range(3):
        m_free = m0_value(l, c) + h
        mu = (l + 0.5) / (c * (m_free - h)) - 1
        assert mu == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(l=st.integers(0, 12), d=st.floats(-1.4, 1.4), ka=st.floats(0.5, 10.0), c=st.floats(-3.0, -0.1),
       h=st.floats(-2.0, 2.0))
def test_moment_is_function_of_m(l, d, ka, c, h):
    try:
        mu = moment(l, d, ka, c, h)
    except (PoleError, SingularMomentError):
        return
    m = m_value(l, d, ka, c)
    assert mu == pytest.approx((l + 0.5) / (c * (m - h)) - 1, rel=1e-9, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(l=st.integers(0, 8), d=st.floats(-1.4, 1.4), ka=st.floats(0.5, 6.0))
def test_extended_and_double_paths_agree(l, d, ka):
    try:
        lo = moment(l, d, ka, -1.0, 0.0)
    except (PoleError, SingularMomentError):
        return
    hi = moment(l, d, ka, -1.0, 0.0, dps=40)
    assert float(hi) == pytest.approx(lo, rel=1e-7, abs=1e-9)


def test_errors():
    with pytest.raises(DomainError):
        moment(0, 0.1, 2.0, 1.0, 0.0)
    with pytest.raises(PoleError):
        moment(0, math.pi / 2, 2.0, -1.0, 0.0)
    # h equal to m makes the moment singular
    m = m_value(0, 0.3, 2.0, -1.0)
    with pytest.raises(SingularMomentError):
        moment(0, 0.3, 2.0, -1.0, m)


def test_moment_set_precision():
    ps = PhaseShiftSet(1.0, 2.0, (0.1, 0.05))
    ms = moments(ps, -1.0, 0.0)
    assert ms.dps == default_dps(2) == 30
    assert len(ms.head(1)) == 1
    assert moments(ps, -1.0, 0.0, dps=None).dps is None
    assert np.allclose(ms.as_array(), moments(ps, -1.0, 0.0, dps=None).as_array(), rtol=1e-10)

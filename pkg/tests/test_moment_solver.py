from fractions import Fraction
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaseinv import specfun
from phaseinv.errors import DegenerateNodesError, DomainError, IndeterminateLambdaError
from phaseinv.moment_solver import (CauchyNodes, SpectralExpansion, cauchy_inverse, evaluate_F, forward_moments,
                                    solve_multi_bs, solve_one_bs, solve_zero_bs)
from phaseinv.spectral import moments


def _exact_inverse(x, y):
    """Gauss-Jordan on the Cauchy matrix in exact rational arithmetic."""
    n = len(x)
    A = [[Fraction(1) / (x[i] + y[j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _nodes(n, seed):
    rnd = random.Random(seed)
    x = sorted({Fraction(rnd.randint(1, 40), 4) for _ in range(4 * n)})[:n]
    y = sorted({Fraction(rnd.randint(0, 40), 3) for _ in range(4 * n)})[:n]
    return x, y


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_cauchy_inverse_matches_rational_oracle(n):
    x, y = _nodes(n, n)
    exact = _exact_inverse(x, y)
    nodes = CauchyNodes(tuple(float(v) for v in x), tuple(float(v) for v in y))
    mp_inv = cauchy_inverse(nodes, dps=50)
    fl_inv = cauchy_inverse(nodes)
    for i in range(n):
        for j in range(n):
            e = float(exact[i][j])
            assert float(mp_inv[i, j]) == pytest.approx(e, rel=1e-12)
            assert fl_inv[i, j] == pytest.approx(e, rel=1e-11)


def test_hilbert_inverse_corner():
    n = 5
    nodes = CauchyNodes(tuple(i + 0.5 for i in range(n)), tuple(j + 0.5 for j in range(n)))
    inv = cauchy_inverse(nodes, dps=40)
    assert abs(inv[0, 0] - 25) < 1e-30
    assert cauchy_inverse(nodes)[0, 0] == pytest.approx(25.0, rel=1e-13)


@pytest.mark.parametrize("n", [2, 6, 9, 12])
def test_product_with_inverse_is_identity(n):
    nodes = CauchyNodes(tuple(l + 0.5 for l in range(n)), tuple(0.3 * j for j in range(n)))
    dps = 20 + 2 * n
    ctx = specfun.mp_context(dps)
    prod = nodes.matrix(dps) * cauchy_inverse(nodes, dps)
    err = max(abs(prod[i, j] - (1 if i == j else 0)) for i in range(n) for j in range(n))
    assert err < 1e-8


@pytest.mark.parametrize("n", [2, 4, 6])
def test_double_precision_inverse_to_dimension_six(n):
    # the moment system's own nodes at c = -1; the double path is limited by conditioning beyond this
    nodes = CauchyNodes(tuple(l + 0.5 for l in range(n)), tuple(float(j) for j in range(n)))
    prod = nodes.matrix() @ cauchy_inverse(nodes)
    assert np.max(np.abs(prod - np.eye(n))) < 1e-8


def test_degenerate_nodes():
    with pytest.raises(DegenerateNodesError):
        CauchyNodes((0.5, 0.5), (0.0, 1.0))
    with pytest.raises(DegenerateNodesError):
        CauchyNodes((0.5, 1.5), (-0.5, 1.0))
    with pytest.raises(DomainError):
        CauchyNodes((0.5,), (0.0, 1.0))


def _planted(c, coeffs, bound=(), dps=80):
    ctx = specfun.mp_context(dps)
    cc = tuple(ctx.mpf(v) for v in coeffs)
    bt = tuple((ctx.mpf(s), ctx.mpf(w)) for s, w in bound)
    exp = SpectralExpansion(cc, bt, c, 0.0, dps)
    h = -float(exp.f0())
    exp = SpectralExpansion(cc, bt, c, h, dps)
    return exp


@settings(max_examples=15, deadline=None)
@given(c=st.floats(-2.0, -0.2), coeffs=st.lists(st.floats(-1.0, 1.0), min_size=2, max_size=10))
def test_zero_mode_plant_and_recover(c, coeffs):
    exp = _planted(c, coeffs)
    mu = forward_moments(exp, len(coeffs), dps=80)
    got = solve_zero_bs(mu)
    assert np.max(np.abs(got.coeffs_float() - np.array(coeffs))) < 1e-8
    assert abs(got.f0_residual()) < 1e-8


def test_zero_mode_drop_c0():
    coeffs = (0.0, 0.4, -0.2, 0.1)
    exp = _planted(-0.5, coeffs)
    mu = forward_moments(exp, 3, dps=80)
    got = solve_zero_bs(mu, drop_c0=True)
    assert got.coeffs_float()[0] == 0.0
    assert np.max(np.abs(got.coeffs_float() - np.array(coeffs))) < 1e-8


@settings(max_examples=10, deadline=None)
@given(c=st.floats(-1.5, -0.3), s=st.floats(0.3, 3.0), w=st.floats(0.1, 2.0),
       coeffs=st.lists(st.floats(-1.0, 1.0), min_size=2, max_size=8))
def test_one_bs_plant_and_recover(c, s, w, coeffs):
    exp = _planted(c, coeffs, ((s, w),))
    mu = forward_moments(exp, len(coeffs) + 1, dps=80)
    got = solve_one_bs(mu)
    assert got.sqrt_neg_lambdas[0] == pytest.approx(s, abs=1e-8)
    assert got.half_weights[0] == pytest.approx(w, abs=1e-8)
    assert np.max(np.abs(got.coeffs_float() - np.array(coeffs))) < 1e-8


@pytest.mark.parametrize("planted", [((2.0, 0.5), (0.7, 0.3)), ((1.6, 1.0), (0.4, 0.2))])
def test_multi_bs_plant_and_recover(planted):
    coeffs = (0.3, -0.2, 0.1, 0.05, -0.02)
    exp = _planted(-1.0, coeffs, planted)
    mu = forward_moments(exp, len(coeffs) + 3, dps=80)
    init = [-(s * 1.1) ** 2 for s, _ in planted]
    got = solve_multi_bs(mu, B=2, init=init)
    want = sorted(planted, key=lambda t: -t[0] ** 2)
    for (s, w), (gs, gw) in zip(want, got.bound_terms):
        assert float(gs) == pytest.approx(s, abs=1e-6)
        assert float(gw) == pytest.approx(w, abs=1e-6)
    assert np.max(np.abs(got.coeffs_float() - np.array(coeffs))) < 1e-6


def test_multi_with_one_term_equals_one_bs(table2_phases):
    mu = moments(table2_phases, -0.3, -0.5)
    one = solve_one_bs(mu)
    multi = solve_multi_bs(mu, B=1, init=[-2.0])
    assert multi.sqrt_neg_lambdas[0] == pytest.approx(one.sqrt_neg_lambdas[0], abs=1e-7)


def test_table2_one_bs(table2_phases):
    exp = solve_one_bs(moments(table2_phases, -0.3, -0.5))
    assert exp.sqrt_neg_lambdas[0] == pytest.approx(-1.4447, abs=1e-2)
    assert exp.half_weights[0] == pytest.approx(-6.4667, rel=0.02)
    assert exp.coeffs_float()[2] == pytest.approx(7.2085, rel=0.02)
    # frozen at the full precision of this implementation
    assert exp.sqrt_neg_lambdas[0] == pytest.approx(-1.44472, abs=1e-5)


def test_one_bs_is_insensitive_to_trials(table2_phases):
    mu = moments(table2_phases, -0.3, -0.5)
    a = solve_one_bs(mu, trial_lambdas=(-1.0, -4.0)).sqrt_neg_lambdas[0]
    b = solve_one_bs(mu, trial_lambdas=(-0.3, -9.0)).sqrt_neg_lambdas[0]
    assert a == pytest.approx(b, abs=1e-12)


def test_indeterminate_lambda():
    # moments of a pure c_0 expansion with c_0 = 0 make the sum independent of s
    with pytest.raises((IndeterminateLambdaError, DegenerateNodesError)):
        solve_one_bs((0.0, 0.0, 0.0), c=-1.0, h=0.0)


def test_solver_argument_errors():
    with pytest.raises(DomainError):
        solve_zero_bs((0.1, 0.2))
    with pytest.raises(DomainError):
        solve_one_bs((0.1,), c=-1.0, h=0.0)
    with pytest.raises(DomainError):
        solve_multi_bs((0.1, 0.2, 0.3), c=-1.0, h=0.0, B=2, init=[-1.0, -2.0])
    with pytest.raises(DomainError):
        solve_multi_bs((0.1,) * 6, c=-1.0, h=0.0, B=2, init=[-1.0])


def test_evaluate_F_paths_agree():
    exp = _planted(-1.0, (0.3, -0.2), ((1.2, 0.4),))
    x = np.linspace(0, 3, 7)
    assert np.allclose(evaluate_F(exp, x), evaluate_F(exp, x, dps=40), rtol=1e-13)
    assert evaluate_F(exp, 0.0) == pytest.approx(-exp.h, rel=1e-13)

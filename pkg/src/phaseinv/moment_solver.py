"""Moment problem for the expansion of the Gel'fand-Levitan input function F.

F is expanded as

    F(x) = sum_i (b_i/2) exp(s_i x) + sum_n c_n exp(-n x),     s_i = sqrt(-lambda_i),

and each moment equation reads

    mu_l = sum_i (b_i/2) (-c) / (l + 1/2 + c s_i) + sum_n c_n (-c) / (l + 1/2 - c n).

The system matrix is -c times a Cauchy matrix 1/(x_l + y_j) with row nodes
x_l = l + 1/2 and column nodes y_n = -c n (y = c s for a bound-state
column), so it is solved through the explicit Cauchy inverse.  Such
matrices are as ill conditioned as Hilbert matrices; all solves therefore
run in ``mpmath`` at a working precision that grows with the system size.

Bound states:

* none: square system in c_0..c_N;
* one: the coefficient sum S(s) of the augmented square system is affine
  in s, so two trial solves fix s through S(s) = -h;
* several: variable projection.  For fixed s_1..s_B the coefficients come
  from a square Cauchy solve; Newton's method then drives the leftover
  moment equations and the F(0) = -h constraint to zero in s.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from . import specfun
from .errors import (
    ConvergenceError,
    DegenerateNodesError,
    DomainError,
    IndeterminateLambdaError,
    NumericalError,
)
from .spectral import MomentSet, default_dps

MAX_DIM = 64
NODE_GAP = 1e-10


# ---------------------------------------------------------------------------
# Cauchy matrices

@dataclass(frozen=True)
class CauchyNodes:
    """Row nodes ``x`` and column nodes ``y`` of the matrix 1/(x_i + y_j)."""

    x_nodes: tuple
    y_nodes: tuple

    def __post_init__(self):
        x = tuple(self.x_nodes)
        y = tuple(self.y_nodes)
        object.__setattr__(self, "x_nodes", x)
        object.__setattr__(self, "y_nodes", y)
        if len(x) != len(y):
            raise DomainError(f"square systems only: {len(x)} row nodes, {len(y)} column nodes")
        if not x:
            raise DomainError("empty node set")
        if len(x) > MAX_DIM:
            raise DomainError(f"dimension {len(x)} exceeds {MAX_DIM}")
        for name, nodes in (("x", x), ("y", y)):
            srt = sorted(float(v) for v in nodes)
            gaps = [b - a for a, b in zip(srt, srt[1:])]
            if gaps and min(gaps) <= NODE_GAP:
                raise DegenerateNodesError(f"{name} nodes closer than {NODE_GAP}: min gap {min(gaps):.3e}")
        for xi in x:
            for yj in y:
                if abs(float(xi) + float(yj)) <= NODE_GAP:
                    raise DegenerateNodesError(f"x + y vanishes for x={float(xi)}, y={float(yj)}")

    def __len__(self):
        return len(self.x_nodes)

    def matrix(self, dps=None):
        """The Cauchy matrix itself (numpy float array, or mpmath matrix)."""
        n = len(self)
        if dps is None:
            x = np.array(self.x_nodes, dtype=float)
            y = np.array(self.y_nodes, dtype=float)
            return 1.0 / (x[:, None] + y[None, :])
        ctx = specfun.mp_context(dps)
        x = [ctx.mpf(v) for v in self.x_nodes]
        y = [ctx.mpf(v) for v in self.y_nodes]
        return ctx.matrix([[1 / (x[i] + y[j]) for j in range(n)] for i in range(n)])


def cauchy_inverse(nodes, dps=None):
    """Explicit inverse of the Cauchy matrix 1/(x_i + y_j).

    Uses

        b_ij = prod_m (x_j + y_m) prod_m (x_m + y_i)
               / [(x_j + y_i) prod_{m!=i} (y_m - y_i) prod_{m!=j} (x_m - x_j)],

    which equals the entrywise product formula with the shared factors
    hoisted out.  In double precision the products are accumulated as
    log-magnitude and sign; with ``dps`` they are formed in ``mpmath``.

    Returns
    -------
    numpy.ndarray or mpmath.matrix
    """
    n = len(nodes)
    if dps is None:
        x = np.array(nodes.x_nodes, dtype=float)
        y = np.array(nodes.y_nodes, dtype=float)
        xy = x[None, :] + y[:, None]  # xy[i, j] = x_j + y_i
        log_xy = np.log(np.abs(xy))
        sgn_xy = np.sign(xy)
        px_log = log_xy.sum(axis=0)  # prod_m (x_j + y_m)
        px_sgn = np.prod(sgn_xy, axis=0)
        py_log = log_xy.sum(axis=1)  # prod_m (x_m + y_i)
        py_sgn = np.prod(sgn_xy, axis=1)
        dy = y[None, :] - y[:, None]  # y_m - y_i at [i, m]
        dx = x[None, :] - x[:, None]  # x_m - x_j at [j, m]
        np.fill_diagonal(dy, 1.0)
        np.fill_diagonal(dx, 1.0)
        qy_log = np.log(np.abs(dy)).sum(axis=1)
        qy_sgn = np.prod(np.sign(dy), axis=1)
        qx_log = np.log(np.abs(dx)).sum(axis=1)
        qx_sgn = np.prod(np.sign(dx), axis=1)
        logmag = px_log[None, :] + py_log[:, None] - log_xy - qy_log[:, None] - qx_log[None, :]
        sign = px_sgn[None, :] * py_sgn[:, None] * sgn_xy * qy_sgn[:, None] * qx_sgn[None, :]
        return sign * np.exp(logmag)
    ctx = specfun.mp_context(dps)
    x = [ctx.mpf(v) for v in nodes.x_nodes]
    y = [ctx.mpf(v) for v in nodes.y_nodes]
    px = [ctx.fprod(x[j] + y[m] for m in range(n)) for j in range(n)]
    py = [ctx.fprod(x[m] + y[i] for m in range(n)) for i in range(n)]
    qy = [ctx.fprod(y[m] - y[i] for m in range(n) if m != i) for i in range(n)]
    qx = [ctx.fprod(x[m] - x[j] for m in range(n) if m != j) for j in range(n)]
    out = ctx.matrix(n, n)
    for i in range(n):
        for j in range(n):
            out[i, j] = px[j] * py[i] / ((x[j] + y[i]) * qy[i] * qx[j])
    return out


def _cauchy_solve(ctx, x, y, rhs, dps):
    """Solve sum_j C_ij z_j = rhs_i with the explicit inverse, in ``ctx``."""
    binv = cauchy_inverse(CauchyNodes(tuple(x), tuple(y)), dps)
    n = len(x)
    return [ctx.fsum(binv[i, j] * rhs[j] for j in range(n)) for i in range(n)]


# ---------------------------------------------------------------------------
# expansion of F

@dataclass(frozen=True)
class SpectralExpansion:
    """Coefficients of F(x) = sum (b_i/2) e^{s_i x} + sum c_n e^{-n x}.

    Attributes
    ----------
    c_coeffs : tuple
        c_0..c_N (``mpmath.mpf`` on the extended path).
    bound_terms : tuple of (s, half_weight)
        ``s = sqrt(-lambda)``; ``s < 0`` marks a spurious bound state, whose
        term decays instead of growing.
    c, h : float
        Parameters the moments were computed with.
    dps : int or None
        Working precision the coefficients were computed in.
    info : dict
        Solver diagnostics (residuals, iterations, trial sums).
    """

    c_coeffs: tuple
    bound_terms: tuple = ()
    c: float = -1.0
    h: float = 0.0
    dps: int = None
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "c_coeffs", tuple(self.c_coeffs))
        object.__setattr__(self, "bound_terms", tuple(tuple(t) for t in self.bound_terms))

    @property
    def n_bound(self):
        return len(self.bound_terms)

    @property
    def lambdas(self):
        return tuple(-float(s) ** 2 for s, _ in self.bound_terms)

    @property
    def sqrt_neg_lambdas(self):
        return tuple(float(s) for s, _ in self.bound_terms)

    @property
    def half_weights(self):
        return tuple(float(w) for _, w in self.bound_terms)

    def coeffs_float(self):
        return np.array([float(v) for v in self.c_coeffs])

    def f0(self):
        """F(0), in the stored precision."""
        vals = list(self.c_coeffs) + [w for _, w in self.bound_terms]
        if self.dps is None:
            return math.fsum(float(v) for v in vals)
        return specfun.mp_context(self.dps).fsum(vals)

    def f0_residual(self):
        """F(0) + h, which vanishes for consistent spectral data."""
        return float(self.f0() + self.h)

    def is_empty(self):
        return not self.c_coeffs and not self.bound_terms


def evaluate_F(exp, x, dps=None):
    """F(x) for an expansion; ``x`` scalar or array, ``x >= 0``.

    With ``dps`` the sum is formed in ``mpmath`` (needed when coefficients
    are large and cancel) and the result is rounded to float at the end.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("F is evaluated for x >= 0 only")
    if dps is None:
        out = np.zeros_like(xa)
        for n, cn in enumerate(exp.c_coeffs):
            out = out + float(cn) * np.exp(-n * xa)
        for s, w in exp.bound_terms:
            out = out + float(w) * np.exp(float(s) * xa)
        return float(out) if np.ndim(x) == 0 else out
    ctx = specfun.mp_context(dps)
    coeffs = [ctx.mpf(v) for v in exp.c_coeffs]
    bounds = [(ctx.mpf(s), ctx.mpf(w)) for s, w in exp.bound_terms]

    def one(xv):
        xv = ctx.mpf(float(xv))
        terms = [cn * ctx.exp(-n * xv) for n, cn in enumerate(coeffs)]
        terms += [w * ctx.exp(s * xv) for s, w in bounds]
        return float(ctx.fsum(terms))

    if np.ndim(x) == 0:
        return one(xa)
    return np.array([one(v) for v in xa.ravel()]).reshape(xa.shape)


def forward_moments(exp, n_moments, dps=None):
    """Moments generated by an expansion (the forward map of the solvers)."""
    dps = dps or exp.dps or default_dps(n_moments)
    ctx = specfun.mp_context(dps)
    c = ctx.mpf(exp.c)
    out = []
    for l in range(n_moments):
        xl = l + ctx.mpf(1) / 2
        terms = [cn * (-c) / (xl - c * n) for n, cn in enumerate(ctx.mpf(v) for v in exp.c_coeffs)]
        terms += [ctx.mpf(w) * (-c) / (xl + c * ctx.mpf(s)) for s, w in exp.bound_terms]
        out.append(ctx.fsum(terms))
    return MomentSet(tuple(out), float("nan"), float(exp.c), float(exp.h), dps)


# ---------------------------------------------------------------------------
# solvers

def _unpack(mu, c, h):
    if isinstance(mu, MomentSet):
        c = mu.c if c is None else c
        h = mu.h if h is None else h
        values, dps = mu.mu, mu.dps
    else:
        values, dps = tuple(mu), None
        if c is None or h is None:
            raise DomainError("c and h are required when moments are given as a plain sequence")
    if not (math.isfinite(c) and c < 0):
        raise DomainError(f"c must be strictly negative, got {c!r}")
    if not math.isfinite(h):
        raise DomainError(f"h must be finite, got {h!r}")
    if not values:
        raise DomainError("no moments given")
    dps = dps or default_dps(len(values))
    return values, float(c), float(h), dps


def _row_nodes(ctx, L):
    return [l + ctx.mpf(1) / 2 for l in range(L)]


def _linear_part(ctx, mu, c, s_list, n_coef, dps, first_col=0):
    """Square solve for the bound-term half weights and c_first..c_{first+n_coef-1}.

    Returns the unknown vector [half weights..., c_n...].
    """
    n = len(s_list) + n_coef
    cm = ctx.mpf(c)
    x = _row_nodes(ctx, n)
    y = [cm * s for s in s_list] + [-cm * (first_col + j) for j in range(n_coef)]
    rhs = [ctx.mpf(v) / (-cm) for v in mu[:n]]
    return _cauchy_solve(ctx, x, y, rhs, dps)


def _equation_residuals(ctx, mu, c, s_list, sol, rows, first_col=0):
    cm = ctx.mpf(c)
    B = len(s_list)
    out = []
    for l in rows:
        xl = l + ctx.mpf(1) / 2
        terms = [sol[i] * (-cm) / (xl + cm * s_list[i]) for i in range(B)]
        terms += [sol[B + j] * (-cm) / (xl - cm * (first_col + j)) for j in range(len(sol) - B)]
        out.append(ctx.fsum(terms) - ctx.mpf(mu[l]))
    return out


def solve_zero_bs(mu, c=None, h=None, drop_c0=False):
    """Coefficients c_0..c_N from N+1 moments, without bound states.

    With ``drop_c0`` the n = 0 column is removed and the N+1 moments
    determine c_1..c_{N+1}; ``c_coeffs[0]`` is then exactly 0.  The
    departure of F(0) from -h is reported in ``info['f0_residual']``.
    """
    values, c, h, dps = _unpack(mu, c, h)
    L = len(values)
    if L > MAX_DIM:
        raise DomainError(f"{L} moments exceed the supported dimension {MAX_DIM}")
    ctx = specfun.mp_context(dps)
    first = 1 if drop_c0 else 0
    sol = _linear_part(ctx, values, c, [], L, dps, first_col=first)
    res = _equation_residuals(ctx, values, c, [], sol, range(L), first_col=first)
    coeffs = ([ctx.mpf(0)] if drop_c0 else []) + list(sol)
    exp = SpectralExpansion(tuple(coeffs), (), c, h, dps)
    info = {
        "mode": "zero",
        "drop_c0": bool(drop_c0),
        "equation_residual": float(max(abs(r) for r in res)),
        "f0_residual": exp.f0_residual(),
    }
    return replace(exp, info=info)


def default_trial_lambdas(c):
    """(-1, -4) / c^2, i.e. trial s = 1/|c| and 2/|c|."""
    return (-1.0 / c ** 2, -4.0 / c ** 2)


def solve_one_bs(mu, c=None, h=None, trial_lambdas=None):
    """One bound state: s = sqrt(-lambda), b/2 and c_0..c_N from N+2 moments.

    The coefficient sum S(s) of the augmented system is affine in s, so
    two trial solves at s_1, s_2 give

        s = [(S_2 + h) s_1 - (S_1 + h) s_2] / (S_2 - S_1),

    after which the system is solved once more at that s.
    """
    values, c, h, dps = _unpack(mu, c, h)
    L = len(values)
    if L < 2:
        raise DomainError("the one-bound-state solver needs at least 2 moments")
    if L > MAX_DIM:
        raise DomainError(f"{L} moments exceed the supported dimension {MAX_DIM}")
    if trial_lambdas is None:
        trial_lambdas = default_trial_lambdas(c)
    l1, l2 = (float(v) for v in trial_lambdas)
    if not (l1 < 0 and l2 < 0) or l1 == l2:
        raise DomainError(f"trial lambdas must be distinct and negative, got {trial_lambdas!r}")
    ctx = specfun.mp_context(dps)
    s1, s2 = ctx.sqrt(-ctx.mpf(l1)), ctx.sqrt(-ctx.mpf(l2))
    S1 = ctx.fsum(_linear_part(ctx, values, c, [s1], L - 1, dps))
    S2 = ctx.fsum(_linear_part(ctx, values, c, [s2], L - 1, dps))
    slope = S2 - S1
    if abs(slope) <= ctx.mpf(10) ** (-(dps - 5)) * max(abs(S1), abs(S2), 1):
        raise IndeterminateLambdaError(
            "coefficient sum does not depend on the trial bound state",
            diagnostics={"S1": float(S1), "S2": float(S2)},
        )
    hm = ctx.mpf(h)
    s = ((S2 + hm) * s1 - (S1 + hm) * s2) / slope
    for n in range(L - 1):
        if abs(s + n) <= NODE_GAP:
            raise DegenerateNodesError(
                f"bound-state node coincides with column n={n} (s = {float(s)}); retry with other trials",
                diagnostics={"s": float(s)},
            )
    sol = _linear_part(ctx, values, c, [s], L - 1, dps)
    res = _equation_residuals(ctx, values, c, [s], sol, range(L))
    exp = SpectralExpansion(tuple(sol[1:]), ((s, sol[0]),), c, h, dps)
    info = {
        "mode": "one",
        "trial_lambdas": (l1, l2),
        "trial_sums": (float(S1), float(S2)),
        "sum_slope": float(slope / (s2 - s1)),
        "equation_residual": float(max(abs(r) for r in res)),
        "f0_residual": exp.f0_residual(),
    }
    return replace(exp, info=info)


def solve_multi_bs(mu, c=None, h=None, B=2, init=None, constraint="half", max_iter=200, tol=1e-8):
    """B bound states from N+2B moments by Newton iteration in s_1..s_B.

    For fixed s the half weights and c_0..c_N follow from the first N+1+B
    moments by a square Cauchy solve.  The remaining B-1 moment equations
    and the constraint

        sum_i b_i/2 + sum_n c_n = -h      (``constraint='half'``)
        sum_i b_i   + sum_n c_n = -h      (``constraint='literal'``)

    form B residuals in B unknowns.  Newton steps use a forward-difference
    Jacobian, move no s_i by more than half its distance to the nearest
    other s_j, and are halved until the residual norm decreases.

    Parameters
    ----------
    init : BoundStateSet or sequence of float
        Initial negative lambda guesses, one per bound state.
    tol : float
        Convergence threshold on the residual norm relative to
        max(1, |h|, max |mu_l|).
    """
    values, c, h, dps = _unpack(mu, c, h)
    if int(B) != B or B < 1:
        raise DomainError(f"B must be a positive integer, got {B!r}")
    B = int(B)
    L = len(values)
    n_coef = L - 2 * B + 1
    if n_coef < 1:
        raise DomainError(f"{L} moments are too few for {B} bound states (need at least {2 * B})")
    if L > MAX_DIM:
        raise DomainError(f"{L} moments exceed the supported dimension {MAX_DIM}")
    if constraint not in ("half", "literal"):
        raise DomainError(f"constraint must be 'half' or 'literal', got {constraint!r}")
    if init is None:
        raise DomainError("initial lambda guesses are required")
    guesses = [float(v) for v in getattr(init, "lambdas", init)]
    if len(guesses) != B or any(not v < 0 for v in guesses):
        raise DomainError(f"need {B} negative initial lambdas, got {guesses!r}")

    ctx = specfun.mp_context(dps)
    hm = ctx.mpf(h)
    weight = 2 if constraint == "literal" else 1
    extra_rows = range(n_coef + B, L)
    scale = max([1.0, abs(h)] + [abs(float(v)) for v in values])

    def residual(s):
        sol = _linear_part(ctx, values, c, s, n_coef, dps)
        r = _equation_residuals(ctx, values, c, s, sol, extra_rows)
        r.append(weight * ctx.fsum(sol[:B]) + ctx.fsum(sol[B:]) + hm)
        return r, sol

    def norm(r):
        return ctx.sqrt(ctx.fsum(v * v for v in r))

    def safe(s):
        try:
            r, sol = residual(s)
        except (DegenerateNodesError, ZeroDivisionError):
            return None, None
        return r, sol

    s = [ctx.sqrt(-ctx.mpf(v)) for v in guesses]
    r, sol = safe(s)
    if r is None:
        raise DegenerateNodesError("initial guesses collide with the expansion nodes", diagnostics={"init": guesses})
    nr = norm(r)
    eps = ctx.mpf(10) ** -15
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        # iterate to near working precision: the constraint can depend on s
        # only weakly, so a small residual alone does not pin s down
        if nr <= ctx.mpf(10) ** (8 - dps) * scale:
            break
        jac = ctx.matrix(B, B)
        for j in range(B):
            sp = list(s)
            sp[j] = sp[j] + eps
            rp, _ = safe(sp)
            if rp is None:
                sp[j] = s[j] - 2 * eps
                rp, _ = safe(sp)
                if rp is None:
                    raise DegenerateNodesError("Jacobian probe hit a degenerate node")
                step = -2 * eps
            else:
                step = eps
            for i in range(B):
                jac[i, j] = (rp[i] - r[i]) / step
        try:
            d = ctx.lu_solve(jac, ctx.matrix([-v for v in r]))
        except ZeroDivisionError as exc:
            raise ConvergenceError("singular Newton Jacobian", stage="moment_solver", diagnostics={"s": [float(v) for v in s]}) from exc
        t = ctx.mpf(1)
        # cap the step at half the gap to the nearest other s_i so that
        # bound states cannot cross or merge within one step
        for i in range(B):
            gaps = [abs(s[i] - s[j]) for j in range(B) if j != i]
            if gaps and abs(d[i]) > 0:
                t = min(t, min(gaps) / (2 * abs(d[i])))
        accepted = False
        while t > ctx.mpf(10) ** -8:
            cand = [s[i] + t * d[i] for i in range(B)]
            rc, solc = safe(cand)
            if rc is not None and norm(rc) < nr:
                s, r, sol, nr = cand, rc, solc, norm(rc)
                accepted = True
                break
            t /= 2
        history.append(float(nr))
        if not accepted:
            break
    srt = sorted(float(v) for v in s)
    if any(b - a < 1e-6 for a, b in zip(srt, srt[1:])):
        raise DegenerateNodesError(
            "bound states coalesced; retry with one bound state fewer",
            diagnostics={"s": srt},
        )
    if not nr <= tol * scale:
        raise ConvergenceError(
            f"multi-bound-state iteration stalled at residual {float(nr):.3e}",
            stage="moment_solver",
            diagnostics={"best_residual": float(nr), "s": [float(v) for v in s], "iterations": it, "history": history},
        )
    order = sorted(range(B), key=lambda i: float(-s[i] ** 2))
    bound = tuple((s[i], sol[i]) for i in order)
    exp = SpectralExpansion(tuple(sol[B:]), bound, c, h, dps)
    all_res = _equation_residuals(ctx, values, c, [s[i] for i in order], [sol[i] for i in order] + list(sol[B:]), range(L))
    info = {
        "mode": "multi",
        "bound_count": B,
        "constraint": constraint,
        "iterations": it,
        "residual_norm": float(nr),
        "equation_residual": float(max(abs(v) for v in all_res)),
        "f0_residual": exp.f0_residual(),
    }
    return replace(exp, info=info)

"""Gel'fand-Levitan reconstruction of the auxiliary potential.

Given F, the kernel K(x, t) solves, for each x,

    K(x, t) + F(x, t) + int_0^x K(x, s) F(s, t) ds = 0,      0 <= t <= x,

with F(x, t) = [F(x + t) + F(|x - t|)] / 2, and Q(x) = 2 d/dx K(x, x).

Each row x_j of a uniform grid is a small dense second-kind system
(Nystroem method with trapezoid weights).  All values of F the rows need
lie on multiples of the step, so the exponential sum over c_n is tabulated
once, in the working precision of the expansion, and only then rounded to
double.  Bound-state terms are handled separately (see :func:`solve_gl`).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import specfun
from .bound_states import assess
from .config import InversionConfig
from .errors import DomainError, InversionError, NonUniqueSolutionError
from .liouville import PotentialCurve, TransformParams, physical_potential
from .moment_solver import SpectralExpansion, evaluate_F, solve_multi_bs, solve_one_bs, solve_zero_bs
from .spectral import default_dps, moments
from .tuning import smoothness

RESIDUAL_TOL = 1e-9


@dataclass
class GLGrid:
    """Uniform grid x_j = j * step, j = 0..M, and the solved diagonal K(x_j, x_j)."""

    x_max: float
    step: float
    nodes: np.ndarray = None
    K_diag: np.ndarray = None
    residuals: np.ndarray = None

    def __post_init__(self):
        if not (math.isfinite(self.x_max) and self.x_max > 0):
            raise DomainError(f"x_max must be positive, got {self.x_max!r}")
        if not (math.isfinite(self.step) and self.step > 0):
            raise DomainError(f"step must be positive, got {self.step!r}")
        if self.nodes is None:
            self.nodes = np.arange(self.size) * self.step

    @classmethod
    def covering(cls, x_max, max_step):
        """Grid on [0, x_max] with the largest step not exceeding ``max_step``."""
        m = max(1, int(math.ceil(x_max / max_step - 1e-9)))
        return cls(x_max, x_max / m)

    @property
    def M(self):
        return int(round(self.x_max / self.step))

    @property
    def size(self):
        return self.M + 1


def kernel_F2(exp, x, t, dps=None):
    """Symmetric kernel F(x, t) = [F(x + t) + F(|x - t|)] / 2."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(x < 0) or np.any(t < 0):
        raise DomainError("kernel arguments must be non-negative")
    out = 0.5 * (evaluate_F(exp, x + t, dps) + evaluate_F(exp, np.abs(x - t), dps))
    return float(out) if np.ndim(out) == 0 else out


def tabulate_F(exp, step, count, dps=None):
    """F(m * step) for m = 0..count-1, summed in the expansion's precision."""
    dps = dps or exp.dps
    if dps is None:
        return evaluate_F(exp, np.arange(count) * step)
    ctx = specfun.mp_context(dps)
    h = ctx.mpf(step)
    terms = []
    for n, cn in enumerate(exp.c_coeffs):
        terms.append((ctx.mpf(cn), ctx.exp(-n * h)))
    for s, w in exp.bound_terms:
        terms.append((ctx.mpf(w), ctx.exp(ctx.mpf(s) * h)))
    cur = [coef for coef, _ in terms]
    out = np.empty(count)
    for m in range(count):
        out[m] = float(ctx.fsum(cur))
        cur = [v * ratio for v, (_, ratio) in zip(cur, terms)]
    return out


def _backward_error(A, X, R):
    """Normwise relative backward error of the computed solution of A X = R."""
    res = np.abs(A @ X - R).max(axis=0)
    scale = np.abs(A).sum(axis=1).max() * np.abs(X).max(axis=0) + np.abs(R).max(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    return float(np.max(res / scale))


def solve_gl(exp, grid):
    """Solve the discretised equation row by row and fill ``grid.K_diag``.

    Row j solves (I + F W) K = -F(x_j, .) on t_0..t_j, where W holds the
    trapezoid weights of [0, x_j].

    A bound-state term (b/2) e^{s u} of F contributes

        (b/4) e^{s t'} e^{s t} + (b/4) e^{s |t' - t|}

    to the kernel.  The first, separable part grows like e^{2 s x} and
    would swamp double precision, so it is eliminated exactly with the
    Woodbury identity; only the remainder is factorised numerically.
    Every linear solve of a row must have a normwise backward error below
    1e-9; a singular row raises :class:`NonUniqueSolutionError`.
    """
    M = grid.M
    step = grid.step
    cont = SpectralExpansion(exp.c_coeffs, (), exp.c, exp.h, exp.dps)
    ctab = tabulate_F(cont, step, 2 * M + 1)
    if not np.all(np.isfinite(ctab)):
        raise NonUniqueSolutionError("F is not finite on the grid", stage="gl_reconstruction")
    svals = np.array([float(v) for v, _ in exp.bound_terms])
    gam = np.array([0.5 * float(w) for _, w in exp.bound_terms])  # kernel weight of each term
    B = svals.size
    K_diag = np.empty(M + 1)
    residuals = np.empty(M + 1)
    for j in range(M + 1):
        idx = np.arange(j + 1)
        t = idx * step
        x = j * step
        diff = np.abs(idx[:, None] - idx[None, :])
        G = 0.5 * (ctab[idx[:, None] + idx[None, :]] + ctab[diff])
        rhs = -0.5 * (ctab[j + idx] + ctab[j - idx])
        for sv, g in zip(svals, gam):
            G += g * np.exp(sv * diff * step)
            rhs -= g * np.exp(sv * np.abs(x - t))
        w = np.full(j + 1, step)
        w[0] = w[-1] = 0.5 * step
        if j == 0:
            w[:] = 0.0
        A0 = np.eye(j + 1) + G * w[None, :]
        U = np.exp(np.outer(t, svals))  # separable factors e^{s t}
        ex = np.exp(svals * x)
        R = np.column_stack([rhs, U])
        try:
            Y = np.linalg.solve(A0, R)
            y0, YU = Y[:, 0], Y[:, 1:]
            UtW = (U * w[:, None]).T
            small = np.eye(B) + (UtW @ YU) * gam[None, :]
            # v = e^{s x} + U^T W K solves small v = U^T W y0 + e^{s x}
            v_rhs = UtW @ y0 + ex
            v = np.linalg.solve(small, v_rhs)
        except np.linalg.LinAlgError as exc:
            raise NonUniqueSolutionError(
                f"singular Gel'fand-Levitan system at x = {x:.4g}",
                stage="gl_reconstruction",
                diagnostics={"row": j},
            ) from exc
        K = y0 - YU @ (gam * v)
        res = max(_backward_error(A0, Y, R), _backward_error(small, v[:, None], v_rhs[:, None]) if B else 0.0)
        if not (np.all(np.isfinite(K)) and res < RESIDUAL_TOL):
            raise NonUniqueSolutionError(
                f"Gel'fand-Levitan row at x = {x:.4g} is numerically singular (residual {res:.2e})",
                stage="gl_reconstruction",
                diagnostics={"row": j, "residual": res, "cond": float(np.linalg.cond(A0))},
            )
        K_diag[j] = K[-1]
        residuals[j] = res
    grid.K_diag = K_diag
    grid.residuals = residuals
    return grid


def _derivative(y, h):
    """Fourth-order finite-difference derivative on a uniform grid."""
    n = y.size
    if n < 5:
        raise DomainError("at least 5 grid nodes are needed to differentiate K(x, x)")
    d = np.empty(n)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h)
    d[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12 * h)
    d[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / (12 * h)
    return d


def potential_from_K(grid, meta=None):
    """Q(x_j) = 2 dK(x, x)/dx at the grid nodes."""
    if grid.K_diag is None:
        raise DomainError("solve the grid before extracting the potential")
    Q = 2.0 * _derivative(np.asarray(grid.K_diag, dtype=float), grid.step)
    info = {"coordinate": "x"}
    info.update(meta or {})
    return PotentialCurve(grid.nodes.copy(), Q, info)


@dataclass
class ReconstructionReport:
    """Intermediate results and quality indicators of one inversion."""

    config: InversionConfig
    k: float
    a: float
    moments: tuple
    expansion: object
    auxiliary: PotentialCurve
    grid: GLGrid
    smoothness: float
    q_a_minus: float
    assessment: object = None
    extras: dict = field(default_factory=dict)

    @property
    def f0_residual(self):
        return self.expansion.f0_residual()

    @property
    def lambdas(self):
        return self.expansion.lambdas


def _staged(stage, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except InversionError as exc:
        if exc.stage is None:
            exc.stage = stage
        raise
    except ZeroDivisionError as exc:
        raise NonUniqueSolutionError(f"division by zero: {exc}", stage=stage) from exc


def _auto_mode(phases, cfg):
    try:
        found = assess(phases.k, phases.a, cfg.c, cfg.h, q0=cfg.assess_q0, with_weights=False)
    except DomainError:
        # k^2 <= q0: the model well is repulsive and binds nothing
        return cfg.with_params(mode="zero"), None
    if found.count == 0:
        return cfg.with_params(mode="zero"), found
    if found.count == 1:
        return cfg.with_params(mode="one", drop_c0=False), found
    return cfg.with_params(mode="multi", bs_count=found.count, initial_lambdas=found.lambdas, drop_c0=False), found


def _expansion(phases, cfg, mset):
    if cfg.mode == "auto":
        cfg, found = _auto_mode(phases, cfg)
        exp, _ = _expansion(phases, cfg, mset)
        return exp, found
    if cfg.mode == "zero":
        return solve_zero_bs(mset, drop_c0=cfg.drop_c0), None
    if cfg.mode == "one":
        return solve_one_bs(mset, trial_lambdas=cfg.trial_lambdas), None
    init = cfg.initial_lambdas
    assessment = None
    if init is None:
        assessment = assess(phases.k, phases.a, cfg.c, cfg.h, q0=cfg.assess_q0, with_weights=False)
        if assessment.count < cfg.bs_count:
            raise DomainError(
                f"assessment found {assessment.count} bound states, fewer than bs_count={cfg.bs_count}; "
                "pass initial_lambdas explicitly",
                stage="bound_states",
            )
        init = assessment.lambdas[: cfg.bs_count]
    exp = solve_multi_bs(
        mset, B=cfg.bs_count, init=init, constraint=cfg.constraint, max_iter=cfg.max_iter
    )
    return exp, assessment


def reconstruct(phases, cfg=None):
    """Potential q(r) from fixed-energy phase shifts.

    Runs phases -> moments -> expansion of F -> Gel'fand-Levitan kernel ->
    Q(x) -> q(r).  Errors carry the name of the stage that raised them.

    Returns
    -------
    curve : PotentialCurve
        q on the r grid a exp(x_j / c), increasing in r, ending at r = a.
    report : ReconstructionReport
    """
    cfg = cfg or InversionConfig()
    if cfg.n_phases is not None:
        phases = phases.truncated(cfg.n_phases)
    params = _staged("liouville", TransformParams, phases.a, cfg.c, phases.k)
    if not cfg.r0 < phases.a:
        raise DomainError(f"r0 = {cfg.r0} must lie below a = {phases.a}", stage="liouville")
    dps = cfg.dps or default_dps(phases.n_phases)
    mset = _staged("spectral_data", moments, phases, cfg.c, cfg.h, dps)
    exp, assessment = _staged("moment_solver", _expansion, phases, cfg, mset)

    r_min = cfg.effective_r_min(phases.a)
    x_max = abs(cfg.c) * math.log(phases.a / r_min)
    grid = GLGrid.covering(x_max, cfg.effective_step())
    _staged("gl_reconstruction", solve_gl, exp, grid)
    meta = {"k": phases.k, "a": phases.a, "c": cfg.c, "h": cfg.h}
    Q = _staged("gl_reconstruction", potential_from_K, grid, meta)
    curve = _staged("liouville", physical_potential, Q, params)
    s = _staged("tuning", smoothness, curve, cfg.r0, phases.a)
    report = ReconstructionReport(
        config=cfg,
        k=phases.k,
        a=phases.a,
        moments=tuple(float(v) for v in mset.mu),
        expansion=exp,
        auxiliary=Q,
        grid=grid,
        smoothness=s,
        q_a_minus=float(curve.values[-1]),
        assessment=assessment,
        extras={"mode_used": ("zero", "one")[exp.n_bound] if exp.n_bound < 2 else "multi", "r_min": r_min, "x_max": x_max, "dps": dps, "K00": float(grid.K_diag[0])},
    )
    return curve, report

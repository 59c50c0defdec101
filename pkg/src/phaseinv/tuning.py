"""Smoothness of a reconstruction and a grid search over (c, h).

The free parameters c and h do not change the exact answer but do change
the truncated one.  Spurious structure in a reconstruction shows up as
extra variation, so the total variation of q on [r0, a] serves as the
figure of merit, and the best (c, h) on a grid is the one minimising it.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from joblib import Parallel, delayed
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, InversionError, SearchFailedError


def smoothness(q, r0, a):
    """Total variation of ``q`` (a PotentialCurve on an r grid) over [r0, a].

    The samples are interpolated with a monotone cubic, resampled at ten
    times the node density inside [r0, a], and the absolute first
    differences are summed.  For smooth q this equals the integral of |q'|.
    """
    grid, values = q.grid, q.values
    if grid.size < 10:
        raise DomainError("smoothness needs at least 10 samples")
    if not r0 < a:
        raise DomainError(f"r0 = {r0} must lie below a = {a}")
    tol = 1e-9 * max(1.0, abs(a))
    if grid[0] > r0 + tol or grid[-1] < a - tol:
        raise DomainError(f"samples cover [{grid[0]}, {grid[-1]}], not [{r0}, {a}]")
    interp = PchipInterpolator(grid, values)
    inside = grid[(grid > r0) & (grid < a)]
    knots = np.concatenate(([r0], inside, [a]))
    fine = [np.linspace(lo, hi, 11)[:-1] for lo, hi in zip(knots[:-1], knots[1:])]
    pts = np.concatenate(fine + [[a]])
    return float(np.sum(np.abs(np.diff(interp(pts)))))


@dataclass
class TuneGrid:
    """Candidate values of c and h and, after a search, the per-cell results.

    ``results`` maps (c, h) to a dict with key ``'s'`` on success or
    ``'error'`` on failure.
    """

    c_values: tuple
    h_values: tuple
    r0: float = 0.05
    results: dict = field(default_factory=dict)

    def __post_init__(self):
        self.c_values = tuple(float(v) for v in self.c_values)
        self.h_values = tuple(float(v) for v in self.h_values)
        if not self.c_values or not self.h_values:
            raise DomainError("the tuning grid is empty")
        if any(not (math.isfinite(c) and c < 0) for c in self.c_values):
            raise DomainError("all c values must be negative")
        if any(not math.isfinite(h) for h in self.h_values):
            raise DomainError("all h values must be finite")
        if not self.r0 > 0:
            raise DomainError("r0 must be positive")

    def cells(self):
        return [(c, h) for c in self.c_values for h in self.h_values]


@dataclass(frozen=True)
class TuneResult:
    """Winner of a grid search plus every cell's outcome."""

    c: float
    h: float
    s: float
    grid: TuneGrid


def _run_cell(phases, cfg, c, h):
    from .gelfand_levitan import reconstruct

    try:
        _, report = reconstruct(phases, cfg.with_params(c=c, h=h))
    except InversionError as exc:
        return {"error": str(exc), "stage": exc.stage}
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        return {"error": f"{type(exc).__name__}: {exc}", "stage": None}
    return {
        "s": report.smoothness,
        "lambdas": report.expansion.lambdas,
        "f0_residual": report.f0_residual,
        "q_a_minus": report.q_a_minus,
    }


def _rank_key(cell, s):
    c, h = cell
    return (s, abs(c), abs(h), c, h)


def grid_search(phases, grid, cfg, n_jobs=1, tie_tol=1e-12):
    """Reconstruct on every (c, h) cell and return the smoothest.

    Failed cells are recorded in ``grid.results`` and skipped.  Cells whose
    s agree within ``tie_tol`` are ranked by smaller |c|, then smaller |h|,
    so the result does not depend on the cell order.
    """
    cfg = cfg.with_params(r0=grid.r0)
    cells = sorted(set(grid.cells()))
    outcomes = Parallel(n_jobs=n_jobs)(delayed(_run_cell)(phases, cfg, c, h) for c, h in cells)
    grid.results = dict(zip(cells, outcomes))
    ok = [(cell, out["s"]) for cell, out in grid.results.items() if "s" in out and math.isfinite(out["s"])]
    if not ok:
        raise SearchFailedError(
            "every cell of the tuning grid failed",
            stage="tuning",
            diagnostics={f"{c},{h}": out.get("error") for (c, h), out in grid.results.items()},
        )
    s_min = min(s for _, s in ok)
    near = [(cell, s) for cell, s in ok if s - s_min <= tie_tol]
    best_cell, best_s = min(near, key=lambda item: (abs(item[0][0]), abs(item[0][1]), item[0]))
    return TuneResult(best_cell[0], best_cell[1], best_s, grid)

"""Change of variables between the radial problem and the half-line problem.

With x = c ln(r/a) (c < 0) the interval (0, a] maps onto [0, inf), r = a
maps to x = 0, and the fixed-energy radial equation becomes a Schroedinger
equation on the half line with potential

    Q(x) = (a/c)^2 exp(2x/c) [q(a exp(x/c)) - k^2].

Uniform grids in x correspond to geometric grids in r.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class TransformParams:
    """Scale parameter ``c < 0`` together with the support radius and wavenumber."""

    a: float
    c: float
    k: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"a must be positive, got {self.a!r}")
        if not (math.isfinite(self.c) and self.c < 0):
            raise DomainError(f"c must be strictly negative, got {self.c!r}")
        if not (math.isfinite(self.k) and self.k > 0):
            raise DomainError(f"k must be positive, got {self.k!r}")

    @property
    def free_depth(self):
        """-(ka/c)^2, the value of Q where q vanishes at x = 0."""
        return -((self.k * self.a / self.c) ** 2)


@dataclass(frozen=True)
class PotentialCurve:
    """Samples of a potential on a strictly increasing grid.

    ``meta`` carries the context (k, a, c, h, and the coordinate name).
    """

    grid: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape:
            raise DomainError("grid and values must be 1-D arrays of equal length")
        if g.size == 0:
            raise DomainError("empty potential curve")
        if np.any(np.diff(g) <= 0):
            raise DomainError("grid must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise DomainError("potential values must be finite")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.grid.size

    def __call__(self, points):
        """Linear interpolation inside the grid; outside raises DomainError."""
        p = np.asarray(points, dtype=float)
        lo, hi = self.grid[0], self.grid[-1]
        tol = 1e-12 * max(1.0, abs(hi))
        if np.any(p < lo - tol) or np.any(p > hi + tol):
            raise DomainError(f"evaluation outside [{lo}, {hi}]")
        return np.interp(p, self.grid, self.values)


def x_of_r(r, p):
    """x = c ln(r/a) for 0 < r <= a."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r_arr)) or np.any(r_arr <= 0) or np.any(r_arr > p.a):
        raise DomainError(f"r must lie in (0, a={p.a}]")
    out = p.c * np.log(r_arr / p.a)
    # log(1) is exactly 0, but c * 0.0 would print as -0.0
    out = out + 0.0
    return float(out) if np.ndim(r) == 0 else out


def r_of_x(x, p):
    """r = a exp(x/c) for x >= 0."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr < 0):
        raise DomainError("x must be finite and non-negative")
    out = p.a * np.exp(x_arr / p.c)
    return float(out) if np.ndim(x) == 0 else out


def auxiliary_potential(q, p, x):
    """Q(x) for the radial potential ``q`` (any callable clamped to its support)."""
    x_arr = np.asarray(x, dtype=float)
    r = r_of_x(x_arr, p)
    scale = (p.a / p.c) ** 2 * np.exp(2.0 * x_arr / p.c)
    out = scale * (np.asarray(q(r), dtype=float) - p.k * p.k)
    return float(out) if np.ndim(x) == 0 else out


def physical_potential(Q, p):
    """Map Q sampled on an x grid to q on the corresponding (increasing) r grid."""
    if len(Q.grid) == 0:
        raise DomainError("empty auxiliary potential")
    x = Q.grid
    if x[0] < 0:
        raise DomainError("auxiliary grid must start at x >= 0")
    r = r_of_x(x, p)
    q = p.k * p.k + (p.c * p.c) / (r * r) * Q.values
    meta = dict(Q.meta)
    meta.update(coordinate="r", a=p.a, c=p.c, k=p.k)
    # x increasing means r decreasing; flip to keep the grid increasing
    return PotentialCurve(r[::-1].copy(), q[::-1].copy(), meta)


def auxiliary_curve(q, p, x_grid):
    """Q sampled on ``x_grid`` as a PotentialCurve."""
    x_grid = np.asarray(x_grid, dtype=float)
    return PotentialCurve(x_grid, auxiliary_potential(q, p, x_grid), {"coordinate": "x", "a": p.a, "c": p.c, "k": p.k})


def q_norm_bound(q, p, n=4001):
    """Upper bound (ak)^2/(2|c|) + (a/c^2) int_0^a r |q(r)| dr for int_0^inf |Q|."""
    r = np.linspace(0.0, p.a, n)
    integral = float(np.trapezoid(r * np.abs(q(r)), r))
    return (p.a * p.k) ** 2 / (2 * abs(p.c)) + p.a / p.c ** 2 * integral

"""m-function values and moments of the auxiliary half-line problem.

A phase shift delta_l fixes the Weyl m-function of the auxiliary operator at
lambda_l = -(l + 1/2)^2 / c^2:

    m(lambda_l) = (ka/c) [J'(ka) - tan(delta_l) Y'(ka)] / [J(ka) - tan(delta_l) Y(ka)],

with Bessel functions of order l + 1/2.  The free operator (Q = 0) has
m0(lambda) = -sqrt(-lambda).  Each m value turns into one moment

    mu_l = (l + 1/2) / (ka R_l - c h) - 1,      R_l = [J' - tan Y'] / [J - tan Y],

of the spectral data (bound-state contributions are left to the solver).

The moment problem downstream amplifies rounding error by many orders of
magnitude, so :func:`moments` evaluates in extended precision by default.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import specfun
from .errors import DomainError, PoleError, SingularMomentError

POLE_RTOL = 1e-12


def default_dps(n_moments):
    """Working precision for ``n_moments`` moments (grows with the system size)."""
    return max(30, 20 + 2 * int(n_moments))


@dataclass(frozen=True)
class MomentSet:
    """Moments mu_0..mu_{L-1} computed at (ka, c, h).

    ``mu`` holds ``mpmath.mpf`` values on the extended path and floats
    otherwise; ``dps`` records which.
    """

    mu: tuple
    ka: float
    c: float
    h: float
    dps: int = None

    def __post_init__(self):
        if len(self.mu) < 1:
            raise DomainError("a moment set needs at least one moment")
        for l, v in enumerate(self.mu):
            if not math.isfinite(float(v)):
                raise DomainError(f"moment mu_{l} is not finite")
        object.__setattr__(self, "mu", tuple(self.mu))

    def __len__(self):
        return len(self.mu)

    def as_array(self):
        return np.array([float(v) for v in self.mu])

    def head(self, n):
        if not 1 <= n <= len(self.mu):
            raise DomainError(f"cannot take {n} of {len(self.mu)} moments")
        return MomentSet(self.mu[:n], self.ka, self.c, self.h, self.dps)


def _check_c(c):
    if not (math.isfinite(c) and c < 0):
        raise DomainError(f"c must be strictly negative, got {c!r}")


def _ratio(l, delta, ka, dps):
    """R_l = [J' - tan Y'] / [J - tan Y] at argument ka, order l + 1/2."""
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l!r}")
    if not ka > 0:
        raise DomainError(f"ka must be positive, got {ka!r}")
    l = int(l)
    nu = l + 0.5
    if dps is None:
        ctx = math
        d = float(delta)
    else:
        ctx = specfun.mp_context(dps)
        d = ctx.mpf(delta)
        ka = ctx.mpf(ka)
    # distance of delta from the nearest odd multiple of pi/2
    off = abs(float((d - ctx.pi / 2) - ctx.pi * round(float((d - ctx.pi / 2) / ctx.pi))))
    if off < POLE_RTOL:
        raise PoleError(f"tan(delta_{l}) overflows: delta is within {off:.1e} of pi/2 mod pi")
    t = ctx.tan(d)
    J = specfun.bessel_j(nu, ka, dps)
    Y = specfun.bessel_y_halfint(l, ka, dps)
    Jp = specfun.bessel_j_prime(nu, ka, dps)
    Yp = specfun.bessel_y_halfint_prime(l, ka, dps)
    den = J - t * Y
    scale = abs(J) + abs(t * Y)
    if abs(den) < POLE_RTOL * scale:
        raise PoleError(
            f"phase shift delta_{l} places the m-function at a pole "
            f"(|J - tan Y| = {float(abs(den)):.3e})",
            diagnostics={"l": l, "delta": float(delta)},
        )
    return (Jp - t * Yp) / den


def m_value(l, delta_l, ka, c, dps=None):
    """m(-(l+1/2)^2/c^2) from the phase shift delta_l."""
    _check_c(c)
    R = _ratio(l, delta_l, ka, dps)
    if dps is None:
        return ka / c * R
    ctx = specfun.mp_context(dps)
    return ctx.mpf(ka) / ctx.mpf(c) * R


def m0_value(l, c):
    """Free m-function at the same point: (l + 1/2)/c."""
    _check_c(c)
    return (l + 0.5) / c


def moment(l, delta_l, ka, c, h, dps=None):
    """Moment mu_l = (l + 1/2) / (ka R_l - c h) - 1."""
    _check_c(c)
    if not math.isfinite(h):
        raise DomainError(f"h must be finite, got {h!r}")
    R = _ratio(l, delta_l, ka, dps)
    if dps is None:
        den = ka * R - c * h
        zero_tol = POLE_RTOL * (abs(ka * R) + abs(c * h))
        nu = l + 0.5
    else:
        ctx = specfun.mp_context(dps)
        den = ctx.mpf(ka) * R - ctx.mpf(c) * ctx.mpf(h)
        zero_tol = POLE_RTOL * (abs(ctx.mpf(ka) * R) + abs(ctx.mpf(c) * ctx.mpf(h)))
        nu = ctx.mpf(l) + ctx.mpf(1) / 2
    if abs(den) <= zero_tol:
        raise SingularMomentError(
            f"moment mu_{l} is singular: m(lambda_{l}) equals h",
            diagnostics={"l": l, "h": h},
        )
    return nu / den - 1


def moments(phases, c, h, dps="auto"):
    """Moments for every phase in a :class:`PhaseShiftSet`.

    Parameters
    ----------
    phases : PhaseShiftSet
    c, h : float
    dps : int, None or 'auto'
        Decimal digits of the extended path; ``None`` uses double precision,
        ``'auto'`` picks :func:`default_dps` for the number of phases.
    """
    n = phases.n_phases
    if dps == "auto":
        dps = default_dps(n)
    ka = phases.k * phases.a
    if dps is not None:
        ctx = specfun.mp_context(dps)
        ka = ctx.mpf(phases.k) * ctx.mpf(phases.a)
    mu = tuple(moment(l, d, ka, c, h, dps) for l, d in enumerate(phases.deltas))
    return MomentSet(mu, phases.k * phases.a, float(c), float(h), dps)

"""Fixed-energy phase shifts of a compactly supported radial potential.

The radial equation

    phi'' = [l(l+1)/r^2 + q(r) - k^2] phi,    phi ~ r^(l+1) at the origin,

is integrated up to the support radius ``a`` and matched to the free exterior
solution sqrt(r) [J_{l+1/2}(kr) - tan(delta_l) Y_{l+1/2}(kr)].

Integration uses the substitution phi = r^(l+1) u(r) in the variable
t = ln r, which removes the centrifugal singularity:

    u_tt + (2l + 1) u_t = r^2 (q(r) - k^2) u.

Uniform steps in t are logarithmic steps in r, so the origin region is
resolved without stiffness, and u stays of order one for every l.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from . import specfun
from .errors import DomainError, NumericalError

_KINDS = ("constant", "gauss", "woods_saxon", "tabulated")


@dataclass(frozen=True)
class RadialPotential:
    """A radial potential q(r) that vanishes for r >= a.

    Use the constructors :meth:`constant`, :meth:`gauss`,
    :meth:`woods_saxon` and :meth:`tabulated` rather than building the
    parameter map by hand.

    Parameters
    ----------
    kind : {'constant', 'gauss', 'woods_saxon', 'tabulated'}
    params : dict
        Shape parameters; the keys depend on ``kind``.
    a : float
        Support radius.
    """

    kind: str
    params: dict
    a: float
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown potential kind {self.kind!r}; expected one of {_KINDS}")
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"support radius must be positive and finite, got {self.a!r}")

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, value, a):
        """q(r) = value for r < a."""
        return cls("constant", {"value": float(value)}, float(a))

    @classmethod
    def gauss(cls, depth, width, a):
        """q(r) = depth * exp(-width * r^2) for r < a."""
        return cls("gauss", {"depth": float(depth), "width": float(width)}, float(a))

    @classmethod
    def woods_saxon(cls, depth, radius, diffuseness, a):
        """q(r) = depth / (1 + exp((r - radius) / diffuseness)) for r < a."""
        if diffuseness <= 0:
            raise DomainError("Woods-Saxon diffuseness must be positive")
        return cls(
            "woods_saxon",
            {"depth": float(depth), "radius": float(radius), "diffuseness": float(diffuseness)},
            float(a),
        )

    @classmethod
    def tabulated(cls, r, q, a=None):
        """Monotone cubic (PCHIP) interpolant through samples ``(r, q)``.

        The samples must start at or before a small radius; below the first
        node the first value is held constant.  ``a`` defaults to the last node.
        """
        r = np.asarray(r, dtype=float)
        q = np.asarray(q, dtype=float)
        if r.ndim != 1 or r.shape != q.shape or r.size < 2:
            raise DomainError("tabulated potential needs matching 1-D arrays with at least 2 samples")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(q))):
            raise DomainError("tabulated potential contains non-finite samples")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise DomainError("tabulated radii must be non-negative and strictly increasing")
        a = float(r[-1] if a is None else a)
        # r*q must be integrable near the origin: with bounded samples and a
        # held first value this only fails when the table is wildly singular.
        head = r <= min(a, r[0] + 0.1 * (a - r[0]))
        if head.sum() >= 2 and not math.isfinite(float(np.trapezoid(np.abs(r[head] * q[head]), r[head]))):
            raise DomainError("r*q(r) is not integrable near the origin")
        interp = PchipInterpolator(r, q, extrapolate=False)
        return cls("tabulated", {"r": tuple(r), "q": tuple(q)}, a, interp)

    # -- evaluation --------------------------------------------------------
    def profile(self, r):
        """Interior formula without the support cut (valid for 0 <= r <= a)."""
        r = np.asarray(r, dtype=float)
        p = self.params
        if self.kind == "constant":
            return np.full_like(r, p["value"])
        if self.kind == "gauss":
            return p["depth"] * np.exp(-p["width"] * r * r)
        if self.kind == "woods_saxon":
            z = np.clip((r - p["radius"]) / p["diffuseness"], -700.0, 700.0)
            return p["depth"] / (1.0 + np.exp(z))
        rr = np.asarray(p["r"])
        out = self._interp(np.clip(r, rr[0], rr[-1]))
        return np.where(r > rr[-1], 0.0, out)

    def __call__(self, r):
        """q(r), zero for r >= a."""
        r = np.asarray(r, dtype=float)
        return np.where(r >= self.a, 0.0, self.profile(np.minimum(r, self.a)))

    def value_at_origin(self):
        return float(self.profile(0.0))


@dataclass(frozen=True)
class PhaseShiftSet:
    """Phase shifts delta_0..delta_N at wavenumber ``k`` for support radius ``a``.

    ``deltas`` may hold ``mpmath.mpf`` values; high-precision inputs are
    kept as given so that the moment computation can use all their digits.
    """

    k: float
    a: float
    deltas: tuple

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise DomainError(f"wavenumber must be positive, got {self.k!r}")
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"support radius must be positive, got {self.a!r}")
        deltas = tuple(self.deltas)
        if not deltas:
            raise DomainError("at least one phase shift is required")
        for l, d in enumerate(deltas):
            if not math.isfinite(float(d)):
                raise DomainError(f"phase shift for l={l} is not finite")
        object.__setattr__(self, "deltas", deltas)

    @property
    def n_phases(self):
        return len(self.deltas)

    @property
    def ka(self):
        return self.k * self.a

    def as_array(self):
        return np.array([float(d) for d in self.deltas])

    def truncated(self, n):
        """The first ``n`` phases."""
        if not 1 <= n <= len(self.deltas):
            raise DomainError(f"cannot take {n} of {len(self.deltas)} phases")
        return PhaseShiftSet(self.k, self.a, self.deltas[:n])


def _tan_to_delta(t):
    """Phase in (-pi/2, pi/2] from its tangent (inf maps to pi/2)."""
    return math.pi / 2 if math.isinf(t) else math.atan(t)


def _exterior(l, k, a):
    """sqrt(r) J and sqrt(r) Y and their r-derivatives at r = a."""
    x = k * a
    nu = l + 0.5
    j = specfun.bessel_j(nu, x)
    y = specfun.bessel_y_halfint(l, x)
    jp = specfun.bessel_j_prime(nu, x)
    yp = specfun.bessel_y_halfint_prime(l, x)
    sa = math.sqrt(a)
    A, B = sa * j, sa * y
    dA = j / (2 * sa) + sa * k * jp
    dB = y / (2 * sa) + sa * k * yp
    return A, B, dA, dB


def _match(l, k, a, u, ut):
    """tan(delta) from the interior state (u, u_t) at r = a.

    Written as a ratio of two cross products so that a node of phi at
    r = a (u = 0) needs no special case.
    """
    A, B, dA, dB = _exterior(l, k, a)
    g = (l + 1) * u + ut  # a * phi'(a) / a^(l+1)
    num = g * A - a * u * dA
    den = g * B - a * u * dB
    if den == 0.0:
        return math.inf
    return num / den


def _phase_one(pot, k, l, tol, eps):
    a = pot.a
    r0 = eps * a
    q0 = pot.value_at_origin()
    alpha = (q0 - k * k) / (2.0 * (2 * l + 3))
    k2 = k * k

    def rhs(t, y):
        r = math.exp(t)
        qv = float(pot.profile(r))
        return (y[1], r * r * (qv - k2) * y[0] - (2 * l + 1) * y[1])

    t0, t1 = math.log(r0), math.log(a)
    y0 = (1.0 + alpha * r0 * r0, 2.0 * alpha * r0 * r0)
    sol = solve_ivp(rhs, (t0, t1), y0, method="DOP853", rtol=tol, atol=tol * 1e-3)
    if not sol.success:
        raise NumericalError(
            f"radial integration failed for l={l}: {sol.message}",
            stage="forward",
            diagnostics={"l": l, "nfev": sol.nfev, "t_reached": float(sol.t[-1])},
        )
    u, ut = sol.y[0, -1], sol.y[1, -1]
    return _tan_to_delta(_match(l, k, a, u, ut))


def solve_phase_shifts(pot, k, l_max, ode_tol=1e-10, eps=1e-6):
    """Phase shifts delta_0..delta_{l_max} of ``pot`` at wavenumber ``k``.

    Parameters
    ----------
    pot : RadialPotential
    k : float
        Wavenumber, > 0.
    l_max : int
        Highest partial wave.
    ode_tol : float
        Relative tolerance of the integrator, in [1e-12, 1e-6].
    eps : float
        Start radius as a fraction of ``a``.

    Returns
    -------
    PhaseShiftSet
    """
    if not (math.isfinite(k) and k > 0):
        raise DomainError(f"wavenumber must be positive, got {k!r}")
    if int(l_max) != l_max or l_max < 0:
        raise DomainError(f"l_max must be a non-negative integer, got {l_max!r}")
    if not 1e-12 <= ode_tol <= 1e-6:
        raise DomainError(f"ode_tol must lie in [1e-12, 1e-6], got {ode_tol!r}")
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    deltas = tuple(_phase_one(pot, k, l, ode_tol, eps) for l in range(int(l_max) + 1))
    return PhaseShiftSet(float(k), pot.a, deltas)


def constant_well_phase_shift(C, a, k, l, dps=None):
    """Analytic phase shift of q(r) = C for r < a.

    The interior solution is sqrt(r) J_{l+1/2}(kappa r) with
    kappa = sqrt(k^2 - C) when C < k^2, sqrt(r) I_{l+1/2}(kappa r) with
    kappa = sqrt(C - k^2) when C > k^2, and r^(l+1) when C = k^2.

    With ``dps`` set the result is an ``mpmath.mpf`` correct to about
    ``dps`` digits, which the inversion needs for long phase lists.
    """
    if not (k > 0 and a > 0):
        raise DomainError("k and a must be positive")
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l!r}")
    l = int(l)
    nu = l + 0.5
    if dps is None:
        ctx, conv = math, float
    else:
        ctx = specfun.mp_context(dps + 10)
        conv = ctx.mpf
    C, a, k = conv(C), conv(a), conv(k)
    diff = k * k - C
    if diff > 0:
        kap = ctx.sqrt(diff)
        logd = kap * specfun.bessel_j_prime(nu, kap * a, dps and dps + 10) / specfun.bessel_j(
            nu, kap * a, dps and dps + 10
        )
        logd = logd + 1 / (2 * a)
    elif diff < 0:
        kap = ctx.sqrt(-diff)
        logd = kap * specfun.bessel_i_prime(nu, kap * a, dps and dps + 10) / specfun.bessel_i(
            nu, kap * a, dps and dps + 10
        )
        logd = logd + 1 / (2 * a)
    else:
        logd = (l + 1) / a
    x = k * a
    d = dps and dps + 10
    j = specfun.bessel_j(nu, x, d)
    y = specfun.bessel_y_halfint(l, x, d)
    jp = specfun.bessel_j_prime(nu, x, d)
    yp = specfun.bessel_y_halfint_prime(l, x, d)
    shift = 1 / (2 * a) - logd
    num = k * jp + shift * j
    den = k * yp + shift * y
    if dps is None:
        return _tan_to_delta(num / den) if den != 0 else math.pi / 2
    out = specfun.mp_context(dps)
    return out.mpf(ctx.atan(num / den)) if den != 0 else out.pi / 2


def constant_well_phases(C, a, k, n_phases, dps=None):
    """PhaseShiftSet of a constant well from the analytic formula."""
    deltas = tuple(constant_well_phase_shift(C, a, k, l, dps) for l in range(n_phases))
    return PhaseShiftSet(float(k), float(a), deltas)

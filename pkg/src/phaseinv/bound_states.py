"""Bound states of the exponential well Q(x) = -s exp(-2 t x) on the half line.

Far from the origin (x large, r near 0) the auxiliary potential decays like
an exponential well, and for q = 0 near r = a it is exactly one with

    s = (kappa a / c)^2,    t = 1/|c|,    kappa = k.

Solutions are J_mu(sqrt(s)/t exp(-t x)) with mu = sqrt(-lambda)/t, and the
boundary condition psi'(0) = h psi(0) places the bound states at the roots of

    J'_mu(kappa a) + (h / sqrt(s)) J_mu(kappa a) = 0,       mu > 0.

These positions seed the multi-bound-state solver and decide how many
bound-state terms the expansion of F needs.
"""

from dataclasses import dataclass, field
import math

from . import specfun
from .errors import DomainError, NumericalError

SCAN_STEP = 0.05
SCAN_MARGIN = 5.0
ROOT_TOL = 1e-10
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class BoundStateSet:
    """Positions lambda_i (increasing, negative) and optional step heights b_i."""

    count: int
    lambdas: tuple
    weights: tuple = None
    flags: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if self.count != len(lam):
            raise DomainError(f"count {self.count} does not match {len(lam)} positions")
        if any(v >= 0 for v in lam):
            raise DomainError("bound-state positions must be negative")
        if any(b <= a for a, b in zip(lam, lam[1:])):
            raise DomainError("bound-state positions must be strictly increasing")
        if self.weights is not None:
            w = tuple(float(v) for v in self.weights)
            if len(w) != len(lam):
                raise DomainError("one weight per bound state is required")
            if any(v <= 0 for v in w):
                raise DomainError("step heights must be positive")
            object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class ExpWellParams:
    """Exponential well Q(x) = -s exp(-2 t x) with boundary parameter h."""

    s: float
    t: float
    h: float
    kappa_a: float

    def __post_init__(self):
        for name in ("s", "t", "kappa_a"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if not math.isfinite(self.h):
            raise DomainError("h must be finite")
        if not math.isclose(self.s, (self.kappa_a * self.t) ** 2, rel_tol=1e-9):
            raise DomainError("inconsistent well: s must equal (kappa_a * t)^2")

    @classmethod
    def from_scattering(cls, k, a, c, h, q0=0.0):
        """Well matched to the auxiliary potential at x = 0.

        ``kappa^2 = k^2 - q0``.  With ``q0 = 0`` the well reproduces Q exactly
        wherever q vanishes near r = a; pass the interior value of a
        constant potential to model the whole well instead.
        """
        if not c < 0:
            raise DomainError(f"c must be negative, got {c!r}")
        kap2 = k * k - q0
        if not kap2 > 0:
            raise DomainError(f"k^2 - q0 = {kap2} must be positive for a binding well")
        kappa_a = math.sqrt(kap2) * a
        t = 1.0 / abs(c)
        return cls((kappa_a * t) ** 2, t, float(h), kappa_a)

    @property
    def x0(self):
        """Bessel argument sqrt(s)/t, equal to kappa a."""
        return self.kappa_a


def _bisect(f, lo, hi, flo, tol):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _roots(f, lo, hi, step, tol, skip_lo=True):
    """Roots of f on (lo, hi] by sign-change bracketing and bisection."""
    out = []
    n = max(1, int(math.ceil((hi - lo) / step)))
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    prev_x, prev_f = xs[0], f(xs[0])
    if prev_f == 0.0 and not skip_lo:
        out.append(prev_x)
    for x in xs[1:]:
        fx = f(x)
        if fx == 0.0:
            out.append(x)
        elif prev_f != 0.0 and (fx < 0) != (prev_f < 0):
            out.append(_bisect(f, prev_x, x, prev_f, tol))
        prev_x, prev_f = x, fx
    return out


def bessel_zeros(nu, upto, step=0.1, tol=1e-12):
    """Positive zeros of J_nu below ``upto`` (own bracketing root finder)."""
    return _roots(lambda x: specfun.bessel_j(nu, x), 1e-6, upto, step, tol)


def sector_boundaries(kappa_a_max=14.0):
    """kappa a values where the h = 0 bound-state count changes (zeros of J_1)."""
    return bessel_zeros(1.0, kappa_a_max)


def count_bound_states_h0(kappa_a):
    """Number of bound states at h = 0: zeros of J_1 on [0, kappa a), origin included.

    Returns
    -------
    int
        The count.  ``count_bound_states_h0.last_flags`` is not used; call
        :func:`count_bound_states_h0_flagged` for the boundary warning.
    """
    return count_bound_states_h0_flagged(kappa_a)[0]


def count_bound_states_h0_flagged(kappa_a):
    """(count, near_boundary) with the half-open convention at sector edges."""
    if not (math.isfinite(kappa_a) and kappa_a > 0):
        raise DomainError(f"kappa_a must be positive, got {kappa_a!r}")
    zeros = bessel_zeros(1.0, kappa_a + 0.2)
    near = any(abs(z - kappa_a) <= BOUNDARY_TOL for z in zeros)
    below = [z for z in zeros if z < kappa_a]
    return 1 + len(below), near


def _condition(p):
    x0 = p.x0
    ratio = p.h / math.sqrt(p.s)

    def f(mu):
        return specfun.bessel_j_prime(mu, x0) + ratio * specfun.bessel_j(mu, x0)

    return f


def bound_state_positions(p, with_weights=False):
    """All bound states of the well, by a scan in mu = sqrt(-lambda)/t.

    The scan runs over (0, sqrt(s)/t + 5] in steps of 0.05 and each bracket
    is refined by bisection to 1e-10 in mu.  Orders are capped at the
    Bessel envelope.
    """
    mu_max = min(math.sqrt(p.s) / p.t + SCAN_MARGIN, specfun.NU_MAX - 1.0)
    if p.x0 > specfun.X_MAX:
        raise DomainError(f"kappa a = {p.x0} exceeds the Bessel envelope")
    mus = [m for m in _roots(_condition(p), 0.0, mu_max, SCAN_STEP, ROOT_TOL) if m > 0]
    lambdas = sorted(-((m * p.t) ** 2) for m in mus)
    weights = None
    if with_weights:
        weights = tuple(step_height(lam, p) for lam in lambdas)
        if any(w <= 0 for w in weights):
            weights = None
    return BoundStateSet(len(lambdas), tuple(lambdas), weights)


def step_height(lambda0, p):
    """Spectral jump b at a bound state lambda0.

    b = 2 t sqrt(-lambda0) J / (sqrt(s) J^(1,1) + h J^(1,0)), the Bessel
    functions taken at order sqrt(-lambda0)/t and argument sqrt(s)/t;
    superscripts count derivatives in order and in argument.
    """
    if not lambda0 < 0:
        raise DomainError("lambda0 must be negative")
    mu = math.sqrt(-lambda0) / p.t
    x0 = p.x0
    cond = specfun.bessel_j_prime(mu, x0) + p.h / math.sqrt(p.s) * specfun.bessel_j(mu, x0)
    if abs(cond) > 1e-8:
        raise DomainError(f"lambda0 = {lambda0} does not satisfy the bound-state condition (residual {cond:.2e})")
    j = specfun.bessel_j(mu, x0)
    j10 = specfun.bessel_j_dnu(mu, x0)
    j11 = specfun.bessel_j_prime_dnu(mu, x0)
    den = math.sqrt(p.s) * j11 + p.h * j10
    if abs(den) < 1e-10:
        raise NumericalError("degenerate residue: the m-function has a vanishing derivative here")
    return 2.0 * p.t * math.sqrt(-lambda0) * j / den


def _first_zero(nu, index):
    zeros = bessel_zeros(nu, 20.0)
    return zeros[index - 1]


def reducibility_window(kappa_a):
    """Where a suitable h brings the bound-state count down to one.

    Returns ``'already_one'`` below the first positive zero of J'_0,
    ``'reducible'`` between it and the second zero of J_0, and
    ``'outside_lemma'`` beyond.
    """
    if not (math.isfinite(kappa_a) and kappa_a > 0):
        raise DomainError(f"kappa_a must be positive, got {kappa_a!r}")
    jp02 = _first_zero(1.0, 1)  # J'_0 = -J_1, counting x = 0 as the first zero
    j02 = _first_zero(0.0, 2)
    if kappa_a < jp02:
        return "already_one"
    if kappa_a < j02:
        return "reducible"
    return "outside_lemma"


def assess(k, a, c, h=0.0, q0=0.0, with_weights=True):
    """Bound states of the exponential-well model of a scattering setup."""
    p = ExpWellParams.from_scattering(k, a, c, h, q0)
    out = bound_state_positions(p, with_weights=with_weights)
    flags = {"kappa_a": p.kappa_a, "model": "exponential well", "q0": q0}
    return BoundStateSet(out.count, out.lambdas, out.weights, flags)

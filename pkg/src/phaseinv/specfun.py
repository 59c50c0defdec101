"""Real-order Bessel functions and the Gamma function.

Two arithmetic paths share one algorithm:

* ``dps=None`` evaluates in double precision and returns ``float``.
  Ascending series are summed with ``math.fsum``; when the series loses
  more than four digits to cancellation (large argument, or near a zero)
  the sum is redone in extended precision.
* ``dps=<int>`` evaluates with ``dps`` significant decimal digits and
  returns an ``mpmath.mpf``.  The inversion pipeline uses this path because
  the moment problem amplifies rounding error enormously.

Extended arithmetic runs in per-thread ``mpmath.MPContext`` objects, so the
functions stay reentrant (the global mpmath precision is never touched).
"""

import math
import threading

import mpmath

from .errors import DomainError, NumericalError

NU_MAX = 40.5  # covers half-integer orders l + 1/2 for l <= 40
X_MAX = 50.0

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_tls = threading.local()


def mp_context(dps):
    """Return a thread-local mpmath context working at ``dps`` digits."""
    cache = getattr(_tls, "contexts", None)
    if cache is None:
        cache = _tls.contexts = {}
    ctx = cache.get(dps)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = dps
        cache[dps] = ctx
    return ctx


def _finite(x):
    try:
        return math.isfinite(float(x))
    except (TypeError, ValueError, OverflowError):
        return False


def gamma_real(x):
    """Gamma function for real ``x > 0`` (relative error below 1e-13 on (0, 50])."""
    if not _finite(x) or x <= 0:
        raise DomainError(f"gamma_real requires a finite positive argument, got {x!r}")
    x = float(x)
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_real(1.0 - x))
    if x == int(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, coef in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += coef / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power to avoid overflow before exp(-t) pulls it back
    half = t ** ((z + 0.5) / 2.0)
    return math.sqrt(2.0 * math.pi) * half * math.exp(-t) * half * acc


def _rgamma(z):
    """1/Gamma(z) for real z; zero at the poles."""
    if z <= 0 and z == int(z):
        return 0.0
    if z < 0:
        return _rgamma(z + 1.0) * z
    return 1.0 / gamma_real(z)


# ---------------------------------------------------------------------------
# ascending series for J_nu and I_nu (nu >= -1)

def _series_float(nu, x, sign):
    """Return (sum, peak |term|) of the J (sign=-1) or I (sign=+1) series."""
    half = 0.5 * x
    if nu < 0 and nu == int(nu):
        # integer negative order: J_{-n} = (-1)^n J_n, I_{-n} = I_n
        n = -int(nu)
        s, peak = _series_float(float(n), x, sign)
        return (s * (-1) ** n if sign < 0 else s), peak
    lead = math.exp(nu * math.log(half)) * _rgamma(nu + 1.0)
    q = half * half
    terms = [lead]
    term = lead
    k = 0
    peak = abs(lead)
    while True:
        k += 1
        term = term * sign * q / (k * (k + nu))
        terms.append(term)
        at = abs(term)
        if at > peak:
            peak = at
        if k > half and at <= 1e-18 * peak:
            break
        if k > 500:
            raise NumericalError(f"Bessel series did not converge (nu={nu}, x={x})")
    return math.fsum(terms), peak


def _series_mp(ctx, nu, x, sign):
    half = ctx.mpf(x) / 2
    nu = ctx.mpf(nu)
    if nu < 0 and nu == ctx.floor(nu):
        n = -int(nu)
        s, peak = _series_mp(ctx, n, x, sign)
        return (s * (-1) ** n if sign < 0 else s), peak
    lead = ctx.power(half, nu) * ctx.rgamma(nu + 1)
    q = half * half
    terms = [lead]
    term = lead
    peak = abs(lead)
    eps = ctx.mpf(10) ** (-(ctx.dps + 3))
    k = 0
    while True:
        k += 1
        term = term * sign * q / (k * (k + nu))
        terms.append(term)
        at = abs(term)
        if at > peak:
            peak = at
        if k > half and at <= eps * peak:
            break
        if k > 5000:
            raise NumericalError(f"Bessel series did not converge (nu={nu}, x={x})")
    return ctx.fsum(terms), peak


def _series_extended(nu, x, sign, dps):
    """Series in extended precision with enough guard digits for the cancellation."""
    extra = 10
    for _ in range(8):
        ctx = mp_context(dps + extra)
        s, peak = _series_mp(ctx, nu, x, sign)
        if s == 0:
            extra *= 2
            continue
        lost = float(ctx.log10(peak / abs(s)))
        if lost + 5 <= extra:
            return mp_context(dps).mpf(s)
        extra = int(lost) + 15
    raise NumericalError(f"Bessel series lost all precision (nu={nu}, x={x})")


def _hankel_asymptotic(nu, x):
    """Large-argument expansion of J_nu; returns (value, error estimate)."""
    mu = 4.0 * nu * nu
    p_terms, q_terms = [1.0], []
    term = 1.0
    err = 1.0
    for k in range(1, 200):
        new = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if new == 0.0:
            # half-integer order: the expansion terminates
            err = 0.0
            break
        # past the turning point the terms must keep shrinking
        if (2 * k - 1) ** 2 > mu and abs(new) > abs(term):
            err = abs(term)
            break
        term = new
        if k % 2 == 0:
            p_terms.append(term * (-1) ** (k // 2))
        else:
            q_terms.append(term * (-1) ** ((k - 1) // 2))
        err = abs(term)
        if err < 1e-17:
            break
    p = math.fsum(p_terms)
    q = math.fsum(q_terms)
    # reduce nu*pi/2 exactly-ish before adding x
    phase = x - math.fmod(nu * 0.5 + 0.25, 4.0) * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (p * math.cos(phase) - q * math.sin(phase)), amp * err


def _jv(nu, x, dps=None):
    """J_nu(x) for nu >= -1, x > 0 without envelope checks."""
    if dps is not None:
        return _series_extended(nu, x, -1, dps)
    if nu >= 0 and x > max(12.0, 2.0 * nu):
        val, err = _hankel_asymptotic(nu, x)
        if err < 1e-13:
            return val
    s, peak = _series_float(nu, x, -1)
    if s == 0.0 or peak > 1e4 * abs(s):
        return float(_series_extended(nu, x, -1, 17))
    return s


def _iv(nu, x, dps=None):
    """Modified Bessel I_nu(x), nu >= -1; the series has no cancellation for nu >= 0."""
    if dps is not None:
        return _series_extended(nu, x, 1, dps)
    s, peak = _series_float(nu, x, 1)
    if s == 0.0 or peak > 1e4 * abs(s):
        return float(_series_extended(nu, x, 1, 17))
    return s


def _check(nu, x, name, nu_min=0.0, nu_max=NU_MAX):
    if not (_finite(nu) and _finite(x)):
        raise DomainError(f"{name}: non-finite argument (nu={nu!r}, x={x!r})")
    if not (nu_min <= nu <= nu_max):
        raise DomainError(f"{name}: order {nu} outside [{nu_min}, {nu_max}]")
    if not (0.0 < x <= X_MAX):
        raise DomainError(f"{name}: argument {x} outside (0, {X_MAX}]")


def bessel_j(nu, x, dps=None):
    """Bessel function of the first kind J_nu(x), 0 <= nu <= 40.5, 0 < x <= 50."""
    _check(nu, x, "bessel_j")
    return _jv(nu, x, dps)


def _jv_prime(nu, x, dps=None):
    if nu >= 1:
        return (_jv(nu - 1, x, dps) - _jv(nu + 1, x, dps)) / 2
    return _jv(nu - 1, x, dps) - nu / _as(x, dps) * _jv(nu, x, dps)


def bessel_j_prime(nu, x, dps=None):
    """dJ_nu/dx."""
    _check(nu, x, "bessel_j_prime")
    return _jv_prime(nu, x, dps)


def _as(x, dps):
    return x if dps is None else mp_context(dps).mpf(x)


def _y_half(n, x, dps=None):
    """Y_{n+1/2}(x) for integer n >= -1 by upward recurrence of spherical y_n."""
    if dps is None:
        s, c = math.sin(x), math.cos(x)
        pref = math.sqrt(2.0 * x / math.pi)
        xx = x
    else:
        ctx = mp_context(dps + 5)
        xx = ctx.mpf(x)
        s, c = ctx.sin(xx), ctx.cos(xx)
        pref = ctx.sqrt(2 * xx / ctx.pi)
    y_prev = s / xx  # y_{-1}
    if n == -1:
        out = pref * y_prev
    else:
        y_cur = -c / xx  # y_0
        for m in range(n):
            y_prev, y_cur = y_cur, (2 * m + 1) / xx * y_cur - y_prev
        out = pref * y_cur
    return out if dps is None else mp_context(dps).mpf(out)


def bessel_y_halfint(l, x, dps=None):
    """Y_{l+1/2}(x) for integer 0 <= l <= 40 from the trigonometric closed forms."""
    if int(l) != l or l < 0:
        raise DomainError(f"bessel_y_halfint: l must be a non-negative integer, got {l!r}")
    _check(l, x, "bessel_y_halfint")
    return _y_half(int(l), x, dps)


def _y_half_prime(n, x, dps=None):
    nu = n + 0.5
    if nu >= 1:
        return (_y_half(n - 1, x, dps) - _y_half(n + 1, x, dps)) / 2
    return _y_half(n - 1, x, dps) - nu / _as(x, dps) * _y_half(n, x, dps)


def bessel_y_halfint_prime(l, x, dps=None):
    """dY_{l+1/2}/dx, using the same recurrence rule as :func:`bessel_j_prime`."""
    if int(l) != l or l < 0:
        raise DomainError(f"bessel_y_halfint_prime: l must be a non-negative integer, got {l!r}")
    _check(l, x, "bessel_y_halfint_prime")
    return _y_half_prime(int(l), x, dps)


def bessel_i(nu, x, dps=None):
    """Modified Bessel function I_nu(x), 0 <= nu <= 40.5, 0 < x <= 50."""
    _check(nu, x, "bessel_i")
    return _iv(nu, x, dps)


def _iv_prime(nu, x, dps=None):
    if nu >= 1:
        return (_iv(nu - 1, x, dps) + _iv(nu + 1, x, dps)) / 2
    return _iv(nu - 1, x, dps) - nu / _as(x, dps) * _iv(nu, x, dps)


def bessel_i_prime(nu, x, dps=None):
    """dI_nu/dx."""
    _check(nu, x, "bessel_i_prime")
    return _iv_prime(nu, x, dps)


# ---------------------------------------------------------------------------
# derivatives with respect to the order

def _central_dnu(func, nu, x, step, tol=1e-10, min_step=1e-6):
    def diff(h):
        return (func(nu + h, x) - func(nu - h, x)) / (2.0 * h)

    prev = diff(step)
    h = step
    while h > min_step:
        h *= 0.5
        cur = diff(h)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


def bessel_j_dnu(nu, x, step=1e-4):
    """dJ_nu(x)/dnu by central differences (nu >= 0.05)."""
    _check(nu, x, "bessel_j_dnu", nu_min=0.05)
    if nu - step < 0:
        raise DomainError(f"bessel_j_dnu: nu - step = {nu - step} < 0")
    return _central_dnu(_jv, nu, x, step)


def bessel_j_prime_dnu(nu, x, step=1e-4):
    """Mixed derivative d^2 J_nu(x) / (dnu dx) by central differences."""
    _check(nu, x, "bessel_j_prime_dnu", nu_min=0.05)
    if nu - step < 0:
        raise DomainError(f"bessel_j_prime_dnu: nu - step = {nu - step} < 0")
    return _central_dnu(_jv_prime, nu, x, step)

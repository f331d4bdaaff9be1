"""Integrand kernels, sine/cosine integrals and closed-form reference values.

Every function here accepts a scalar or a numpy array and returns the same
kind.  ``si`` and ``ci`` switch representation by argument size: a
Maclaurin series for small x, the continued fraction for E1(ix) in the
middle range, and the auxiliary-function asymptotic expansions for large x.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError

EULER_GAMMA = 0.57721566490153286
HALF_PI = 0.5 * math.pi
QUARTER_PI = 0.25 * math.pi

#: below this the power series is used
SERIES_MAX = 4.0
#: at and above this the asymptotic expansion is used
ASYMPTOTIC_MIN = 40.0

_SERIES_TERMS = 22
_ASYMPTOTIC_TERMS = 20
_CF_EPS = 1e-16
_CF_MAXIT = 500

KERNELS = ("sinc", "sin2_over", "sincos_over", "cos_over", "fresnel_quarter_kernel")


def _scalar_or_array(fn):
    def wrapper(x, *args):
        arr = np.asarray(x, dtype=float)
        out = fn(np.atleast_1d(arr), *args)
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _safe_div(num, x):
    out = np.empty_like(x)
    nz = x != 0
    out[nz] = num[nz] / x[nz]
    return out, ~nz


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


@_scalar_or_array
def sinc(x):
    """sin(x)/x with the limit 1 at x = 0."""
    out, zero = _safe_div(np.sin(x), x)
    out[zero] = 1.0
    return out


@_scalar_or_array
def sin2_over(x):
    """sin(x)**2/x with the limit 0 at x = 0."""
    s = np.sin(x)
    out, zero = _safe_div(s * s, x)
    out[zero] = 0.0
    return out


@_scalar_or_array
def sincos_over(x):
    """sin(x)cos(x)/x with the limit 1 at x = 0."""
    out, zero = _safe_div(np.sin(x) * np.cos(x), x)
    out[zero] = 1.0
    return out


@_scalar_or_array
def cos_over(x):
    """cos(x)/x; undefined at 0."""
    if np.any(x == 0):
        raise InvalidArgumentError("cos_over is singular at x = 0; keep nodes interior")
    return np.cos(x) / x


@_scalar_or_array
def fresnel_quarter_kernel(x):
    """sin(x**2/4)/x with the limit 0 at x = 0."""
    out, zero = _safe_div(np.sin(0.25 * x * x), x)
    out[zero] = 0.0
    return out


_KERNEL_TABLE = {
    "sinc": sinc,
    "sin2_over": sin2_over,
    "sincos_over": sincos_over,
    "cos_over": cos_over,
    "fresnel_quarter_kernel": fresnel_quarter_kernel,
}


def kernel(kernel_id: str, x=None):
    """Look up a kernel by name; evaluate it at ``x`` if given."""
    try:
        fn = _KERNEL_TABLE[kernel_id]
    except KeyError:
        raise InvalidArgumentError(f"unknown kernel {kernel_id!r}; expected one of {KERNELS}") from None
    if x is None:
        return fn
    if np.any(np.asarray(x) < 0):
        raise InvalidArgumentError("kernels are defined for x >= 0 only")
    return fn(x)


# ---------------------------------------------------------------------------
# sine and cosine integrals
# ---------------------------------------------------------------------------


def _series_parts(x):
    """Return (Si(x), Ci(x) - gamma - ln x) from the Maclaurin series."""
    x2 = x * x
    si_sum = np.zeros_like(x)
    cin_sum = np.zeros_like(x)
    # t = (-1)^k x^(2k+1)/(2k+1)!  and  s = (-1)^k x^(2k)/(2k)!
    t = x.copy()
    s = np.ones_like(x)
    for k in range(_SERIES_TERMS):
        si_sum += t / (2 * k + 1)
        s = -s * x2 / ((2 * k + 1) * (2 * k + 2))
        cin_sum += s / (2 * k + 2)
        t = -t * x2 / ((2 * k + 2) * (2 * k + 3))
    return si_sum, cin_sum


def _si_ci_series(x):
    si_v, cin = _series_parts(x)
    with np.errstate(divide="ignore"):
        ci_v = EULER_GAMMA + np.log(x) + cin
    return si_v, ci_v


def _si_ci_continued_fraction(x):
    # modified Lentz evaluation of E1(ix) = Ci-ish parts; valid for x >~ 2
    tiny = 1e-300
    b = 1.0 + 1j * x
    c = np.full(x.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(2, _CF_MAXIT):
        a = -float((i - 1) * (i - 1))
        b = b + 2.0
        d_new = 1.0 / (a * d + b)
        c_new = b + a / c
        delta = c_new * d_new
        d = np.where(active, d_new, d)
        c = np.where(active, c_new, c)
        h = np.where(active, h * delta, h)
        active &= np.abs(delta.real - 1.0) + np.abs(delta.imag) >= _CF_EPS
        if not active.any():
            break
    h = (np.cos(x) - 1j * np.sin(x)) * h
    return HALF_PI + h.imag, -h.real


def _si_ci_asymptotic(x):
    inv2 = 1.0 / (x * x)
    f_sum = np.zeros_like(x)
    g_sum = np.zeros_like(x)
    term_f = np.ones_like(x)  # (-1)^k (2k)!/x^(2k)
    term_g = np.ones_like(x)  # (-1)^k (2k+1)!/x^(2k)
    for k in range(_ASYMPTOTIC_TERMS):
        f_sum += term_f
        g_sum += term_g
        term_f = -term_f * (2 * k + 1) * (2 * k + 2) * inv2
        term_g = -term_g * (2 * k + 2) * (2 * k + 3) * inv2
    f = f_sum / x
    g = g_sum * inv2
    s, c = np.sin(x), np.cos(x)
    return HALF_PI - f * c - g * s, f * s - g * c


def _si_ci(x):
    si_v = np.empty_like(x)
    ci_v = np.empty_like(x)
    lo = x < SERIES_MAX
    hi = x >= ASYMPTOTIC_MIN
    mid = ~(lo | hi)
    for mask, branch in ((lo, _si_ci_series), (mid, _si_ci_continued_fraction), (hi, _si_ci_asymptotic)):
        if mask.any():
            si_v[mask], ci_v[mask] = branch(x[mask])
    return si_v, ci_v


@_scalar_or_array
def si(x):
    """Sine integral Si(x) = integral of sin(t)/t over [0, x], for x >= 0."""
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise InvalidArgumentError("si is implemented for x >= 0")
    return _si_ci(x)[0]


@_scalar_or_array
def ci(x):
    """Cosine integral Ci(x) = gamma + ln x + integral of (cos t - 1)/t over [0, x], x > 0."""
    if np.any(~(x > 0)):
        raise InvalidArgumentError("ci requires x > 0")
    return _si_ci(x)[1]


@_scalar_or_array
def _inner_f(u):
    x = 2.0 * u
    out = np.empty_like(u)
    small = x < 1.0
    if small.any():
        out[small] = -0.5 * _series_parts(x[small])[1]
    big = ~small
    if big.any():
        xb = x[big]
        out[big] = 0.5 * (EULER_GAMMA + np.log(xb) - _si_ci(xb)[1])
    return out


@_scalar_or_array
def _inner_g(u):
    return 0.5 * _si_ci(2.0 * u)[0]


def inner_closed(which: str, u):
    """Closed forms of the two inner integrals.

    ``F(u)`` is the integral of sin(v)**2/v over [0, u], equal to
    (gamma + ln 2u - Ci(2u))/2; ``G(u)`` is the integral of sin(v)cos(v)/v,
    equal to Si(2u)/2.
    """
    if np.any(np.asarray(u) < 0):
        raise InvalidArgumentError("inner integrals need u >= 0")
    if which == "F":
        return _inner_f(u)
    if which == "G":
        return _inner_g(u)
    raise InvalidArgumentError(f"which must be 'F' or 'G', got {which!r}")


def closed_form(n: int) -> float:
    """Reference value 2/n! * (pi/4)**n of the n-th multiple integral."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 1 <= n <= 20:
        raise InvalidArgumentError(f"n must be an integer in [1, 20], got {n!r}")
    return 2.0 * QUARTER_PI ** int(n) / math.factorial(int(n))

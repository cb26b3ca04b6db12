"""Large-n expansions up to the soft edge.

Closed-form asymptotics for the scaled largest-eigenvalue law: the cubic
satisfied by the leading boundary-ratio approximation and its 1/n series,
the expansion of d/dalpha ln P, the small-alpha formula through Barnes
G-functions, the full ln P expansion uniform up to alpha = 1 - s/(2n)^(2/3),
the Airy-tail formula that expansion degenerates to at the edge, and the
limiting level density.
"""

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .specfun import barnes_ln_g, zeta_prime_minus_one

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FnExpansion:
    """First three 1/n-series coefficients of the boundary ratio at alpha."""

    alpha: float
    n: int
    gamma: float
    a0: float
    a1: float
    a2: float

    @property
    def partial_sum(self):
        return self.a0 + self.a1 / self.n + self.a2 / self.n ** 2


@dataclass(frozen=True)
class ExpansionReport:
    """Truncated expansion value with its remainder order attached."""

    value: float
    remainder_order: str
    n: int
    gamma: float
    alpha: float
    terms: tuple


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return float(alpha)


def cubic_root_f_tilde(n: int, gamma: float, alpha: float) -> float:
    """Unique real root of the leading-order cubic for the boundary ratio.

    Safeguarded Newton inside the bracket [1, 4(1+alpha)/(1-alpha)]:
    the cubic is negative at the left end (its value there is
    -32 n^2 alpha^2 - 2 gamma^2) and the right end sits beyond the root.
    """
    alpha = _check_alpha(alpha)
    g2 = gamma * gamma
    c3 = 16.0 * n ** 2 * alpha * (1.0 - alpha) + 8.0 * n * alpha * (1.0 + gamma) - g2
    c2 = 16.0 * n ** 2 * alpha * (1.0 + alpha) + 8.0 * n * alpha * (1.0 + gamma) - 3.0 * g2
    scale = 16.0 * n ** 2 * alpha + 8.0 * n * alpha * (1.0 + abs(gamma)) + 3.0 * g2
    if abs(c3) <= 1e-12 * scale:
        raise DomainError(
            f"leading cubic coefficient degenerates at n={n}, gamma={gamma}, "
            f"alpha={alpha}")

    def poly(f):
        return ((c3 * f - c2) * f - 3.0 * g2) * f + g2

    def dpoly(f):
        return (3.0 * c3 * f - 2.0 * c2) * f - 3.0 * g2

    lo, hi = 1.0, 4.0 * (1.0 + alpha) / (1.0 - alpha)
    p_lo, p_hi = poly(lo), poly(hi)
    if not (p_lo < 0.0 < p_hi):
        raise ConvergenceError(
            f"no sign change on [{lo}, {hi}] for n={n}, gamma={gamma}, "
            f"alpha={alpha}")
    f = (1.0 + alpha) / (1.0 - alpha)
    for _ in range(200):
        p = poly(f)
        res_scale = abs(c3 * f ** 3) + abs(c2 * f ** 2) + 3.0 * g2 * abs(f) + g2
        if abs(p) <= 1e-13 * res_scale:
            return f
        if p < 0.0:
            lo = f
        else:
            hi = f
        d = dpoly(f)
        step = f - p / d if d != 0.0 else lo
        # fall back to bisection whenever Newton leaves the bracket
        f = step if lo < step < hi else 0.5 * (lo + hi)
    raise ConvergenceError(
        f"cubic root iteration stalled at n={n}, gamma={gamma}, alpha={alpha}")


def fn_series(n: int, gamma: float, alpha: float) -> FnExpansion:
    """Coefficients a_0, a_1, a_2 of the 1/n series of the boundary ratio."""
    alpha = _check_alpha(alpha)
    one_m = 1.0 - alpha
    one_p = 1.0 + alpha
    a0 = one_p / one_m
    a1 = -alpha * (1.0 + gamma) / one_m ** 2
    a2_num = (alpha + alpha ** 2 - alpha ** 4
              + 2.0 * alpha * one_m * one_p ** 2 * gamma
              + alpha * one_m * (1.0 + 3.0 * alpha) * gamma ** 2)
    a2 = a2_num / (2.0 * one_m ** 4 * one_p ** 2)
    return FnExpansion(alpha=alpha, n=n, gamma=gamma, a0=a0, a1=a1, a2=a2)


def dlnp_dalpha(n: int, gamma: float, alpha: float) -> ExpansionReport:
    """Four-term expansion of d/dalpha ln P(n, gamma, alpha)."""
    alpha = _check_alpha(alpha)
    one_m = 1.0 - alpha
    one_m2 = 1.0 - alpha ** 2
    terms = (
        one_m ** 2 * n ** 2 / alpha,
        gamma * one_m * n / alpha,
        (alpha + 2.0 * gamma ** 2 * one_m) / (4.0 * one_m2),
        -gamma * (alpha + gamma ** 2 * one_m ** 2) / (4.0 * n * one_m2 ** 2),
    )
    return ExpansionReport(
        value=math.fsum(terms),
        remainder_order="n^-2 (1-alpha)^-4",
        n=n, gamma=gamma, alpha=alpha, terms=terms)


def lnp_small_alpha(n: int, gamma: float, alpha: float) -> float:
    """Small-alpha limit of ln P via the Barnes G-function ratio.

    Valid as alpha -> 0 at fixed n (guideline alpha <= 0.05/n); the
    neglected term vanishes in that limit.
    """
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n}")
    if gamma <= -1.0:
        raise DomainError(f"gamma must exceed -1, got {gamma}")
    return (n * (n + gamma) * math.log(4.0 * n * alpha)
            + barnes_ln_g(n + 1.0)
            + barnes_ln_g(n + gamma + 1.0)
            - barnes_ln_g(2.0 * n + gamma + 1.0))


def lnp_small_alpha_expanded(n: int, gamma: float, alpha: float) -> float:
    """Small-alpha formula with the G-ratio replaced by its expansion.

    Cross-check variant: drops an n-dependent o(1) drift relative to
    lnp_small_alpha, so the two agree only as n grows.
    """
    if alpha <= 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    terms = (
        (1.5 * n ** 2 + n * gamma - 1.0 / 12.0) * math.log(n),
        (0.5 * (n + gamma) ** 2 - 1.0 / 12.0) * math.log(n + gamma),
        -(0.5 * (2.0 * n + gamma) ** 2 - 1.0 / 12.0) * math.log(2.0 * n + gamma),
        n * (n + gamma) * (1.5 + math.log(4.0 * alpha)),
        zeta_prime_minus_one(),
    )
    return math.fsum(terms)


def lnp_theorem(n: int, gamma: float, alpha: float) -> ExpansionReport:
    """Full ln P expansion valid up to alpha = 1 - s0/(2n)^(2/3).

    The returned value omits the o(1) drift term delta_n(gamma), which
    decays like 1/n; the remainder descriptor carries both pieces.
    """
    alpha = _check_alpha(alpha)
    ln4a = math.log(4.0 * alpha)
    g2 = gamma * gamma
    terms = (
        n ** 2 * (1.5 - 2.0 * alpha + 0.5 * alpha ** 2 + ln4a),
        n * gamma * (1.5 - alpha + ln4a),
        (1.5 * n ** 2 + n * gamma - 1.0 / 12.0) * math.log(n),
        (0.5 * (n + gamma) ** 2 - 1.0 / 12.0) * math.log(n + gamma),
        -(0.5 * (2.0 * n + gamma) ** 2 - 1.0 / 12.0) * math.log(2.0 * n + gamma),
        0.125 * ((4.0 * g2 - 1.0) * math.log1p(alpha) - math.log1p(-alpha)),
        zeta_prime_minus_one(),
        gamma * (2.0 * (1.0 - alpha) * g2 - 1.0) / (8.0 * n * (1.0 - alpha ** 2)),
    )
    return ExpansionReport(
        value=math.fsum(terms),
        remainder_order="n^-2 (1-alpha)^-3 + n^-1 drift",
        n=n, gamma=gamma, alpha=alpha, terms=terms)


def airy_tail(s: float) -> float:
    """Four-term right-tail expansion of the log Airy determinant."""
    if s <= 0.0:
        raise DomainError(f"tail variable must be positive, got {s}")
    return math.fsum((
        -s ** 3 / 12.0,
        -0.125 * math.log(s),
        math.log(2.0) / 24.0,
        zeta_prime_minus_one(),
    ))


def soft_edge_alpha(n: int, s: float) -> float:
    """Edge scaling alpha = 1 - s/(2n)^(2/3)."""
    if s <= 0.0:
        raise DomainError(f"edge variable must be positive, got {s}")
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    alpha = 1.0 - s / (2.0 * n) ** (2.0 / 3.0)
    if alpha <= 0.0:
        raise DomainError(
            f"edge substitution left the unit interval: n={n}, s={s}")
    return alpha


def level_density(n: int, x: float) -> float:
    """Limiting eigenvalue density (1/2 pi) sqrt((4n - x)/x) on (0, 4n)."""
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if x <= 0.0 or x >= 4.0 * n:
        return 0.0
    return math.sqrt((4.0 * n - x) / x) / TWO_PI

"""Exact finite-n largest-eigenvalue distributions.

The probability that the largest eigenvalue lies below t equals the
determinant of the n x n Gram matrix M(t) of the first n orthonormal
Laguerre wavefunctions restricted to [0, t]: the correlation kernel has
finite rank n, so the Fredholm determinant on (t, infinity) collapses to
det M(t) exactly.  Everything here is carried in natural-log space; the
determinant reaches exp(-n^2 scale) well inside the spectrum.
"""

import math
from dataclasses import dataclass

import numpy as np
import mpmath as mp

from .errors import CapabilityError, ConditioningError, DomainError, PrecisionError
from .orthopoly import lanczos_coefficients
from .quadrature import left_singular_rule
from .specfun import barnes_ln_g


@dataclass(frozen=True)
class EnsembleParams:
    """Matrix dimension n and Laguerre exponent gamma of the ensemble."""

    n: int
    gamma: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.n}")
        if not self.gamma > -1.0:
            raise DomainError(f"exponent must exceed -1, got {self.gamma}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "gamma", float(self.gamma))


@dataclass(frozen=True)
class LogProb:
    """A probability carried as its natural log (always <= 0)."""

    log_value: float

    def __post_init__(self):
        if not self.log_value <= 0.0:
            raise DomainError(f"log-probability must be <= 0, got {self.log_value}")

    @property
    def value(self):
        return math.exp(self.log_value)


@dataclass(frozen=True)
class SigmaValue:
    """t (d/dt) ln P at one point, with first and second t-derivatives."""

    t: float
    sigma: float
    sigma_prime: float
    sigma_double_prime: float


def dn_infinity_log(params: EnsembleParams, scaled=False):
    """Log of the full-space Hankel determinant normalization.

    ln of G(n+1) G(n+gamma+1) / G(gamma+1); with ``scaled=True`` the weight
    is x^gamma e^(-4nx) instead of x^gamma e^(-x), contributing the factor
    (4n)^(-n(n+gamma)).
    """
    n, g = params.n, params.gamma
    val = (barnes_ln_g(n + 1.0) + barnes_ln_g(n + g + 1.0)
           - barnes_ln_g(g + 1.0))
    if scaled:
        val -= n * (n + g) * math.log(4.0 * n)
    return val


def saturation_threshold(params: EnsembleParams):
    """t beyond which the distribution is 1 to within 1e-9 in log."""
    n, g = params.n, params.gamma
    return 4.0 * n + 10.0 * (2.0 * n) ** (1.0 / 3.0) + 5.0 * max(g, 0.0)


def _stieltjes_coefficients(params: EnsembleParams, t, node_count):
    # Gram-Schmidt of the polynomial basis on the [0, t] quadrature measure:
    # a Cholesky of the wavefunction Gram matrix that never forms it, so
    # every norm factor keeps relative machine accuracy.  Returns the
    # recurrence data (alpha_0..alpha_{n-2}, sqrt(beta_1)..sqrt(beta_{n-1}))
    # and the log norms ln h_0..ln h_{n-1}.
    n, gamma = params.n, params.gamma
    if t > 1400.0:
        # sqrt(d/h0) components underflow once the weight spans e^-1490
        raise CapabilityError(
            f"probe point t={t} exceeds the double-precision design range "
            "(t <= 1400)")
    if node_count is None:
        node_count = 4 * n + 50
    x, w = left_singular_rule(t, gamma, node_count)
    alpha, beta, ln_h = lanczos_coefficients(x, np.log(w) - x, n - 1)
    return alpha[:n - 1], np.sqrt(beta[1:n]), ln_h


def phat_projection(params: EnsembleParams, t, node_count=None):
    """ln P(largest eigenvalue <= t) under the weight x^gamma e^(-x).

    The rank-n kernel reduces the Fredholm determinant to the determinant
    of the wavefunction Gram matrix on [0, t], evaluated by a log-space
    symmetric factorization on the quadrature nodes.
    """
    t = float(t)
    if t <= 0.0:
        raise DomainError(f"probe point must be positive, got {t}")
    if t > saturation_threshold(params):
        return LogProb(0.0)
    _, _, ln_h = _stieltjes_coefficients(params, t, node_count)
    log_det = float(np.sum(ln_h)) - dn_infinity_log(params)
    if log_det > 1e-9:
        raise ConditioningError(
            f"Gram determinant exceeded 1 by {log_det:.3e} at t={t}; "
            "quadrature failure")
    return LogProb(min(log_det, 0.0))


def phat_hankel_oracle(params: EnsembleParams, t, dps=50):
    """Independent ln P route through the moment-matrix determinant.

    det of the lower-incomplete-gamma Hankel matrix divided by the
    closed-form full-space value.  The monomial moment matrix is
    exponentially ill-conditioned, so the determinant is evaluated in
    arbitrary precision and the dimension is capped.
    """
    if params.n > 12:
        raise CapabilityError(
            f"moment-determinant route capped at n <= 12, got {params.n}")
    t = float(t)
    if t <= 0.0:
        raise DomainError(f"probe point must be positive, got {t}")
    n, g = params.n, params.gamma
    with mp.workdps(dps):
        mu = [mp.gammainc(k + g + 1, 0, t) for k in range(2 * n - 1)]
        mat = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                mat[i, j] = mu[i + j]
        try:
            low = mp.cholesky(mat)
        except ValueError as exc:
            raise PrecisionError(
                f"moment determinant not positive at n={n}, t={t}: {exc}"
            ) from exc
        log_det = float(2 * mp.fsum(mp.log(low[j, j]) for j in range(n)))
    log_p = log_det - dn_infinity_log(params)
    return LogProb(min(log_p, 0.0))


def p_scaled(params: EnsembleParams, alpha, node_count=None):
    """Distribution of the largest eigenvalue under the x^gamma e^(-4nx)
    weight, probed at alpha; equals the unscaled probability at t = 4 n alpha."""
    alpha = float(alpha)
    if alpha <= 0.0:
        raise DomainError(f"scaled probe point must be positive, got {alpha}")
    return phat_projection(params, 4.0 * params.n * alpha, node_count)


def _boundary_jets(alpha, sqrt_beta, h0, t, count):
    # orthonormal-polynomial values and first two x-derivatives at x = t,
    # advanced together through the three-term recurrence
    q = np.empty(count)
    dq = np.zeros(count)
    d2q = np.zeros(count)
    q[0] = 1.0 / math.sqrt(h0)
    for j in range(count - 1):
        sb_next = sqrt_beta[j]
        sb_prev = sqrt_beta[j - 1] if j >= 1 else 0.0
        qm = q[j - 1] if j >= 1 else 0.0
        dqm = dq[j - 1] if j >= 1 else 0.0
        d2qm = d2q[j - 1] if j >= 1 else 0.0
        shift = t - alpha[j]
        q[j + 1] = (shift * q[j] - sb_prev * qm) / sb_next
        dq[j + 1] = (q[j] + shift * dq[j] - sb_prev * dqm) / sb_next
        d2q[j + 1] = (2.0 * dq[j] + shift * d2q[j] - sb_prev * d2qm) / sb_next
    return q, dq, d2q


def sigma_exact(params: EnsembleParams, t, node_count=None):
    """sigma(t) = t d/dt ln P with exact first and second derivatives.

    d/dt of the Gram matrix M(t) is the rank-one product phi(t) phi(t)^T,
    so t (ln det M)' = t phi^T M^{-1} phi, and one more resolvent
    derivative yields sigma' and sigma''.  The quadratic forms are
    evaluated in the basis orthonormal on [0, t] (where M is the
    identity): phi^T M^{-1} phi = w(t) sum_j q_j(t)^2 with q_j the
    normalized boundary values, which stays accurate deep in the left
    tail where a factorization of M in double precision loses rank.
    """
    t = float(t)
    if t <= 0.0:
        raise DomainError(f"probe point must be positive, got {t}")
    n, gamma = params.n, params.gamma
    alpha, sqrt_beta, ln_h = _stieltjes_coefficients(params, t, node_count)
    q, dq, d2q = _boundary_jets(alpha, sqrt_beta, math.exp(ln_h[0]), t, n)
    # e_j(x) = sqrt(w(x)) q_j(x); lw1, lw2 are (ln w)' and (ln w)'' at t
    w_t = math.exp(gamma * math.log(t) - t)
    lw1 = gamma / t - 1.0
    lw2 = -gamma / t ** 2
    e = q
    de = dq + 0.5 * lw1 * q
    d2e = d2q + lw1 * dq + (0.5 * lw2 + 0.25 * lw1 ** 2) * q
    u = w_t * float(e @ e)
    cross = w_t * float(de @ e)
    de_sq = w_t * float(de @ de)
    curv = w_t * float(d2e @ e)
    u_prime = 2.0 * cross - u * u
    u_double = 2.0 * curv + 2.0 * de_sq - 2.0 * u * cross - 2.0 * u * u_prime
    return SigmaValue(
        t=t,
        sigma=t * u,
        sigma_prime=u + t * u_prime,
        sigma_double_prime=2.0 * u_prime + t * u_double,
    )

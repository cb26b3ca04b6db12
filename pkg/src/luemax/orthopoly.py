"""Laguerre wavefunctions, the Christoffel-Darboux kernel, and monic
orthogonal polynomials on a truncated interval [0, t].

The weight on [0, t] is x**gamma * exp(-x).  The monic system carries the
three-term recurrence coefficients, squared norms, boundary values at x = t,
and the auxiliary boundary quantities used by the ladder-operator and
Painleve checks.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import mpmath as mp
from scipy.special import logsumexp

from .errors import CapabilityError, ConditioningError, DomainError
from .quadrature import left_singular_rule
from .specfun import log_gamma


def _check_gamma(gamma):
    gamma = float(gamma)
    if gamma <= -1.0:
        raise DomainError(f"Laguerre exponent must exceed -1, got {gamma}")
    return gamma


def laguerre_eval(j, gamma, x):
    """Generalized Laguerre polynomial L_j^(gamma)(x) by forward recurrence.

    Accepts scalar or array x; exact for j <= 2 against the closed forms.
    """
    gamma = _check_gamma(gamma)
    if j < 0:
        raise DomainError(f"degree must be nonnegative, got {j}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if j == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + gamma - x
    for k in range(1, j):
        # (k+1) L_{k+1} = (2k+gamma+1-x) L_k - (k+gamma) L_{k-1}
        prev, cur = cur, ((2 * k + gamma + 1 - x) * cur
                          - (k + gamma) * prev) / (k + 1.0)
    return cur if cur.ndim else float(cur)


def wavefunction_matrix(count, gamma, x, weightless=False):
    """Orthonormal Laguerre wavefunction values at the points x.

    Returns an array of shape (len(x), count) whose column j holds
    phi_j(x) = sqrt(Gamma(j+1)/Gamma(j+gamma+1)) x^(gamma/2) e^(-x/2)
    L_j^(gamma)(x).  With ``weightless=True`` the x^(gamma/2) factor is
    dropped (the form used when a quadrature rule absorbs x^gamma).
    """
    gamma = _check_gamma(gamma)
    if count < 1:
        raise DomainError(f"need at least one wavefunction, got {count}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.size, count))
    base = np.exp(-0.5 * x - 0.5 * log_gamma(gamma + 1.0))
    if not weightless:
        base = base * np.power(x, 0.5 * gamma)
    out[:, 0] = base
    if count > 1:
        out[:, 1] = (gamma + 1.0 - x) * base / math.sqrt(gamma + 1.0)
    for j in range(1, count - 1):
        c_down = math.sqrt(j * (j + gamma))
        c_up = math.sqrt((j + 1.0) * (j + 1.0 + gamma))
        out[:, j + 1] = ((2 * j + gamma + 1.0 - x) * out[:, j]
                         - c_down * out[:, j - 1]) / c_up
    return out


def wavefunction_jet(count, gamma, x):
    """phi_j, phi_j', phi_j'' for j < count at a single point x > 0.

    The derivatives use the lowering identity
    phi_j' = (gamma/(2x) - 1/2 + j/x) phi_j - (sqrt(j(j+gamma))/x) phi_{j-1}
    and its x-derivative; all three arrays have shape (count,).
    """
    gamma = _check_gamma(gamma)
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"wavefunction_jet requires x > 0, got {x}")
    phi = wavefunction_matrix(count, gamma, x)[0]
    j = np.arange(count, dtype=float)
    a = 0.5 * gamma / x - 0.5 + j / x
    b = np.sqrt(j * np.maximum(j + gamma, 0.0)) / x
    phi_down = np.concatenate(([0.0], phi[:-1]))
    dphi = a * phi - b * phi_down
    dphi_down = np.concatenate(([0.0], dphi[:-1]))
    da = -0.5 * gamma / x ** 2 - j / x ** 2
    db = -b / x
    d2phi = da * phi + a * dphi - db * phi_down - b * dphi_down
    return phi, dphi, d2phi


class Wavefunction:
    """Single orthonormal Laguerre wavefunction of fixed degree."""

    def __init__(self, j, gamma):
        if j < 0:
            raise DomainError(f"degree must be nonnegative, got {j}")
        self.j = int(j)
        self.gamma = _check_gamma(gamma)

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        vals = wavefunction_matrix(self.j + 1, self.gamma, x)[:, self.j]
        return vals if vals.size > 1 else float(vals[0])

    def derivative(self, x):
        vals = wavefunction_jet(self.j + 1, self.gamma, x)[1]
        return float(vals[self.j])


def cd_kernel(n, gamma, x, y):
    """Christoffel-Darboux kernel of the first n wavefunctions.

    K_n(x,y) = sqrt(n(n+gamma)) (phi_{n-1}(x)phi_n(y) - phi_{n-1}(y)phi_n(x))
               / (x - y),
    with the confluent derivative form on the near-diagonal band.
    """
    gamma = _check_gamma(gamma)
    if n < 1:
        raise DomainError(f"kernel rank must be positive, got {n}")
    x = float(x)
    y = float(y)
    if x < 0.0 or y < 0.0:
        raise DomainError("kernel arguments must be nonnegative")
    pref = math.sqrt(n * (n + gamma))
    eps_diag = 1e-6 * max(1.0, x)
    if abs(x - y) < eps_diag:
        mid = 0.5 * (x + y)
        if mid <= 0.0:
            return 0.0 if gamma > 0.0 else float(n) / math.exp(log_gamma(gamma + 1.0))
        phi, dphi, _ = wavefunction_jet(n + 1, gamma, mid)
        return pref * (dphi[n - 1] * phi[n] - phi[n - 1] * dphi[n])
    vals = wavefunction_matrix(n + 1, gamma, np.array([x, y]))
    num = vals[0, n - 1] * vals[1, n] - vals[1, n - 1] * vals[0, n]
    return pref * num / (x - y)


# ---------------------------------------------------------------------------
# monic system on [0, t]
# ---------------------------------------------------------------------------

def lanczos_coefficients(x, log_weights, degree):
    """Recurrence data of the discrete measure sum_k d_k delta(x - x_k).

    Lanczos on diag(x) started from the unit vector with components
    sqrt(d_k / h_0): every iterate stays unit-norm, so no component
    underflows even when the weights d_k span hundreds of orders (forming
    d_k = w_k e^{-x_k} directly flushes the far tail to zero, and the
    high-degree polynomials grow fast enough there to feel the loss).
    One reorthogonalization pass keeps the basis orthonormal to machine
    precision at high degree.

    Returns (alpha[0..degree], beta[0..degree], ln_h[0..degree]) with
    beta[0] = 0 by convention.
    """
    x = np.asarray(x, dtype=float)
    ln_h0 = float(logsumexp(log_weights))
    if not math.isfinite(ln_h0):
        raise ConditioningError("discrete measure has no finite mass")
    if degree + 1 > x.size:
        raise DomainError(
            f"degree {degree} exceeds the {x.size}-point rule capacity")
    basis = np.empty((x.size, degree + 1))
    basis[:, 0] = np.exp(0.5 * (np.asarray(log_weights, dtype=float) - ln_h0))
    alpha = np.empty(degree + 1)
    beta = np.zeros(degree + 1)
    ln_h = np.empty(degree + 1)
    ln_h[0] = ln_h0
    for j in range(degree + 1):
        xv = x * basis[:, j]
        alpha[j] = float(basis[:, j] @ xv)
        if j == degree:
            break
        cand = xv - alpha[j] * basis[:, j]
        if j >= 1:
            cand -= math.sqrt(beta[j]) * basis[:, j - 1]
        head = basis[:, :j + 1]
        cand -= head @ (head.T @ cand)
        b_next = float(cand @ cand)
        if not (b_next > 0.0 and math.isfinite(b_next)):
            raise ConditioningError(
                f"orthogonalization broke down at degree {j + 1} "
                f"({x.size}-point rule)")
        beta[j + 1] = b_next
        ln_h[j + 1] = ln_h[j] + math.log(b_next)
        basis[:, j + 1] = cand / math.sqrt(b_next)
    return alpha, beta, ln_h


@dataclass(frozen=True)
class MonicOPSystem:
    """Monic orthogonal polynomials for x**gamma e**(-x) on [0, t].

    Arrays are indexed by degree j = 0..n_max unless noted.  ``beta[0]`` is
    0 by convention and ``small_r[0]`` is NaN (it involves degree -1).
    ``p_sub`` has length n_max + 2 and holds the subleading coefficient
    p(j, t) of P_j, so alpha[j] = p_sub[j] - p_sub[j+1].
    """

    t: float
    gamma: float
    n_max: int
    alpha: np.ndarray
    beta: np.ndarray
    ln_h: np.ndarray
    h: np.ndarray
    p_sub: np.ndarray
    boundary_values: np.ndarray
    q_boundary: np.ndarray
    big_r: np.ndarray
    small_r: np.ndarray
    s_values: np.ndarray
    node_count: int = field(default=0, compare=False)

    def orthonormal_at(self, degree, x):
        """Values of the orthonormal polynomials p~_0..p~_degree at x.

        Shape (len(x), degree+1); p~_j = P_j / sqrt(h_j), no weight factor.
        """
        if degree > self.n_max:
            raise DomainError(
                f"system built to degree {self.n_max}, requested {degree}")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty((x.size, degree + 1))
        out[:, 0] = math.exp(-0.5 * self.ln_h[0])
        if degree >= 1:
            out[:, 1] = (x - self.alpha[0]) * out[:, 0] / math.sqrt(self.beta[1])
        for j in range(1, degree):
            out[:, j + 1] = ((x - self.alpha[j]) * out[:, j]
                             - math.sqrt(self.beta[j]) * out[:, j - 1]
                             ) / math.sqrt(self.beta[j + 1])
        return out


def _assemble_system(t, gamma, n_max, alpha, beta, ln_h, q_bnd, node_count):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    ln_h = np.asarray(ln_h, dtype=float)
    q_bnd = np.asarray(q_bnd, dtype=float)
    p_sub = np.concatenate(([0.0], -np.cumsum(alpha)))
    with np.errstate(over="ignore"):
        h = np.exp(ln_h)
        boundary = q_bnd * np.exp(0.5 * ln_h)
    # R_j = -t^gamma e^-t P_j(t)^2 / h_j = -t^gamma e^-t q_j^2
    log_w_t = gamma * math.log(t) - t
    big_r = -np.exp(log_w_t) * q_bnd ** 2
    small_r = np.full(n_max + 1, np.nan)
    if n_max >= 1:
        small_r[1:] = (-np.exp(log_w_t) * q_bnd[1:] * q_bnd[:-1]
                       * np.sqrt(beta[1:]))
    if np.any(big_r >= 0.0):
        raise ConditioningError(
            "boundary auxiliary R_j lost its sign; quadrature rank failure")
    s_values = 1.0 - 1.0 / big_r
    return MonicOPSystem(t=t, gamma=gamma, n_max=n_max, alpha=alpha,
                         beta=beta, ln_h=ln_h, h=h, p_sub=p_sub,
                         boundary_values=boundary, q_boundary=q_bnd,
                         big_r=big_r, small_r=small_r, s_values=s_values,
                         node_count=node_count)


def build_monic_system(n_max, gamma, t, node_count=None):
    """Recurrence coefficients on [0, t] by the discretized Stieltjes process.

    The measure is sampled on a quadrature rule that absorbs the x**gamma
    branch point, so the discrete weights are rule weights times e**(-x).
    Degrees run to n_max; boundary values P_j(t, t) come from the
    recurrence itself via the normalized values q_j = P_j(t, t)/sqrt(h_j).
    """
    gamma = _check_gamma(gamma)
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    t = float(t)
    if t <= 0.0:
        raise DomainError(f"truncation point must be positive, got {t}")
    if t > 1400.0:
        # sqrt(d/h0) components underflow once the weight spans e^-1490
        raise CapabilityError(
            f"truncation point t={t} exceeds the double-precision design "
            "range (t <= 1400)")
    if node_count is None:
        node_count = 4 * n_max + 50
    if node_count < 2 * (n_max + 1):
        raise DomainError(
            f"node count {node_count} cannot resolve degree {n_max}")
    x, w = left_singular_rule(t, gamma, node_count)
    alpha, beta, ln_h = lanczos_coefficients(x, np.log(w) - x, n_max)
    # normalized boundary values q_j = P_j(t, t)/sqrt(h_j) by the recurrence
    q = np.empty(n_max + 1)
    q[0] = math.exp(-0.5 * ln_h[0])
    for j in range(n_max):
        prev = q[j - 1] if j >= 1 else 0.0
        sb_prev = math.sqrt(beta[j]) if j >= 1 else 0.0
        q[j + 1] = ((t - alpha[j]) * q[j] - sb_prev * prev) / math.sqrt(beta[j + 1])
    if not np.all(np.isfinite(q)):
        raise ConditioningError(
            f"boundary values overflowed at t={t}; interval too long")
    return _assemble_system(t, gamma, n_max, alpha, beta, ln_h, q, node_count)


def build_monic_system_moment_oracle(n_max, gamma, t, dps=80):
    """Moment-matrix route: Cholesky of the Hankel moment matrix.

    Exponentially ill-conditioned in n_max, hence done in arbitrary
    precision and capped at n_max <= 12; serves as an independent check of
    the Stieltjes route.
    """
    gamma = _check_gamma(gamma)
    if n_max > 12:
        raise CapabilityError(
            f"moment oracle is limited to n_max <= 12, got {n_max}")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    t = float(t)
    if t <= 0.0:
        raise DomainError(f"truncation point must be positive, got {t}")
    size = n_max + 2
    with mp.workdps(dps):
        mu = [mp.gammainc(k + gamma + 1, 0, t) for k in range(2 * size - 1)]
        mat = mp.matrix(size, size)
        for i in range(size):
            for j in range(size):
                mat[i, j] = mu[i + j]
        try:
            low = mp.cholesky(mat)
        except ValueError as exc:
            raise ConditioningError(
                f"moment matrix not positive definite: {exc}") from exc
        # rows of inv(L) are the orthonormal polynomial coefficients
        inv_low = mp.inverse(low)
        ln_h = [2 * mp.log(low[j, j]) for j in range(size)]
        p_sub = [mp.mpf(0)] * size
        for j in range(1, size):
            p_sub[j] = inv_low[j, j - 1] / inv_low[j, j]
        alpha_mp = [p_sub[j] - p_sub[j + 1] for j in range(size - 1)]
        beta_mp = [mp.mpf(0)] + [mp.exp(ln_h[j] - ln_h[j - 1])
                                 for j in range(1, n_max + 1)]
        # normalized boundary values at x = t
        q_mp = [mp.e ** (-ln_h[0] / 2)]
        if n_max >= 1:
            q_mp.append((t - alpha_mp[0]) * q_mp[0] / mp.sqrt(beta_mp[1]))
        for j in range(1, n_max):
            q_mp.append(((t - alpha_mp[j]) * q_mp[j]
                         - mp.sqrt(beta_mp[j]) * q_mp[j - 1])
                        / mp.sqrt(beta_mp[j + 1]))
        alpha = [float(a) for a in alpha_mp[:n_max + 1]]
        beta = [float(b) for b in beta_mp]
        lnh = [float(v) for v in ln_h[:n_max + 1]]
        q = [float(v) for v in q_mp]
    return _assemble_system(t, gamma, n_max, alpha, beta, lnh, q, 0)


# ---------------------------------------------------------------------------
# ladder coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderCoefficients:
    """Coefficient functions of the degree-raising/lowering relations.

    a_n(z) and b_n(z) multiply the lowering/raising first-order operators;
    v(z) = z - gamma ln z is the external potential of the weight.
    """

    z: float
    a_n: float
    b_n: float
    v: float
    v_prime: float


def _ladder_point(sys, n, z):
    # n = 0 is allowed for a_n; b_0 involves degree -1 and comes out NaN
    if not 0 <= n <= sys.n_max:
        raise DomainError(f"need 0 <= n <= {sys.n_max}, got {n}")
    z = float(z)
    if z == 0.0 or z == sys.t:
        raise DomainError(f"evaluation point {z} hits a pole (0 or t={sys.t})")
    return z


def ladder_coefficients(sys: MonicOPSystem, n, z):
    """Partial-fraction values of the ladder coefficients at z.

    a_n(z) = R_n/(z-t) + (1-R_n)/z and b_n(z) = r_n/(z-t) - (n+r_n)/z,
    where R_n, r_n are the boundary auxiliaries of the system.
    """
    z = _ladder_point(sys, n, z)
    big_r = sys.big_r[n]
    small_r = sys.small_r[n]
    a_n = big_r / (z - sys.t) + (1.0 - big_r) / z
    b_n = small_r / (z - sys.t) - (n + small_r) / z
    v = z - sys.gamma * math.log(z) if z > 0 else math.nan
    v_prime = 1.0 - sys.gamma / z
    return LadderCoefficients(z=z, a_n=a_n, b_n=b_n, v=v, v_prime=v_prime)


def ladder_coefficients_integral(sys: MonicOPSystem, n, z, node_count=None):
    """Ladder coefficients from their defining integrals, for cross-checks.

    The difference quotient of v' reduces to gamma/(z y), so the integrals
    pick up a y**(gamma-1) branch point; a quadrature rule absorbing that
    exponent evaluates them.  Requires gamma > 0: at gamma = 0 the
    difference quotient vanishes identically and the defining integral no
    longer carries the 1/z pole term.
    """
    if sys.gamma <= 0.0:
        raise DomainError(
            "integral route needs gamma > 0; the integrand is proportional "
            "to gamma and drops the 1/z residue at gamma = 0")
    if n < 1:
        raise DomainError(f"integral route needs n >= 1, got {n}")
    z = _ladder_point(sys, n, z)
    if node_count is None:
        node_count = 4 * sys.n_max + 50
    y, w = left_singular_rule(sys.t, sys.gamma - 1.0, node_count)
    vals = sys.orthonormal_at(n, y)
    damp = w * np.exp(-y)
    int_nn = float(np.sum(damp * vals[:, n] ** 2))
    int_cross = float(np.sum(damp * vals[:, n] * vals[:, n - 1]))
    a_n = sys.big_r[n] / (z - sys.t) + sys.gamma / z * int_nn
    b_n = (sys.small_r[n] / (z - sys.t)
           + sys.gamma / z * math.sqrt(sys.beta[n]) * int_cross)
    v = z - sys.gamma * math.log(z) if z > 0 else math.nan
    return LadderCoefficients(z=z, a_n=a_n, b_n=b_n, v=v,
                              v_prime=1.0 - sys.gamma / z)

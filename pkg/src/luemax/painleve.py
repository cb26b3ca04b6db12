"""Painleve V and sigma-form structure of the truncated-measure quantities.

The boundary ratio S_n(t) built from the monic system on [0, t] solves a
Painleve V equation in t, and sigma_n(t) = t (d/dt) ln P(max < t) solves
the corresponding Jimbo-Miwa-Okamoto sigma form.  This module evaluates
both residuals term by term with compensated summation, maps S-jets to
sigma values, recovers S-jets from the recurrence by Richardson-refined
central differences, and integrates the sigma form as an ODE with
explicit tracking of the sign branch of t * sigma''.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DomainError
from .exactprob import EnsembleParams, SigmaValue, sigma_exact
from .orthopoly import build_monic_system

# Sigma data travels under one type everywhere.
SigmaState = SigmaValue


@dataclass(frozen=True)
class PainleveState:
    """S_n at one point together with its first two t-derivatives."""

    t: float
    s: float
    s_prime: float
    s_double_prime: float


@dataclass(frozen=True)
class SigmaPath:
    """Sampled sigma-form trajectory with the branch flips encountered."""

    t: np.ndarray
    sigma: np.ndarray
    sigma_prime: np.ndarray
    sigma_double_prime: np.ndarray
    branch_flips: tuple
    initial_sign: int

    @property
    def final(self):
        return SigmaState(
            t=float(self.t[-1]),
            sigma=float(self.sigma[-1]),
            sigma_prime=float(self.sigma_prime[-1]),
            sigma_double_prime=float(self.sigma_double_prime[-1]),
        )


def pv_residual(state: PainleveState, n: int, gamma: float) -> float:
    """Residual of the second-order equation satisfied by S_n(t).

    The six terms are accumulated with math.fsum, so the value is
    independent of summation order.
    """
    t, s, sp, spp = state.t, state.s, state.s_prime, state.s_double_prime
    if t <= 0.0:
        raise DomainError(f"equation lives on t > 0, got t={t}")
    if s == 0.0 or s == 1.0:
        raise DomainError(f"S={s} is a pole of the equation")
    terms = (
        spp,
        -(3.0 * s - 1.0) * sp ** 2 / (2.0 * s * (s - 1.0)),
        sp / t,
        0.5 * gamma ** 2 * (s - 1.0) ** 2 / (t ** 2 * s),
        -(2.0 * n + 1.0 + gamma) * s / t,
        s * (s + 1.0) / (2.0 * (s - 1.0)),
    )
    return math.fsum(terms)


def fn_equation_residual(alpha: float, f: float, f_prime: float,
                         f_double_prime: float, n: int, gamma: float) -> float:
    """Residual of the alpha-variable equation for F_n(alpha) = S_n(4 n alpha).

    Equals 16 n^2 times the t-equation residual under the change of
    variables t = 4 n alpha.
    """
    if alpha <= 0.0:
        raise DomainError(f"equation lives on alpha > 0, got {alpha}")
    if f == 0.0 or f == 1.0:
        raise DomainError(f"F={f} is a pole of the equation")
    terms = (
        f_double_prime,
        -(3.0 * f - 1.0) * f_prime ** 2 / (2.0 * f * (f - 1.0)),
        f_prime / alpha,
        -4.0 * n * (2.0 * n + 1.0 + gamma) * f / alpha,
        0.5 * gamma ** 2 * (f - 1.0) ** 2 / (alpha ** 2 * f),
        8.0 * n ** 2 * f * (f + 1.0) / (f - 1.0),
    )
    return math.fsum(terms)


def sigma_form_residual(state, n: int, gamma: float) -> float:
    """Residual of (t sigma'')^2 = 4 sigma'^2 (sigma - n(n+gamma) - t sigma')
    + ((2n + gamma - t) sigma' + sigma)^2.

    Accepts any object with t / sigma / sigma_prime / sigma_double_prime
    attributes, in particular the exact-evaluation results.
    """
    t = state.t
    sg, sp, spp = state.sigma, state.sigma_prime, state.sigma_double_prime
    kappa = n * (n + gamma)
    linear = (2.0 * n + gamma - t) * sp + sg
    terms = (
        (t * spp) ** 2,
        -4.0 * sp ** 2 * (sg - kappa - t * sp),
        -linear * linear,
    )
    return math.fsum(terms)


def sigma_from_s(t: float, s: float, s_prime: float, n: int,
                 gamma: float) -> float:
    """Map an S-jet at t to the sigma value at the same point."""
    if s == 0.0 or s == 1.0:
        raise DomainError(f"S={s} is a pole of the bridge")
    terms = (
        -0.25 * gamma ** 2 / s,
        0.25 * t * (4.0 * n + 2.0 * gamma - t) / (s - 1.0),
        -0.25 * t ** 2 / (s - 1.0) ** 2,
        0.25 * t ** 2 * s_prime ** 2 / (s * (s - 1.0) ** 2),
    )
    return math.fsum(terms)


def s_state_by_differencing(n: int, gamma: float, t: float,
                            rel_step: float = 1e-3,
                            node_count=None) -> PainleveState:
    """S_n(t) with derivatives from five-point differences, once refined.

    Builds the monic system at seven nearby truncation points (offsets
    0, +-h/2, +-h, +-2h with h = rel_step * t) and combines the two
    five-point stencils at steps h and h/2 by one Richardson step.
    """
    if t <= 0.0:
        raise DomainError(f"truncation point must be positive, got {t}")
    h = rel_step * t

    def s_at(offset_halves):
        system = build_monic_system(n, gamma, t + offset_halves * 0.5 * h,
                                    node_count)
        return system.s_values[n]

    values = {j: s_at(j) for j in (-4, -2, -1, 0, 1, 2, 4)}
    d1_h = (-values[4] + 8.0 * values[2]
            - 8.0 * values[-2] + values[-4]) / (12.0 * h)
    d1_half = (-values[2] + 8.0 * values[1]
               - 8.0 * values[-1] + values[-2]) / (6.0 * h)
    d2_h = (-values[4] + 16.0 * values[2] - 30.0 * values[0]
            + 16.0 * values[-2] - values[-4]) / (12.0 * h ** 2)
    d2_half = (-values[2] + 16.0 * values[1] - 30.0 * values[0]
               + 16.0 * values[-1] - values[-2]) / (3.0 * h ** 2)
    return PainleveState(
        t=t,
        s=values[0],
        s_prime=(16.0 * d1_half - d1_h) / 15.0,
        s_double_prime=(16.0 * d2_half - d2_h) / 15.0,
    )


def integrate_sigma_form(n: int, gamma: float, t0: float, t1: float,
                         sigma0: float, sigma0_prime: float,
                         t_eval=None, initial_sign=None,
                         rtol: float = 1e-12, atol: float = 1e-14,
                         max_segments: int = 64) -> SigmaPath:
    """Integrate the sigma form from (t0, sigma0, sigma0') to t1.

    The equation determines (t sigma'')^2, so sigma'' is taken as
    sign * sqrt(rhs) / t and the sign is flipped whenever the
    right-hand side touches zero.  Touch points are located by a
    terminal event on the total t-derivative of the right-hand side;
    an event with the right-hand side away from zero is an ordinary
    interior extremum and continues on the same branch.

    The distribution branch is a saddle of this equation in the bulk
    0 < t < 4n: nearby solutions separate at unit-order exponential
    rate both forward and backward in t, so end-to-end accuracy is
    limited by the conditioning of the requested direction, not by the
    local error control.  Decreasing t is the contracting direction
    along the branch; increasing t is benign only past the spectrum
    edge.
    """
    if t0 <= 0.0 or t1 <= 0.0:
        raise DomainError(f"endpoints must be positive, got ({t0}, {t1})")
    if t0 == t1:
        raise DomainError("empty integration range")
    kappa = n * (n + gamma)
    shift = 2.0 * n + gamma

    def rhs_value(t, sg, sp):
        linear = (shift - t) * sp + sg
        return 4.0 * sp ** 2 * (sg - kappa - t * sp) + linear * linear

    if initial_sign is None:
        probe = sigma_exact(EnsembleParams(n, gamma), t0)
        initial_sign = 1 if probe.sigma_double_prime >= 0.0 else -1
    sign = [1 if initial_sign >= 0 else -1]
    rhs_seen = [0.0]

    def fun(t, y):
        sg, sp = y
        rhs = rhs_value(t, sg, sp)
        if rhs > rhs_seen[0]:
            rhs_seen[0] = rhs
        spp = sign[0] * math.sqrt(max(rhs, 0.0)) / t
        return (sp, spp)

    def rhs_slope(t, y):
        # total t-derivative of the right-hand side along the trajectory
        sg, sp = y
        linear = (shift - t) * sp + sg
        rhs = rhs_value(t, sg, sp)
        if rhs < 1e-12 * (1.0 + rhs_seen[0]):
            # rhs sits at the rounding floor (saturated tail or the
            # immediate vicinity of a touch); freeze the event function
            # so noise cannot fire crossings
            return 1.0
        spp = sign[0] * math.sqrt(max(rhs, 0.0)) / t
        d_sigma = 4.0 * sp ** 2 + 2.0 * linear
        d_slope = (8.0 * sp * (sg - kappa - t * sp) - 4.0 * t * sp ** 2
                   + 2.0 * linear * (shift - t))
        d_explicit = -4.0 * sp ** 3 - 2.0 * linear * sp
        return d_explicit + d_sigma * sp + d_slope * spp

    rhs_slope.terminal = True
    rhs_slope.direction = 0

    direction = 1.0 if t1 > t0 else -1.0
    if t_eval is None:
        t_eval = np.linspace(t0, t1, 257)
    t_eval = np.asarray(t_eval, dtype=float)
    if np.any((t_eval - t0) * direction < -1e-12) or \
            np.any((t_eval - t1) * direction > 1e-12):
        raise DomainError("evaluation grid leaves the integration range")

    out_t, out_sg, out_sp, out_spp = [], [], [], []

    def record(t, sg, sp):
        out_t.append(float(t))
        out_sg.append(float(sg))
        out_sp.append(float(sp))
        rhs = rhs_value(t, sg, sp)
        out_spp.append(sign[0] * math.sqrt(max(rhs, 0.0)) / t)

    flips = []
    cur_t = float(t0)
    cur_y = np.array([sigma0, sigma0_prime], dtype=float)
    include_start = True
    for _ in range(max_segments):
        seg = solve_ivp(fun, (cur_t, t1), cur_y, method="DOP853",
                        rtol=rtol, atol=atol, dense_output=True,
                        events=rhs_slope)
        if not seg.success:
            raise ConvergenceError(
                f"integration stalled near t={seg.t[-1]}: {seg.message}")
        seg_end = float(seg.t[-1])
        if include_start:
            lo = (t_eval - cur_t) * direction >= -1e-12
        else:
            lo = (t_eval - cur_t) * direction > 1e-12
        hi = (t_eval - seg_end) * direction <= 1e-12
        for u in t_eval[lo & hi]:
            sg, sp = seg.sol(u)
            record(u, sg, sp)
        include_start = False
        y_end = seg.y[:, -1]
        if seg.status != 1:
            if not out_t or abs(out_t[-1] - seg_end) > 1e-10 * max(1.0, abs(seg_end)):
                record(seg_end, y_end[0], y_end[1])
            break
        rhs_end = rhs_value(seg_end, y_end[0], y_end[1])
        if rhs_end < 1e-6 * (1.0 + rhs_seen[0]):
            # genuine touch of the square root: switch branch
            sign[0] = -sign[0]
            flips.append(seg_end)
        # nudge past the event so it does not refire at the restart
        eps = 1e-10 * max(abs(seg_end), 1.0) * direction
        slope = fun(seg_end, y_end)
        cur_t = seg_end + eps
        cur_y = y_end + eps * np.asarray(slope)
        if (cur_t - t1) * direction >= 0.0:
            record(t1, cur_y[0], cur_y[1])
            break
    else:
        raise ConvergenceError(
            f"more than {max_segments} branch events; last near t={cur_t}")

    return SigmaPath(
        t=np.array(out_t),
        sigma=np.array(out_sg),
        sigma_prime=np.array(out_sp),
        sigma_double_prime=np.array(out_spp),
        branch_flips=tuple(flips),
        initial_sign=1 if initial_sign >= 0 else -1,
    )

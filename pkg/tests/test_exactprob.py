"""Exact finite-n distribution values, normalization constants, and the
log-derivative jet."""
import math

import numpy as np
import pytest

from luemax.errors import CapabilityError, DomainError
from luemax.exactprob import (EnsembleParams, dn_infinity_log, p_scaled,
                              phat_hankel_oracle, phat_projection,
                              saturation_threshold, sigma_exact)
from luemax.specfun import log_gamma, lower_incomplete_gamma


def test_params_validation():
    with pytest.raises(DomainError):
        EnsembleParams(0, 0.0)
    with pytest.raises(DomainError):
        EnsembleParams(3, -1.0)


def test_rank_one_closed_form():
    got = phat_projection(EnsembleParams(1, 0.0), 1.0).log_value
    assert abs(got - math.log(1.0 - math.exp(-1.0))) < 1e-13


@pytest.mark.parametrize("g", [0.5, 2.5])
@pytest.mark.parametrize("t", [0.5, 3.0])
def test_rank_one_incomplete_gamma_form(g, t):
    got = phat_projection(EnsembleParams(1, g), t).log_value
    ref = lower_incomplete_gamma(g + 1.0, t, log=True) - log_gamma(g + 1.0)
    assert abs(got - ref) < 5e-13


def test_normalization_closed_forms():
    assert abs(dn_infinity_log(EnsembleParams(2, 0.0))) < 1e-12
    assert abs(dn_infinity_log(EnsembleParams(1, 1.3)) - log_gamma(2.3)) < 1e-12
    assert abs(dn_infinity_log(EnsembleParams(3, 1.0)) - math.log(24.0)) < 1e-12


def test_normalization_scaled_variant():
    params = EnsembleParams(3, 1.0)
    shift = 3.0 * 4.0 * math.log(12.0)  # n(n+gamma) ln(4n)
    got = dn_infinity_log(params, scaled=True)
    assert abs(got - (dn_infinity_log(params) - shift)) < 1e-12


def test_projection_and_hankel_routes_agree():
    for n in (2, 5, 8):
        for g in (0.0, 0.5, 2.5):
            for t in (0.5, 2.0, 8.0):
                params = EnsembleParams(n, g)
                a = phat_projection(params, t).log_value
                b = phat_hankel_oracle(params, t).log_value
                assert abs(a - b) < 1e-10, (n, g, t)


def test_hankel_oracle_rank_guard():
    with pytest.raises(CapabilityError):
        phat_hankel_oracle(EnsembleParams(13, 0.0), 1.0)


def test_probe_point_capability_guard():
    with pytest.raises(CapabilityError):
        phat_projection(EnsembleParams(400, 0.0), 1450.0)


def test_saturation():
    assert phat_projection(EnsembleParams(1, 0.0), 50.0).log_value == 0.0
    for n in (2, 8):
        got = phat_projection(EnsembleParams(n, 0.0), 40.0 + 10.0 * n).log_value
        assert got >= -1e-10, n
    assert saturation_threshold(EnsembleParams(8, 0.0)) < 120.0


def test_log_probability_is_nonpositive_and_monotone():
    params = EnsembleParams(4, 0.5)
    grid = np.concatenate([np.linspace(0.2, 6.0, 15),
                           np.linspace(7.0, 30.0, 12)])
    vals = [phat_projection(params, float(t)).log_value for t in grid]
    assert all(v <= 0.0 for v in vals)
    assert all(0.0 <= math.exp(v) <= 1.0 for v in vals)
    assert float(np.min(np.diff(vals))) >= -1e-12


def test_scaled_probability_monotone():
    a4 = p_scaled(EnsembleParams(5, 1.0), 0.4).log_value
    a6 = p_scaled(EnsembleParams(5, 1.0), 0.6).log_value
    assert a4 < a6 < 0.0


def test_scaled_probability_delegates():
    got = p_scaled(EnsembleParams(1, 0.0), 0.25).log_value
    assert abs(got - math.log(1.0 - math.exp(-1.0))) < 1e-13


def test_small_t_power_law_slope():
    n, g = 2, 0.0
    l3 = phat_hankel_oracle(EnsembleParams(n, g), 1e-3).log_value
    l4 = phat_hankel_oracle(EnsembleParams(n, g), 1e-4).log_value
    slope = (l3 - l4) / math.log(10.0)
    assert abs(slope - n * (n + g)) < 1e-2


def test_sigma_small_t_limit():
    sv = sigma_exact(EnsembleParams(2, 0.0), 1e-4)
    assert abs(sv.sigma - 4.0) < 1e-2


def test_sigma_saturates():
    assert sigma_exact(EnsembleParams(3, 1.0), 60.0).sigma <= 1e-8


def test_sigma_matches_log_slope():
    n, g, t, h = 5, 0.5, 10.0, 1e-4
    params = EnsembleParams(n, g)
    sv = sigma_exact(params, t)
    fd = t * (phat_projection(params, t + h).log_value
              - phat_projection(params, t - h).log_value) / (2.0 * h)
    assert abs(sv.sigma - fd) < 1e-6


def test_sigma_derivatives_match_differencing():
    n, g, t = 5, 0.5, 10.0
    params = EnsembleParams(n, g)
    h = 1e-3 * t
    s0 = sigma_exact(params, t)
    vals = [sigma_exact(params, t + k * h).sigma for k in (-2, -1, 0, 1, 2)]
    fd1 = (-vals[4] + 8.0 * vals[3] - 8.0 * vals[1] + vals[0]) / (12.0 * h)
    fd2 = (-vals[4] + 16.0 * vals[3] - 30.0 * vals[2] + 16.0 * vals[1]
           - vals[0]) / (12.0 * h * h)
    assert abs(s0.sigma_prime - fd1) < 1e-7
    assert abs(s0.sigma_double_prime - fd2) < 1e-5


def test_sigma_jet_satisfies_quadratic_relation():
    # (t s'')^2 = 4 s'^2 (s - n(n+g) - t s') + ((2n+g-t) s' + s)^2
    for n in (4, 8):
        for g in (0.0, 1.0):
            for t in (2.0, 5.0, 10.0):
                sv = sigma_exact(EnsembleParams(n, g), t)
                lhs = (t * sv.sigma_double_prime) ** 2
                rhs = (4.0 * sv.sigma_prime ** 2
                       * (sv.sigma - n * (n + g) - t * sv.sigma_prime)
                       + ((2.0 * n + g - t) * sv.sigma_prime + sv.sigma) ** 2)
                assert abs(lhs - rhs) / (lhs + 1.0) < 1e-5, (n, g, t)


def test_rejects_nonpositive_t():
    with pytest.raises(DomainError):
        phat_projection(EnsembleParams(2, 0.0), 0.0)
    with pytest.raises(DomainError):
        sigma_exact(EnsembleParams(2, 0.0), -1.0)

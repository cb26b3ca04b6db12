"""Quadrature rules: polynomial exactness, interval mapping, and the
left-endpoint power weight."""
import math

import numpy as np
import pytest

from luemax.errors import DomainError
from luemax.quadrature import interval_rule, left_singular_rule, legendre_rule
from luemax.specfun import lower_incomplete_gamma


def test_legendre_polynomial_exactness():
    x, w = legendre_rule(6)
    for k in range(12):  # exact through degree 2m-1
        got = float(np.sum(w * x ** k))
        ref = 0.0 if k % 2 else 2.0 / (k + 1.0)
        assert abs(got - ref) < 1e-14, k


def test_legendre_rule_is_cached_and_readonly():
    x1, w1 = legendre_rule(40)
    x2, w2 = legendre_rule(40)
    assert x1 is x2 and w1 is w2
    assert not x1.flags.writeable and not w1.flags.writeable


def test_interval_rule_moments():
    x, w = interval_rule(1.0, 3.0, 8)
    assert abs(float(np.sum(w * x ** 2)) - 26.0 / 3.0) < 1e-13
    x, w = interval_rule(0.0, 2.0, 30)
    assert abs(float(np.sum(w * np.exp(x))) - math.expm1(2.0)) < 1e-12


def test_left_singular_rule_power_moments():
    g, t = 0.7, 2.5
    x, w = left_singular_rule(t, g, 10)
    for k in range(9):
        got = float(np.sum(w * x ** k))
        ref = t ** (g + k + 1.0) / (g + k + 1.0)
        assert abs(got - ref) / ref < 1e-13, k


def test_left_singular_rule_against_incomplete_gamma():
    g, t = 1.3, 6.0
    x, w = left_singular_rule(t, g, 60)
    got = float(np.sum(w * np.exp(-x)))
    ref = lower_incomplete_gamma(g + 1.0, t)
    assert abs(got - ref) / ref < 1e-12


def test_rules_reject_bad_inputs():
    with pytest.raises(DomainError):
        legendre_rule(0)
    with pytest.raises(DomainError):
        interval_rule(2.0, 2.0, 5)
    with pytest.raises(DomainError):
        left_singular_rule(1.0, -1.5, 5)

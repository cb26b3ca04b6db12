"""Cached quadrature rules for integrals on [0, t].

Rules are cached by node count (and left-endpoint exponent where that
applies) and handed out as read-only arrays, so cached instances can be
shared between threads.  Insertion happens under a lock exactly once per
key; lookups are lock-free.
"""

import threading

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import DomainError

_CACHE = {}
_LOCK = threading.Lock()


def _cached(key, builder):
    try:
        return _CACHE[key]
    except KeyError:
        pass
    with _LOCK:
        if key not in _CACHE:
            nodes, weights = builder()
            nodes = np.ascontiguousarray(nodes, dtype=float)
            weights = np.ascontiguousarray(weights, dtype=float)
            nodes.setflags(write=False)
            weights.setflags(write=False)
            _CACHE[key] = (nodes, weights)
    return _CACHE[key]


def legendre_rule(m):
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    if m < 1:
        raise DomainError(f"node count must be positive, got {m}")
    return _cached(("legendre", int(m)), lambda: roots_legendre(int(m)))


def interval_rule(a, b, m):
    """Gauss-Legendre rule mapped to [a, b]: sum(w*f(x)) ~ int_a^b f."""
    if not b > a:
        raise DomainError(f"empty interval [{a}, {b}]")
    u, w = legendre_rule(m)
    half = 0.5 * (b - a)
    return a + half * (u + 1.0), half * w


def left_singular_rule(t, gamma, m):
    """Rule on [0, t] absorbing the x**gamma factor at the left endpoint.

    Returns nodes x and weights w with sum(w*f(x)) ~ int_0^t x**gamma f(x) dx.
    The Gauss-Jacobi construction keeps the branch-point factor exact, which
    a plain polynomial rule cannot do for fractional gamma.

    Parameters
    ----------
    t : float
        Right endpoint, > 0.
    gamma : float
        Left-endpoint exponent, > -1.
    m : int
        Node count.
    """
    if gamma <= -1.0:
        raise DomainError(f"endpoint exponent must exceed -1, got {gamma}")
    if not t > 0.0:
        raise DomainError(f"interval length must be positive, got t={t}")
    if m < 1:
        raise DomainError(f"node count must be positive, got {m}")
    key = ("jacobi", int(m), float(gamma))
    u, w = _cached(key, lambda: roots_jacobi(int(m), 0.0, float(gamma)))
    # x = t(1+u)/2 maps [-1,1] -> [0,t]; the (1+u)^gamma weight plus the
    # Jacobian contribute (t/2)^(gamma+1).
    x = 0.5 * t * (u + 1.0)
    return x, (0.5 * t) ** (gamma + 1.0) * w

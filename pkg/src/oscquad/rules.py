"""Gauss-Legendre rules on [-1, 1] and single-panel integration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError, NumericError

MAX_ORDER = 64


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of an ``order``-point Gauss-Legendre rule."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, QuadratureRule):
            return NotImplemented
        return (
            self.order == other.order
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self):
        return hash((self.order, self.nodes.tobytes(), self.weights.tobytes()))


def _legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return P_n(x) and P_n'(x) by the three-term recurrence."""
    p0 = np.ones_like(x)
    p1 = x.copy()
    if n == 0:
        return p0, np.zeros_like(x)
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


@lru_cache(maxsize=None)
def _compute(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    half = (order + 1) // 2
    i = np.arange(1, half + 1)
    # Chebyshev-angle guesses for the positive roots, largest first.
    x = np.cos(np.pi * (i - 0.25) / (order + 0.5))
    for _ in range(100):
        p, dp = _legendre(order, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    else:
        raise NumericError(f"Legendre root iteration did not converge for order {order}")
    p, dp = _legendre(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    pos_x = x[::-1]
    pos_w = w[::-1]
    if order % 2:
        # middle root is exactly zero; keep its sign positive
        pos_x[0] = 0.0
        nodes = np.concatenate([-x[:-1], pos_x])
        weights = np.concatenate([w[:-1], pos_w])
    else:
        nodes = np.concatenate([-x, pos_x])
        weights = np.concatenate([w, pos_w])
    return tuple(nodes.tolist()), tuple(weights.tolist())


def gauss_legendre(order: int) -> QuadratureRule:
    """Return the Gauss-Legendre rule with ``order`` nodes, 1 <= order <= 64.

    Nodes come from Newton's method on the Legendre polynomial; only the
    non-negative half is iterated and the rest is mirrored, so the rule is
    exactly symmetric.
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise InvalidArgumentError(f"order must be an integer, got {order!r}")
    order = int(order)
    if not 1 <= order <= MAX_ORDER:
        raise InvalidArgumentError(f"order must lie in [1, {MAX_ORDER}], got {order}")
    if order == 1:
        nodes, weights = np.array([0.0]), np.array([2.0])
    else:
        n, w = _compute(order)
        nodes, weights = np.array(n), np.array(w)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(order, nodes, weights)


def evaluate(f, x: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array of abscissae.

    Vectorized callables are called once; scalar-only callables (e.g. ones
    built on :mod:`math`) fall back to elementwise evaluation.
    """
    try:
        y = np.asarray(f(x), dtype=float)
    except (TypeError, ValueError):
        y = np.array([float(f(float(t))) for t in x.ravel()]).reshape(x.shape)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape).astype(float)
    return y


def check_finite(y: np.ndarray, x: np.ndarray) -> None:
    if not np.all(np.isfinite(y)):
        bad = np.flatnonzero(~np.isfinite(y.ravel()))[0]
        raise NumericError(
            f"integrand is not finite at x={x.ravel()[bad]!r}", abscissa=float(x.ravel()[bad])
        )


def integrate_panel(f, a: float, b: float, rule: QuadratureRule) -> float:
    """Integrate ``f`` over [a, b] with ``rule`` mapped affinely.

    The endpoints are never sampled, so removable singularities at ``a`` or
    ``b`` are harmless.
    """
    if not a < b:
        raise InvalidArgumentError(f"need a < b, got a={a!r}, b={b!r}")
    half = 0.5 * (b - a)
    x = a + half * (rule.nodes + 1.0)
    y = evaluate(f, x)
    check_finite(y, x)
    return float(half * math.fsum(rule.weights * y))

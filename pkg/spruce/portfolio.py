"""
Simplex portfolio arithmetic.

An e-vector is a length ``d+1`` array of nonnegative e-values for one
observation; a portfolio is a point of the ``d``-simplex, the bet placed on
it. Every wealth quantity here is a natural log, never a raw product.

For ``d == 1`` a portfolio ``(1 - t, t)`` is identified with its second
weight ``t`` and the in-hindsight maximum is found by bracketed root finding
on the derivative of the (concave) objective. Larger ``d`` falls back to
projected-gradient ascent.
"""

import math
from collections import namedtuple

import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from spruce.exceptions import (
    DegenerateInputError, DimensionError, UnsupportedDimensionError,
)


#: Absolute tolerance on ``sum(weights) == 1``.
SIMPLEX_ATOL = 1e-9

#: Increments are clipped below at this value inside line searches.
TINY = 1e-300

#: Default optimizer tolerance, in units of the second weight for d == 1.
DEFAULT_TOL = 1e-10

_GRADIENT_RTOL = 1e-8
_GRADIENT_MAX_ITER = 10000

# Half-width of the warm-start bracket around a previous optimum.
_WARM_BRACKET = 1e-3


ModelConstants = namedtuple('ModelConstants', ['d', 'b', 'lambda_tilde'])
ModelConstants.__doc__ = """
Constants of one testing problem: dimension ``d``, almost-sure increment
bound ``b > 1`` and the unit-increment portfolio ``lambda_tilde``.
"""


def as_evector(values, d=None):
    """
    Return ``values`` as a float e-vector, checking shape and sign.
    """
    e = np.asarray(values, dtype=float)
    if e.ndim != 1 or e.shape[0] < 2:
        raise DimensionError("e-vector must be 1-dimensional with d+1 >= 2 entries, got shape %r" % (e.shape,))
    if d is not None and e.shape[0] != d + 1:
        raise DimensionError("e-vector has %d entries, model expects %d" % (e.shape[0], d + 1))
    if np.any(e < 0) or np.any(np.isnan(e)):
        raise DimensionError("e-vector entries must be nonnegative: %r" % (tuple(e),))
    return e


def as_portfolio(weights):
    """
    Return ``weights`` as a float portfolio, checking it lies in the simplex.
    """
    lam = np.asarray(weights, dtype=float)
    if lam.ndim != 1 or lam.shape[0] < 2:
        raise DimensionError("portfolio must be 1-dimensional with d+1 >= 2 entries, got shape %r" % (lam.shape,))
    if np.any(lam < 0) or abs(math.fsum(lam) - 1.0) > SIMPLEX_ATOL:
        raise DimensionError("portfolio is not in the simplex: %r" % (tuple(lam),))
    return lam


def model_constants(d, b, lambda_tilde):
    if d < 1:
        raise DimensionError("d must be a positive integer, got %r" % (d,))
    if not b > 1:
        raise DimensionError("increment bound b must exceed 1, got %r" % (b,))
    lam = as_portfolio(lambda_tilde)
    if lam.shape[0] != d + 1:
        raise DimensionError("lambda_tilde has %d entries, expected %d" % (lam.shape[0], d + 1))
    return ModelConstants(int(d), float(b), tuple(float(x) for x in lam))


def log_increment(portfolio, e):
    """
    Return ``log(portfolio . e)`` in nats; ``-inf`` for a zero increment.
    """
    lam = np.asarray(portfolio, dtype=float)
    e = np.asarray(e, dtype=float)
    if lam.shape != e.shape:
        raise DimensionError("portfolio/e-vector dimension mismatch: %r vs %r" % (lam.shape, e.shape))
    wealth = math.fsum(lam * e)
    if wealth <= 0:
        return -math.inf
    return math.log(wealth)


def co96_regret(n, d):
    """
    Cover–Ordentlich regret bound ``d*log(n+1)/2 + log 2`` for ``n`` rounds.
    """
    if n < 0:
        raise DimensionError("round count must be nonnegative, got %r" % (n,))
    return d * math.log(n + 1) / 2.0 + math.log(2.0)


#
# Objective helpers
#

def _stack(evectors, weights):
    values = np.asarray(evectors, dtype=float)
    if values.ndim == 1:
        values = values[np.newaxis, :]
    if values.ndim != 2 or values.shape[0] == 0:
        raise DimensionError("need a nonempty sequence of e-vectors")
    if values.shape[1] < 2:
        raise DimensionError("e-vectors need d+1 >= 2 entries")
    if np.any(values < 0) or np.any(np.isnan(values)):
        raise DimensionError("e-vector entries must be nonnegative")
    if weights is None:
        weights = np.ones(values.shape[0])
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (values.shape[0],):
            raise DimensionError("weights must match the number of e-vectors")
    keep = weights > 0
    values, weights = values[keep], weights[keep]
    if values.shape[0] == 0:
        raise DimensionError("all e-vector weights are zero")
    if np.any(np.all(values == 0, axis=1)):
        raise DegenerateInputError("an all-zero e-vector makes the log-wealth objective identically -inf")
    return values, weights


def objective(portfolio, evectors, weights=None):
    """
    Weighted log-wealth ``sum_i w_i log(portfolio . E_i)``; may be ``-inf``.
    """
    values, weights = _stack(evectors, weights)
    lam = np.asarray(portfolio, dtype=float)
    if lam.shape[0] != values.shape[1]:
        raise DimensionError("portfolio/e-vector dimension mismatch")
    wealth = values @ lam
    if np.any(wealth <= 0):
        return -math.inf
    return math.fsum(weights * np.log(wealth))


def _maximize_line(values, weights, tol, start):
    """
    d == 1: maximize sum w log(e0 + t (e1 - e0)) over t in [0, 1].
    """
    base = values[:, 0]
    diff = values[:, 1] - values[:, 0]
    if not np.any(diff):
        return 0.5

    def derivative(t):
        return math.fsum(weights * diff / np.maximum(base + t * diff, TINY))

    if derivative(0.0) <= 0:
        return 0.0
    if derivative(1.0) >= 0:
        return 1.0
    xtol = min(tol, DEFAULT_TOL)
    if start is not None:
        lo = max(0.0, start - _WARM_BRACKET)
        hi = min(1.0, start + _WARM_BRACKET)
        if lo < hi and derivative(lo) > 0 > derivative(hi):
            return optimize.brentq(derivative, lo, hi, xtol=xtol)
    return optimize.brentq(derivative, 0.0, 1.0, xtol=xtol)


def project_simplex(v):
    """
    Euclidean projection of ``v`` onto the probability simplex.
    """
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.shape[0] + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _maximize_simplex(values, weights, start):
    """
    d >= 2: projected-gradient ascent with backtracking (Armijo) steps.
    """
    k = values.shape[1]
    lam = np.full(k, 1.0 / k) if start is None else project_simplex(start)

    def f(x):
        return math.fsum(weights * np.log(np.maximum(values @ x, TINY)))

    current = f(lam)
    step = 1.0
    for _ in range(_GRADIENT_MAX_ITER):
        grad = values.T @ (weights / np.maximum(values @ lam, TINY))
        while True:
            candidate = project_simplex(lam + step * grad)
            value = f(candidate)
            if value >= current + 1e-4 * float(grad @ (candidate - lam)) or step < 1e-16:
                break
            step /= 2.0
        if not value > current:
            break
        improvement = value - current
        lam, previous, current = candidate, current, value
        if improvement <= _GRADIENT_RTOL * max(1.0, abs(previous)):
            break
        step *= 2.0
    return lam


def best_in_hindsight(evectors, tol=DEFAULT_TOL, weights=None, anchor=None, start=None):
    """
    Maximize ``sum_i w_i log(lambda . E_i)`` over the simplex.

    ``evectors`` is a sequence (or 2-D array) of e-vectors, optionally with
    multiplicities ``weights`` so a histogram of repeated e-vectors can stand
    in for the full history. Returns ``(portfolio, value)``.

    ``anchor`` is a portfolio known to be feasible (typically the model's
    unit-increment portfolio); the returned value is never below the
    objective at the anchor. ``start`` warm-starts the search from a previous
    optimum (the second weight for d == 1, a full portfolio otherwise).

    Raises `~spruce.exceptions.DegenerateInputError` if some e-vector is all
    zeros.
    """
    if not tol > 0:
        raise DimensionError("tolerance must be positive, got %r" % (tol,))
    values, weights = _stack(evectors, weights)
    if values.shape[1] == 2:
        t = _maximize_line(values, weights, tol, start)
        lam = np.array([1.0 - t, t])
    else:
        lam = _maximize_simplex(values, weights, start)
    value = objective(lam, values, weights)
    if anchor is not None:
        anchor = as_portfolio(anchor)
        anchored = objective(anchor, values, weights)
        if anchored > value:
            lam, value = anchor.copy(), anchored
    return lam, value


def kelly_oracle(support, probabilities, tol=DEFAULT_TOL, anchor=None):
    """
    Log-optimal portfolio of a finitely supported e-vector distribution.

    Returns ``(portfolio, growth)`` where growth is the maximal expected log
    increment. Probabilities are renormalized to sum to one.
    """
    probabilities = np.asarray(probabilities, dtype=float)
    if probabilities.size == 0:
        raise DimensionError("Kelly oracle needs a nonempty support")
    if np.any(probabilities < 0) or not probabilities.sum() > 0:
        raise DimensionError("probabilities must be nonnegative and not all zero")
    probabilities = probabilities / probabilities.sum()
    return best_in_hindsight(support, tol=tol, weights=probabilities, anchor=anchor)


def grid_kelly(support, probabilities, resolution=1e-5):
    """
    Brute-force Kelly oracle for d == 1 on a grid of second weights.

    A 1e-3 grid locates the optimum; a ``resolution`` grid over the
    neighbouring cells refines it. Independent of the root-finding path in
    `kelly_oracle`, against which it is used as a cross-check.
    """
    values = np.asarray(support, dtype=float)
    probabilities = np.asarray(probabilities, dtype=float)
    probabilities = probabilities / probabilities.sum()
    if values.ndim != 2 or values.shape[1] != 2:
        raise UnsupportedDimensionError("grid oracle is only defined for d == 1")

    def scan(grid):
        wealth = values[:, 0][:, np.newaxis] * (1.0 - grid) + values[:, 1][:, np.newaxis] * grid
        with np.errstate(divide='ignore'):
            logs = np.log(wealth)
        return probabilities @ np.where(probabilities[:, np.newaxis] > 0, logs, 0.0)

    coarse = np.linspace(0.0, 1.0, 1001)
    objective_values = scan(coarse)
    best = coarse[int(np.argmax(objective_values))]
    lo, hi = max(0.0, best - 2e-3), min(1.0, best + 2e-3)
    steps = int(round((hi - lo) / resolution))
    fine = np.linspace(lo, hi, steps + 1)
    objective_values = scan(fine)
    i = int(np.argmax(objective_values))
    return np.array([1.0 - fine[i], fine[i]]), float(objective_values[i])


#
# Universal portfolio (d == 1)
#

#: Quadrature nodes for the Beta(1/2, 1/2) mixture.
UP_NODE_COUNT = 2001


def _up_nodes(m):
    # Gauss-Chebyshev: exact against the arcsine density for polynomials of
    # degree < 2m; nodes are interior so log(t) and log(1-t) stay finite.
    k = np.arange(1, m + 1)
    t = (1.0 + np.cos((2 * k - 1) * np.pi / (2 * m))) / 2.0
    return t[::-1].copy()


_NODES = _up_nodes(UP_NODE_COUNT)
_LOG_NODES = np.log(_NODES)
_LOG_WEIGHT = -math.log(UP_NODE_COUNT)


class UniversalPortfolio(object):
    """
    Dirichlet(1/2, 1/2) mixture over constant-rebalanced portfolios, d == 1.

    Immutable: `update` returns a new instance. The log wealth of every
    quadrature node is carried so the next portfolio is a weighted average
    computed with log-sum-exp.
    """
    __slots__ = ('node_log_wealth',)

    def __init__(self, node_log_wealth=None):
        if node_log_wealth is None:
            node_log_wealth = np.zeros(UP_NODE_COUNT)
        self.node_log_wealth = node_log_wealth

    def portfolio(self):
        log_norm = logsumexp(self.node_log_wealth)
        if not np.isfinite(log_norm):
            # Absorbed at zero wealth; the bet no longer matters.
            return np.array([0.5, 0.5])
        t = math.exp(logsumexp(self.node_log_wealth + _LOG_NODES) - log_norm)
        t = min(max(t, 0.0), 1.0)
        return np.array([1.0 - t, t])

    def log_wealth(self):
        """
        Log of the mixture wealth, i.e. the product of all past UP increments.
        """
        return float(logsumexp(self.node_log_wealth) + _LOG_WEIGHT)

    def update(self, e):
        e = as_evector(e, d=1)
        with np.errstate(divide='ignore'):
            step = np.log(e[0] * (1.0 - _NODES) + e[1] * _NODES)
        return UniversalPortfolio(self.node_log_wealth + step)


def universal_portfolio_next(evectors):
    """
    The universal portfolio for the round after ``evectors``.

    Only ``d == 1`` is supported; an empty history gives the prior mean
    ``(0.5, 0.5)``.
    """
    up = UniversalPortfolio()
    for e in evectors:
        e = np.asarray(e, dtype=float)
        if e.shape[0] != 2:
            raise UnsupportedDimensionError("universal portfolio mixture is only implemented for d == 1")
        up = up.update(e)
    return up.portfolio()

"""
E-value models: the ``(d+1)``-vectors of null e-values for each testing
problem, plus each problem's constants ``(d, b, lambda_tilde)``.

All four problems here have ``d == 1``. Each e-vector satisfies
``lambda_tilde . E == 1`` (exactly for the one-sided, tuple and ATE models,
to rounding for the two-sided model) and ``max(E) <= b``.
"""

from collections import namedtuple

import numpy as np

from spruce.exceptions import ConfigError, DomainError
from spruce.portfolio import model_constants


ONE_SIDED = 'one_sided_mean'
TWO_SIDED = 'two_sided_mean'
TUPLE_EQUALITY = 'tuple_equality'
ATE = 'ate_threshold'

KINDS = (ONE_SIDED, TWO_SIDED, TUPLE_EQUALITY, ATE)


TestingProblem = namedtuple('TestingProblem', ['kind', 'mu0', 'delta', 'pi'])
TestingProblem.__doc__ = """
A testing problem: ``kind`` plus the parameters it uses (``mu0`` for the
mean-testing kinds, ``delta`` and propensity ``pi`` for the ATE kind).
"""


def _check_unit(name, value):
    if not 0.0 <= value <= 1.0:
        raise DomainError("%s must lie in [0, 1], got %r" % (name, value))
    return float(value)


def transformed_threshold(pi, delta):
    """
    Map the ATE threshold into the unit interval: ``pi (1 + delta (1 - pi))``.
    """
    return pi * (1.0 + delta * (1.0 - pi))


def make_problem(kind, mu0=0.5, delta=0.0, pi=0.5):
    """
    Validate and build a `TestingProblem`.

    Raises `~spruce.exceptions.ConfigError` when the parameters would make
    the increment bound ``b`` infinite.
    """
    if kind not in KINDS:
        raise ConfigError("unknown problem kind %r (expected one of %s)" % (kind, ", ".join(KINDS)))
    if kind in (ONE_SIDED, TWO_SIDED):
        if not 0.0 < mu0 < 1.0:
            raise ConfigError("mu0 must lie strictly inside (0, 1) for %s, got %r" % (kind, mu0))
    if kind == ATE:
        if not 0.0 < pi < 1.0:
            raise ConfigError("propensity pi must lie strictly inside (0, 1), got %r" % (pi,))
        if not -1.0 <= delta <= 1.0:
            raise ConfigError("delta must lie in [-1, 1], got %r" % (delta,))
        threshold = transformed_threshold(pi, delta)
        if not 0.0 < threshold < 1.0:
            raise ConfigError(
                "transformed threshold pi(1 + delta(1 - pi)) = %r must lie inside (0, 1)" % (threshold,))
    return TestingProblem(kind, float(mu0), float(delta), float(pi))


def constants(problem):
    """
    `~spruce.portfolio.ModelConstants` of ``problem``.
    """
    kind = problem.kind
    if kind == ONE_SIDED:
        return model_constants(1, 1.0 / problem.mu0, (1.0, 0.0))
    if kind == TWO_SIDED:
        mu0 = problem.mu0
        return model_constants(1, max(1.0 / (1.0 - mu0), 1.0 / mu0), (1.0 - mu0, mu0))
    if kind == TUPLE_EQUALITY:
        return model_constants(1, 2.0, (0.5, 0.5))
    if kind == ATE:
        return model_constants(1, 1.0 / transformed_threshold(problem.pi, problem.delta), (1.0, 0.0))
    raise ConfigError("unknown problem kind %r" % (kind,))


def one_sided_evector(y, mu0):
    y = _check_unit('outcome', y)
    return np.array([1.0, y / mu0])


def two_sided_evector(y, mu0):
    y = _check_unit('outcome', y)
    return np.array([(1.0 - y) / (1.0 - mu0), y / mu0])


def tuple_equality_evector(x, y):
    x = _check_unit('x', x)
    y = _check_unit('y', y)
    z = ((x - y) + 1.0) / 2.0
    return np.array([2.0 * (1.0 - z), 2.0 * z])


def horvitz_thompson(y_obs, z, pi):
    """
    Inverse-propensity estimate of the individual treatment effect.
    """
    return y_obs * (z / pi - (1 - z) / (1.0 - pi))


def ate_evector(y_obs, z, pi, delta):
    """
    E-vector ``(1, psi_low / delta_low)`` for testing ``ATE <= delta``.

    ``psi_low`` is the Horvitz–Thompson estimate mapped into [0, 1] by
    ``x -> pi (1 + x (1 - pi))``; ``delta_low`` is the threshold under the
    same map.
    """
    y_obs = _check_unit('observed outcome', y_obs)
    if z not in (0, 1):
        raise DomainError("treatment indicator must be 0 or 1, got %r" % (z,))
    psi = horvitz_thompson(y_obs, z, pi)
    psi_low = min(max(transformed_threshold(pi, psi), 0.0), 1.0)
    return np.array([1.0, psi_low / transformed_threshold(pi, delta)])


def evector(problem, observation, z=None):
    """
    Dispatch to the e-vector constructor of ``problem.kind``.

    ``observation`` is a scalar outcome, except for tuple equality where it
    is an ``(x, y)`` pair; ``z`` is the treatment indicator of the ATE kind.
    """
    kind = problem.kind
    if kind == ONE_SIDED:
        return one_sided_evector(observation, problem.mu0)
    if kind == TWO_SIDED:
        return two_sided_evector(observation, problem.mu0)
    if kind == TUPLE_EQUALITY:
        x, y = observation
        return tuple_equality_evector(x, y)
    if kind == ATE:
        return ate_evector(observation, z, problem.pi, problem.delta)
    raise ConfigError("unknown problem kind %r" % (kind,))

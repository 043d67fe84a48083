"""
Arm-selection policies.

``spruce`` is the upper-confidence rule whose bonus adds sub-exponential
concentration terms to the per-round portfolio regret bound. The other kinds
are comparison baselines. Arms are numbered from 1.
"""

import math
from collections import namedtuple

from spruce.exceptions import ConfigError, DimensionError
from spruce.portfolio import co96_regret


SPRUCE = 'spruce'
ROUND_ROBIN = 'round_robin'
UNIFORM_RANDOM = 'uniform_random'
ORACLE = 'oracle'

POLICIES = (SPRUCE, ROUND_ROBIN, UNIFORM_RANDOM, ORACLE)


UcbParams = namedtuple('UcbParams', ['gamma', 'zeta', 'b'])
Policy = namedtuple('Policy', ['kind', 'params', 'arm'])


def ucb_params(gamma=3.0, zeta=1.0, b=2.0):
    if not gamma > 2:
        raise ConfigError("gamma must satisfy gamma > 2, got %r" % (gamma,))
    if not zeta > 0:
        raise ConfigError("zeta must satisfy zeta > 0, got %r" % (zeta,))
    if not b > 1:
        raise ConfigError("increment bound b must exceed 1, got %r" % (b,))
    return UcbParams(float(gamma), float(zeta), float(b))


def make_policy(kind, params=None, arm=None, K=None):
    """
    Validate and build a `Policy`.

    ``params`` is required for ``spruce``; ``arm`` for ``oracle``, and it
    must lie in ``1..K`` when ``K`` is known.
    """
    if kind not in POLICIES:
        raise ConfigError("unknown policy %r (expected one of %s)" % (kind, ", ".join(POLICIES)))
    if kind == SPRUCE and params is None:
        raise ConfigError("spruce policy needs UCB parameters")
    if kind == ORACLE:
        if arm is None or arm < 1 or (K is not None and arm > K):
            raise ConfigError("oracle arm %r is not a valid arm index" % (arm,))
    return Policy(kind, params, arm)


def _exploration(n, params):
    return math.log(params.zeta * n + 1.0)


def _check_pulled(ledger):
    if ledger.pull_count < 1:
        raise DimensionError("confidence bounds need at least one pull of the arm")
    return ledger.pull_count


def ucb_score(ledger, n, params, d):
    """
    Upper confidence bound of an arm's optimal growth at round ``n``.

    ``bih/N + sqrt(8 b gamma L / N) + 4 gamma L / N + co96_regret(N, d) / N``
    with ``L = log(zeta n + 1)`` and ``N`` the arm's pulls before round
    ``n``.
    """
    N = _check_pulled(ledger)
    L = _exploration(n, params)
    return (ledger.bih_value / N
            + math.sqrt(8.0 * params.b * params.gamma * L / N)
            + 4.0 * params.gamma * L / N
            + co96_regret(N, d) / N)


def lcb_score(ledger, n, params, d):
    """
    Diagnostic lower confidence bound; the linear term uses ``5 gamma L / N``.
    """
    N = _check_pulled(ledger)
    L = _exploration(n, params)
    return (ledger.bih_value / N
            - math.sqrt(8.0 * params.b * params.gamma * L / N)
            - 5.0 * params.gamma * L / N
            - co96_regret(N, d) / N)


def spruce_select(state, n, params):
    """
    Arm ``n`` during the initial sweep, then the UCB argmax.

    Ties go to the lowest arm index.
    """
    if n < 1:
        raise DimensionError("rounds are numbered from 1, got %r" % (n,))
    K = len(state.ledgers)
    if n <= K:
        return n
    d = state.constants.d
    best, best_score = 1, -math.inf
    for arm, ledger in enumerate(state.ledgers, 1):
        score = ucb_score(ledger, n, params, d)
        if score > best_score:
            best, best_score = arm, score
    return best


def round_robin_select(n, K):
    return (n - 1) % K + 1


def uniform_random_select(stream, K):
    """
    Uniform draw from ``1..K`` using the episode's policy stream.
    """
    return int(stream.integers(1, K + 1))


def oracle_select(fixed_arm):
    return fixed_arm


def select(policy, state, n, stream=None):
    """
    Dispatch to the selection rule of ``policy.kind``.
    """
    K = len(state.ledgers)
    if policy.kind == SPRUCE:
        return spruce_select(state, n, policy.params)
    if policy.kind == ROUND_ROBIN:
        return round_robin_select(n, K)
    if policy.kind == UNIFORM_RANDOM:
        return uniform_random_select(stream, K)
    if policy.kind == ORACLE:
        return oracle_select(policy.arm)
    raise ConfigError("unknown policy %r" % (policy.kind,))

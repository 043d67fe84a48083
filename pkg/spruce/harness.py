"""
Data generation, the two data-collection protocols and Monte-Carlo runs.

Each round nature draws the full vector of arm outcomes, but the policy and
the e-process only ever see the outcome of the pulled arm; the other draws
are kept on the record (``counterfactual``) purely so tests can show they are
never read.
"""

import math
from collections import namedtuple
from functools import partial

import numpy as np
from scipy import stats

from spruce import allocation, eprocess, models, streams, tasks
from spruce.exceptions import ConfigError, DomainError, NumericError
from spruce.state import output
from spruce.utils import fastprint


#
# Arm distributions
#

BERNOULLI = 'bernoulli'
BETA = 'beta'
DISCRETE = 'discrete'
PAIR = 'pair'
POTENTIAL_OUTCOMES = 'potential_outcomes'


ArmDistribution = namedtuple('ArmDistribution', ['kind', 'params'])


def _check_probabilities(probabilities):
    total = math.fsum(probabilities)
    if any(p < 0 for p in probabilities) or abs(total - 1.0) > 1e-9:
        raise ConfigError("probabilities must be nonnegative and sum to 1, got %r" % (tuple(probabilities),))


def bernoulli(p):
    if not 0.0 <= p <= 1.0:
        raise ConfigError("bernoulli parameter must lie in [0, 1], got %r" % (p,))
    return ArmDistribution(BERNOULLI, (float(p),))


def beta(a, b):
    if not (a > 0 and b > 0):
        raise ConfigError("beta parameters must be positive, got (%r, %r)" % (a, b))
    return ArmDistribution(BETA, (float(a), float(b)))


def discrete(support, probabilities):
    support = tuple(float(y) for y in support)
    probabilities = tuple(float(p) for p in probabilities)
    if not support or len(support) != len(probabilities):
        raise ConfigError("discrete distribution needs matching, nonempty support and probabilities")
    if any(not 0.0 <= y <= 1.0 for y in support):
        raise ConfigError("discrete support must lie in [0, 1], got %r" % (support,))
    _check_probabilities(probabilities)
    return ArmDistribution(DISCRETE, (support, probabilities))


def pair(first, second):
    """
    Independent ``(x, y)`` outcomes for the tuple-equality problem.
    """
    for dist in (first, second):
        if dist.kind in (PAIR, POTENTIAL_OUTCOMES):
            raise ConfigError("pair components must be scalar distributions")
    return ArmDistribution(PAIR, (first, second))


def potential_outcomes(control, treated):
    """
    Treated outcome law of one arm, plus the shared control law ``Y(0)``.
    """
    for dist in (control, treated):
        if dist.kind in (PAIR, POTENTIAL_OUTCOMES):
            raise ConfigError("potential outcomes must be scalar distributions")
    return ArmDistribution(POTENTIAL_OUTCOMES, (control, treated))


def sample(dist, generator, size):
    """
    ``size`` draws of ``dist``; pairs come back with shape ``(size, 2)`` and
    potential outcomes as draws of the treated law.
    """
    kind = dist.kind
    if kind == BERNOULLI:
        return (generator.random(size) < dist.params[0]).astype(float)
    if kind == BETA:
        return generator.beta(dist.params[0], dist.params[1], size)
    if kind == DISCRETE:
        support, probabilities = dist.params
        return np.asarray(support)[generator.choice(len(support), size=size, p=probabilities)]
    if kind == PAIR:
        first, second = dist.params
        return np.column_stack([sample(first, generator, size), sample(second, generator, size)])
    if kind == POTENTIAL_OUTCOMES:
        return sample(dist.params[1], generator, size)
    raise ConfigError("unknown arm distribution %r" % (kind,))


def mean(dist):
    kind = dist.kind
    if kind == BERNOULLI:
        return dist.params[0]
    if kind == BETA:
        a, b = dist.params
        return a / (a + b)
    if kind == DISCRETE:
        support, probabilities = dist.params
        return math.fsum(y * p for y, p in zip(support, probabilities))
    if kind == POTENTIAL_OUTCOMES:
        return mean(dist.params[1])
    raise ConfigError("mean is not defined for %r arms" % (kind,))


def treatment_effect(dist):
    """
    ``E[Y(a)] - E[Y(0)]`` of a potential-outcomes arm.
    """
    if dist.kind != POTENTIAL_OUTCOMES:
        raise ConfigError("treatment effect needs a potential_outcomes arm")
    control, treated = dist.params
    return mean(treated) - mean(control)


def describe(dist):
    """
    Config-file spelling of ``dist``.
    """
    kind = dist.kind
    if kind == DISCRETE:
        return "discrete(%s)" % ", ".join("%r:%r" % atom for atom in zip(*dist.params))
    if kind in (PAIR, POTENTIAL_OUTCOMES):
        return "%s(%s, %s)" % (kind, describe(dist.params[0]), describe(dist.params[1]))
    return "%s(%s)" % (kind, ", ".join(repr(p) for p in dist.params))


#
# Configuration and traces
#

SimConfig = namedtuple('SimConfig', [
    'arms', 'problem', 'policy', 'statistic_kind', 'alpha', 'horizon',
    'reps', 'master_seed', 'early_stop', 'max_horizon', 'beta_atoms',
    'record_every', 'kelly_portfolios', 'track_up',
])


def sim_config(arms, problem, policy, statistic_kind=eprocess.CO96, alpha=0.05,
               horizon=10000, reps=100, master_seed=0, early_stop=False,
               max_horizon=1000000, beta_atoms=0, record_every=1,
               kelly_portfolios=None, track_up=False):
    """
    Validate and build a `SimConfig`; raises `~spruce.exceptions.ConfigError`.
    """
    arms = tuple(arms)
    if not arms:
        raise ConfigError("at least one arm is required")
    if not 0.0 < alpha < 1.0:
        raise ConfigError("alpha must lie strictly inside (0, 1), got %r" % (alpha,))
    if horizon < len(arms):
        raise ConfigError("horizon (%d) must be at least the number of arms (%d)" % (horizon, len(arms)))
    if reps < 1:
        raise ConfigError("reps must be positive, got %r" % (reps,))
    if max_horizon < 1 or record_every < 1 or beta_atoms < 0:
        raise ConfigError("max_horizon and record_every must be positive, beta_atoms nonnegative")
    if policy.kind == allocation.ORACLE and policy.arm > len(arms):
        raise ConfigError("oracle arm %d exceeds the number of arms (%d)" % (policy.arm, len(arms)))
    if not 0 <= master_seed < 2 ** 64:
        raise ConfigError("master_seed must be a 64-bit unsigned integer, got %r" % (master_seed,))
    _check_arm_kinds(arms, problem)
    return SimConfig(arms, problem, policy, statistic_kind, float(alpha), int(horizon), int(reps),
                     int(master_seed), bool(early_stop), int(max_horizon), int(beta_atoms),
                     int(record_every), kelly_portfolios, bool(track_up))


def _check_arm_kinds(arms, problem):
    for i, arm in enumerate(arms, 1):
        if problem.kind == models.ATE:
            ok = arm.kind == POTENTIAL_OUTCOMES
        elif problem.kind == models.TUPLE_EQUALITY:
            ok = arm.kind == PAIR
        else:
            ok = arm.kind in (BERNOULLI, BETA, DISCRETE)
        if not ok:
            raise ConfigError("arm %d (%s) does not fit problem %s" % (i, arm.kind, problem.kind))


RoundRecord = namedtuple('RoundRecord', [
    'n', 'arm', 'observation', 'assignment', 'evector', 'log_evalue',
    'portfolio', 'counterfactual',
])

StoppingResult = namedtuple('StoppingResult', ['tau', 'censored', 'horizon'])

RunTrace = namedtuple('RunTrace', ['rep', 'K', 'records', 'result', 'statistic_kind', 'constants'])


def _stopping(tau, horizon):
    if tau is None:
        return StoppingResult(None, True, horizon)
    return StoppingResult(tau, False, horizon)


#
# Episodes
#

def _rounds(config, rep, horizon):
    """
    Yield ``(record, state)`` for rounds ``1..horizon`` of one episode.
    """
    problem = config.problem
    rct = problem.kind == models.ATE
    K = len(config.arms)
    state = eprocess.init(K, models.constants(problem), config.statistic_kind,
                          kelly_portfolios=config.kelly_portfolios,
                          track_up=config.track_up or None)
    seed = config.master_seed
    outcomes = [
        streams.RoundStream(seed, rep, streams.OUTCOME, a, partial(sample, dist))
        for a, dist in enumerate(config.arms, 1)
    ]
    policy_stream = streams.PolicyStream(seed, rep)
    if rct:
        control = streams.RoundStream(seed, rep, streams.OUTCOME, 0, partial(sample, config.arms[0].params[0]))
        assignment = streams.assignment_stream(seed, rep, problem.pi)

    for n in range(1, horizon + 1):
        draws = tuple(stream.draw(n) for stream in outcomes)
        arm = allocation.select(config.policy, state, n, policy_stream.at(n))
        portfolio = eprocess.next_portfolio(state, arm)
        z = None
        if rct:
            z = int(assignment.draw(n))
            y0 = float(control.draw(n))
            observation = float(draws[arm - 1]) if z else y0
            e = models.evector(problem, observation, z)
            counterfactual = (y0,) + tuple(float(y) for y in draws)
        elif problem.kind == models.TUPLE_EQUALITY:
            observation = tuple(float(v) for v in draws[arm - 1])
            e = models.evector(problem, observation)
            counterfactual = tuple(tuple(float(v) for v in d) for d in draws)
        else:
            observation = float(draws[arm - 1])
            e = models.evector(problem, observation)
            counterfactual = tuple(float(y) for y in draws)
        state = eprocess.update(state, arm, e)
        record = RoundRecord(n, arm, observation, z, tuple(e), eprocess.log_evalue(state),
                             None if portfolio is None else tuple(portfolio), counterfactual)
        yield record, state


def _trace(config, rep):
    threshold = eprocess.rejection_threshold(config.alpha)
    records, tau = [], None
    for record, state in _rounds(config, rep, config.horizon):
        records.append(record)
        if tau is None and record.log_evalue >= threshold:
            tau = record.n
            if config.early_stop:
                break
    return RunTrace(rep, len(config.arms), tuple(records), _stopping(tau, config.horizon),
                    config.statistic_kind, models.constants(config.problem))


def run_episode(config, rep_index):
    """
    One episode of multi-armed data collection.

    Runs exactly ``config.horizon`` rounds, or stops at the first rejection
    when ``config.early_stop`` is set. The trace result records the first
    rejection either way.
    """
    if config.problem.kind == models.ATE:
        raise ConfigError("%s episodes run through run_rct_episode" % (models.ATE,))
    return _trace(config, rep_index)


def run_rct_episode(config, rep_index):
    """
    One episode of a multi-armed randomized experiment.

    Each round draws ``Z_n ~ Bernoulli(pi)`` and observes the pulled arm's
    treated outcome when ``Z_n = 1``, the control outcome otherwise.
    """
    if config.problem.kind != models.ATE:
        raise ConfigError("randomized experiments need the %s problem, got %s" % (models.ATE, config.problem.kind))
    _check_arm_kinds(config.arms, config.problem)
    return _trace(config, rep_index)


def episode(config, rep_index):
    """
    `run_rct_episode` for the ATE problem, `run_episode` otherwise.
    """
    if config.problem.kind == models.ATE:
        return run_rct_episode(config, rep_index)
    return run_episode(config, rep_index)


def run_until_rejection(config, rep_index, max_horizon=None):
    """
    First rejection time at ``config.alpha``, censored at ``max_horizon``.
    """
    max_horizon = max_horizon or config.max_horizon
    return first_crossings(config, rep_index, [config.alpha], max_horizon)[0]


def first_crossings(config, rep_index, alphas, max_horizon=None):
    """
    `StoppingResult` for each of ``alphas`` from a single run.

    The wealth path does not depend on alpha, so one run up to the largest
    threshold (or ``max_horizon``) serves every level of a sweep.
    """
    max_horizon = max_horizon or config.max_horizon
    thresholds = [eprocess.rejection_threshold(alpha) for alpha in alphas]
    taus = [None] * len(alphas)
    remaining = len(alphas)
    for record, state in _rounds(config, rep_index, max_horizon):
        for i, threshold in enumerate(thresholds):
            if taus[i] is None and record.log_evalue >= threshold:
                taus[i] = record.n
                remaining -= 1
        if not remaining:
            break
    return [_stopping(tau, max_horizon) for tau in taus]


def replay(trace, config):
    """
    Rebuild a trace from on-path data only.

    Allocation and the e-process are rerun from each record's pulled arm,
    observation and assignment; counterfactual draws are dropped. Raises
    `~spruce.exceptions.NumericError` if the policy picks a different arm
    than the one recorded.
    """
    problem = config.problem
    state = eprocess.init(len(config.arms), models.constants(problem), config.statistic_kind,
                          kelly_portfolios=config.kelly_portfolios,
                          track_up=config.track_up or None)
    policy_stream = streams.PolicyStream(config.master_seed, trace.rep)
    records = []
    for record in trace.records:
        arm = allocation.select(config.policy, state, record.n, policy_stream.at(record.n))
        if arm != record.arm:
            raise NumericError("replay diverged at round %d: arm %d, recorded %d" % (record.n, arm, record.arm))
        portfolio = eprocess.next_portfolio(state, arm)
        e = models.evector(problem, record.observation, record.assignment)
        state = eprocess.update(state, arm, e)
        records.append(RoundRecord(record.n, arm, record.observation, record.assignment, tuple(e),
                                   eprocess.log_evalue(state),
                                   None if portfolio is None else tuple(portfolio), None))
    return trace._replace(records=tuple(records))


def checkpoints(config, rep_index, n_grid):
    """
    ``(pull counts, log e-value)`` of one episode at each round in ``n_grid``.
    """
    n_grid = sorted(int(n) for n in n_grid)
    wanted = set(n_grid)
    found = {}
    for record, state in _rounds(config, rep_index, n_grid[-1]):
        if record.n in wanted:
            found[record.n] = (eprocess.pull_counts(state), record.log_evalue)
    return [found[n] for n in n_grid]


def growth_trajectory(trace):
    return [(record.n, record.log_evalue / record.n) for record in trace.records]


#
# Monte Carlo
#

EpisodeSummary = namedtuple('EpisodeSummary', ['rep', 'rows', 'tau', 'pulls'])

MonteCarloSummary = namedtuple('MonteCarloSummary', [
    'trajectories', 'growth', 'stopping', 'histogram', 'rejections',
    'rejection_rate', 'rejection_ci', 'mean_pulls',
])

GROWTH_QUANTILES = (0.1, 0.5, 0.9)


def summarize_episode(config, rep):
    """
    Compact per-episode output: ``(n, arm, log_evalue)`` every
    ``record_every`` rounds (and at the last round), the first rejection time
    and the final pull counts.
    """
    threshold = eprocess.rejection_threshold(config.alpha)
    rows, tau, last = [], None, None
    for record, state in _rounds(config, rep, config.horizon):
        last = record, state
        if record.n % config.record_every == 0:
            rows.append((record.n, record.arm, record.log_evalue))
        if tau is None and record.log_evalue >= threshold:
            tau = record.n
            if config.early_stop:
                break
    record, state = last
    if not rows or rows[-1][0] != record.n:
        rows.append((record.n, record.arm, record.log_evalue))
    return EpisodeSummary(rep, tuple(rows), tau, eprocess.pull_counts(state))


def rejection_interval(rejections, reps, confidence=0.95):
    """
    Wilson interval for a rejection frequency.
    """
    ci = stats.binomtest(rejections, reps).proportion_ci(confidence_level=confidence, method='wilson')
    return float(ci.low), float(ci.high)


def _progress(summary):
    fastprint(".")
    return summary


def _episode_task(config, rep):
    return _progress(summarize_episode(config, rep))


def monte_carlo(config, threads=None):
    """
    Run ``config.reps`` episodes and aggregate them.

    Episodes fan out over ``threads`` workers (default ``env.threads``);
    every aggregate is computed from the summaries sorted by rep, so results
    do not depend on the worker count.
    """
    summaries = tasks.execute(partial(_episode_task, config), range(config.reps), pool_size=threads)
    if output.progress:
        fastprint("\n")
    summaries = sorted(summaries, key=lambda s: s.rep)

    trajectories = [(s.rep,) + row for s in summaries for row in s.rows]

    by_n = {}
    for s in summaries:
        for n, _, log_evalue in s.rows:
            by_n.setdefault(n, []).append(log_evalue / n)
    growth = []
    for n in sorted(by_n):
        if len(by_n[n]) == len(summaries):
            quantiles = np.quantile(np.asarray(by_n[n]), GROWTH_QUANTILES)
            growth.append((n,) + tuple(float(q) for q in quantiles))

    stopping = [(s.rep, s.tau, s.tau is None) for s in summaries]
    taus = np.asarray([s.tau for s in summaries if s.tau is not None], dtype=float)
    if taus.size:
        counts, edges = np.histogram(taus, bins=min(20, taus.size))
        histogram = list(zip(edges[:-1].tolist(), edges[1:].tolist(), counts.tolist()))
    else:
        histogram = []
    rejections = int(taus.size)
    mean_pulls = tuple(float(x) for x in np.mean(np.asarray([s.pulls for s in summaries], dtype=float), axis=0))
    return MonteCarloSummary(
        trajectories=trajectories,
        growth=growth,
        stopping=stopping,
        histogram=histogram,
        rejections=rejections,
        rejection_rate=rejections / float(config.reps),
        rejection_ci=rejection_interval(rejections, config.reps),
        mean_pulls=mean_pulls,
    )


def stopping_study(config, alphas, reps=None, max_horizon=None, threads=None):
    """
    `first_crossings` for ``reps`` seeds; returns one list of
    `StoppingResult` per alpha, ordered by rep.
    """
    for alpha in alphas:
        if not 0.0 < alpha < 1.0:
            raise DomainError("alpha must lie strictly inside (0, 1), got %r" % (alpha,))
    reps = reps or config.reps
    task = partial(_crossings_task, config, list(alphas), max_horizon or config.max_horizon)
    per_rep = tasks.execute(task, range(reps), pool_size=threads)
    if output.progress:
        fastprint("\n")
    return [[results[i] for results in per_rep] for i in range(len(alphas))]


def _crossings_task(config, alphas, max_horizon, rep):
    return _progress(first_crossings(config, rep, alphas, max_horizon))
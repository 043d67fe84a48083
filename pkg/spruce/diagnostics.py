"""
Empirical checks of the guarantees the e-processes and SPRUCE come with.

Every check returns a `CheckReport` carrying the measured quantity, the bound
it was held against and the Monte-Carlo standard error, never a bare
boolean. Checks are pure functions of their inputs and seeds.
"""

import math
from collections import namedtuple
from functools import partial

import numpy as np
from scipy import stats

from spruce import allocation, eprocess, harness, models, streams, tasks
from spruce import portfolio as pf
from spruce.exceptions import ConfigError, DomainError, NumericError


PASS = 'PASS'
FAIL = 'FAIL'
SKIP = 'SKIP'

#: Largest atom count accepted for a discretized continuous arm.
MAX_ATOMS = 10000

#: Allowed gap between the root-finding oracle and the grid brute force.
ORACLE_GRID_TOL = 1e-6

# Purpose tag for diagnostic-only random streams, beside streams.OUTCOME etc.
_DIAGNOSTIC = 3


CheckReport = namedtuple('CheckReport', ['name', 'status', 'measured', 'bound', 'mc_error', 'detail'])


def make_report(name, ok, measured, bound, mc_error=0.0, detail=''):
    return CheckReport(name, PASS if ok else FAIL, float(measured), float(bound), float(mc_error), detail)


#
# Oracle
#

OracleSolution = namedtuple('OracleSolution', ['portfolios', 'growths', 'best_arm', 'growth', 'gaps'])


def outcome_atoms(dist, beta_atoms=0):
    """
    ``(values, probabilities)`` of a scalar outcome law.

    Beta arms are discretized into ``beta_atoms`` equal-mass atoms placed at
    quantile midpoints; without a positive ``beta_atoms`` they raise
    `~spruce.exceptions.ConfigError`.
    """
    kind = dist.kind
    if kind == harness.BERNOULLI:
        p = dist.params[0]
        return np.array([0.0, 1.0]), np.array([1.0 - p, p])
    if kind == harness.DISCRETE:
        support, probabilities = dist.params
        return np.array(support), np.array(probabilities)
    if kind == harness.BETA:
        if not 0 < beta_atoms <= MAX_ATOMS:
            raise ConfigError("beta arms need beta_atoms in 1..%d for oracle computations" % MAX_ATOMS)
        levels = (np.arange(beta_atoms) + 0.5) / beta_atoms
        values = stats.beta.ppf(levels, dist.params[0], dist.params[1])
        return values, np.full(beta_atoms, 1.0 / beta_atoms)
    raise ConfigError("%s is not a scalar outcome law" % (kind,))


def induced_distribution(dist, problem, beta_atoms=0):
    """
    Finite e-vector law ``(support, probabilities)`` that ``dist`` induces
    under ``problem``.
    """
    if problem.kind == models.TUPLE_EQUALITY:
        if dist.kind != harness.PAIR:
            raise ConfigError("tuple equality needs pair arms")
        xs, px = outcome_atoms(dist.params[0], beta_atoms)
        ys, py = outcome_atoms(dist.params[1], beta_atoms)
        support = [models.evector(problem, (x, y)) for x in xs for y in ys]
        probabilities = np.outer(px, py).ravel()
    elif problem.kind == models.ATE:
        if dist.kind != harness.POTENTIAL_OUTCOMES:
            raise ConfigError("ATE testing needs potential_outcomes arms")
        control, treated = dist.params
        y1, p1 = outcome_atoms(treated, beta_atoms)
        y0, p0 = outcome_atoms(control, beta_atoms)
        support = ([models.evector(problem, y, 1) for y in y1]
                   + [models.evector(problem, y, 0) for y in y0])
        probabilities = np.concatenate([problem.pi * p1, (1.0 - problem.pi) * p0])
    else:
        ys, probabilities = outcome_atoms(dist, beta_atoms)
        support = [models.evector(problem, y) for y in ys]
    return np.array(support), np.asarray(probabilities, dtype=float)


def solve_oracle(config):
    """
    Per-arm log-optimal portfolios and growths, best arm and gaps.

    For ``d == 1`` each growth is cross-checked against `grid_kelly`; a
    disagreement raises `~spruce.exceptions.NumericError`.
    """
    problem = config.problem
    lambda_tilde = models.constants(problem).lambda_tilde
    portfolios, growths = [], []
    for arm, dist in enumerate(config.arms, 1):
        support, probabilities = induced_distribution(dist, problem, config.beta_atoms)
        lam, growth = pf.kelly_oracle(support, probabilities, anchor=lambda_tilde)
        if support.shape[1] == 2:
            _, grid_growth = pf.grid_kelly(support, probabilities)
            if not -1e-9 <= growth - grid_growth <= ORACLE_GRID_TOL:
                raise NumericError("oracle growth %r of arm %d disagrees with grid value %r"
                                   % (growth, arm, grid_growth))
        # Rounding of lambda_tilde . E around 1 for the two-sided model.
        if -1e-12 < growth < 0:
            growth = 0.0
        portfolios.append(tuple(float(x) for x in lam))
        growths.append(float(growth))
    best = 0
    for i, growth in enumerate(growths):
        if growth > growths[best]:
            best = i
    top = growths[best]
    return OracleSolution(tuple(portfolios), tuple(growths), best + 1, top,
                          tuple(top - g for g in growths))


#
# Pathwise checks
#

def _replay_wealth(trace):
    """
    Replay ``trace`` keeping both CO96 and UP wealth.
    """
    state = eprocess.init(trace.K, trace.constants, eprocess.CO96, track_up=True)
    for record in trace.records:
        state = eprocess.update(state, record.arm, record.evector)
        yield record, state


def portfolio_regret_check(trace, arm=None):
    """
    Arm-wise portfolio regret along ``trace`` (every arm when ``arm`` is None).

    The universal portfolio's regret must stay in ``[0, co96_regret(N, d)]``
    up to 1e-6; the CO96 statistic's regret must equal the bound.
    """
    d = trace.constants.d
    arms = range(1, trace.K + 1) if arm is None else [arm]
    worst, lowest, identity_error = -math.inf, math.inf, 0.0
    for record, state in _replay_wealth(trace):
        for a in arms:
            ledger = state.ledgers[a - 1]
            if ledger.pull_count == 0:
                continue
            bound = pf.co96_regret(ledger.pull_count, d)
            up_regret = ledger.bih_value - ledger.up_log_wealth
            co96_regret = ledger.bih_value - eprocess.arm_log_wealth(state, a, eprocess.CO96)
            worst = max(worst, up_regret - bound)
            lowest = min(lowest, up_regret)
            identity_error = max(identity_error, abs(co96_regret - bound))
    if worst == -math.inf:
        return CheckReport('portfolio_regret', PASS, 0.0, 1e-6, 0.0, 'no pulls')
    ok = worst <= 1e-6 and lowest >= -1e-6 and identity_error <= 1e-9
    return make_report('portfolio_regret', ok, worst, 1e-6,
                       detail='min regret %.3g, CO96 identity error %.3g' % (lowest, identity_error))


def ordering_check(traces):
    """
    ``log W^CO96 <= log W^UP + 1e-6`` at every round of every trace.
    """
    worst, rounds = -math.inf, 0
    for trace in traces:
        for record, state in _replay_wealth(trace):
            gap = eprocess.log_evalue(state, eprocess.CO96) - eprocess.log_evalue(state, eprocess.UP)
            worst = max(worst, gap)
            rounds += 1
    return make_report('ordering', worst <= 1e-6, worst if rounds else 0.0, 1e-6,
                       detail='%d traces, %d rounds' % (len(traces), rounds))


def random_configs(count, seed, max_rounds=300):
    """
    ``count`` random one-dimensional configurations for fuzzing pathwise
    properties: random problem, 1-4 random arms, random policy and a
    horizon of at most ``max_rounds``.
    """
    rng = streams.generator(seed, 0, _DIAGNOSTIC)
    kinds = (models.ONE_SIDED, models.TWO_SIDED, models.TUPLE_EQUALITY, models.ATE)
    policies = (allocation.SPRUCE, allocation.ROUND_ROBIN, allocation.UNIFORM_RANDOM)

    def scalar():
        choice = rng.integers(3)
        if choice == 0:
            return harness.bernoulli(round(float(rng.uniform(0.05, 0.95)), 3))
        if choice == 1:
            return harness.beta(round(float(rng.uniform(0.5, 4)), 3), round(float(rng.uniform(0.5, 4)), 3))
        weights = rng.dirichlet(np.ones(4))
        return harness.discrete((0.0, 0.25, 0.5, 1.0), weights / weights.sum())

    configs = []
    for _ in range(count):
        kind = kinds[rng.integers(len(kinds))]
        problem = models.make_problem(kind, mu0=round(float(rng.uniform(0.2, 0.8)), 3),
                                      delta=0.0, pi=round(float(rng.uniform(0.3, 0.7)), 3))
        K = int(rng.integers(1, 5))
        arms = []
        control = scalar()
        for _ in range(K):
            if kind == models.TUPLE_EQUALITY:
                arms.append(harness.pair(scalar(), scalar()))
            elif kind == models.ATE:
                arms.append(harness.potential_outcomes(control, scalar()))
            else:
                arms.append(scalar())
        constants = models.constants(problem)
        policy = allocation.make_policy(policies[rng.integers(len(policies))],
                                        params=allocation.ucb_params(3.0, 1.0, constants.b))
        configs.append(harness.sim_config(arms, problem, policy, statistic_kind=eprocess.UP,
                                          horizon=int(rng.integers(K, max_rounds + 1)), reps=1,
                                          master_seed=int(rng.integers(2 ** 32))))
    return configs


#
# Moment and supermartingale checks
#

def mgf_check(dist, problem, theta_grid=(-1.0, -0.5, 0.5, 1.0), samples=10 ** 6, seed=0,
              portfolio=None, beta_atoms=0, slack=4.0):
    """
    Moment generating function of the centered optimal log increment.

    ``E[exp(theta (l - E l))]`` with ``l = log(lambda_Q . E)`` is estimated
    from ``samples`` draws for each ``theta`` and must not exceed ``b`` by
    more than ``slack`` standard errors. The estimate is also held against the
    exact value on the arm's finite support.
    """
    for theta in theta_grid:
        if not -1.0 <= theta <= 1.0:
            raise DomainError("theta must lie in [-1, 1], got %r" % (theta,))
    constants = models.constants(problem)
    support, probabilities = induced_distribution(dist, problem, beta_atoms)
    probabilities = probabilities / probabilities.sum()
    if portfolio is None:
        portfolio, _ = pf.kelly_oracle(support, probabilities, anchor=constants.lambda_tilde)
    keep = probabilities > 0
    support, probabilities = support[keep], probabilities[keep]
    with np.errstate(divide='ignore'):
        logs = np.log(support @ np.asarray(portfolio))
    if not np.all(np.isfinite(logs)):
        raise NumericError("optimal portfolio loses all wealth on a supported e-vector")
    centre = float(probabilities @ logs)

    rng = streams.generator(seed, 0, _DIAGNOSTIC, 1)
    draws = logs[rng.choice(len(logs), size=samples, p=probabilities)] - centre

    worst, worst_error, worst_gap = -math.inf, 0.0, 0.0
    ok = True
    for theta in theta_grid:
        values = np.exp(theta * draws)
        estimate = float(values.mean())
        error = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
        exact = float(probabilities @ np.exp(theta * (logs - centre)))
        gap = abs(estimate - exact)
        if estimate > constants.b + slack * error or gap > max(1e-3, slack * error):
            ok = False
        if estimate > worst:
            worst, worst_error = estimate, error
        worst_gap = max(worst_gap, gap)
    return make_report('mgf', ok, worst, constants.b, worst_error,
                       detail='%d thetas, max |MC - exact| %.3g' % (len(theta_grid), worst_gap))


def numeraire_log_ratios(trace, oracle, n_grid):
    """
    ``log S_n`` at each ``n`` in ``n_grid`` for the ratio of the trace's
    predictable portfolios to the arms' log-optimal ones.
    """
    wanted = set(n_grid)
    total, found = 0.0, {}
    for record in trace.records:
        if record.portfolio is None:
            raise ConfigError("numeraire check needs a statistic with predictable portfolios (UP or KELLY)")
        e = np.asarray(record.evector)
        total += (pf.log_increment(record.portfolio, e)
                  - pf.log_increment(oracle.portfolios[record.arm - 1], e))
        if record.n in wanted:
            found[record.n] = total
    return [found[n] for n in n_grid]


def _numeraire_task(config, oracle, n_grid, rep):
    trace = harness.episode(config._replace(horizon=max(n_grid), early_stop=False), rep)
    return numeraire_log_ratios(trace, oracle, n_grid)


def numeraire_ratio_check(config, oracle, n_grid=(10, 100), reps=10 ** 5, slack=4.0, threads=None):
    """
    Mean of the allocation-wise numeraire ratio ``S_n`` at each ``n``.

    Episodes run with the universal portfolio as the predictable bet; the
    Monte-Carlo mean of ``S_n`` must stay below ``1 + slack`` standard
    errors.
    """
    if config.statistic_kind not in (eprocess.UP, eprocess.KELLY):
        config = config._replace(statistic_kind=eprocess.UP)
    n_grid = tuple(sorted(n_grid))
    per_rep = tasks.execute(partial(_numeraire_task, config, oracle, n_grid), range(reps), pool_size=threads)
    ratios = np.exp(np.asarray(per_rep, dtype=float))
    means = ratios.mean(axis=0)
    errors = ratios.std(axis=0, ddof=1) / math.sqrt(reps) if reps > 1 else np.zeros(len(n_grid))
    ok = bool(np.all(means <= 1.0 + slack * errors))
    i = int(np.argmax(means - 1.0 - slack * errors))
    detail = ', '.join('n=%d mean %.4f' % (n, m) for n, m in zip(n_grid, means))
    return make_report('numeraire', ok, means[i], 1.0, errors[i], detail=detail)


def _null_task(config, n_grid, rep):
    return [log_evalue for _, log_evalue in harness.checkpoints(config, rep, n_grid)]


def null_mean_check(config, n_grid=(10, 100), reps=10 ** 5, slack=4.0, threads=None):
    """
    Mean of the universal-portfolio wealth ``W_n`` under a global null.

    Episodes of ``config`` run with the UP statistic; at each ``n`` the
    Monte-Carlo mean of ``W_n`` must stay below ``1 + slack`` standard
    errors. Raises `~spruce.exceptions.ConfigError` if some arm has positive
    optimal growth.
    """
    oracle = solve_oracle(config)
    if oracle.growth > 1e-12:
        raise ConfigError("null mean check needs a global null, arm %d has growth %g"
                          % (oracle.best_arm, oracle.growth))
    config = config._replace(statistic_kind=eprocess.UP, early_stop=False)
    n_grid = tuple(sorted(n_grid))
    per_rep = tasks.execute(partial(_null_task, config, n_grid), range(reps), pool_size=threads)
    wealth = np.exp(np.asarray(per_rep, dtype=float))
    means = wealth.mean(axis=0)
    errors = wealth.std(axis=0, ddof=1) / math.sqrt(reps) if reps > 1 else np.zeros(len(n_grid))
    ok = bool(np.all(means <= 1.0 + slack * errors))
    i = int(np.argmax(means - 1.0 - slack * errors))
    detail = ', '.join('n=%d mean %.4f' % (n, m) for n, m in zip(n_grid, means))
    return make_report('null_mean', ok, means[i], 1.0, errors[i], detail=detail)


def confidence_interval_check(dist, problem, n=1000, alpha=0.05, reps=2000, seed=0, beta_atoms=0,
                              slack=3.0):
    """
    Coverage of the regret-based confidence interval for the optimal growth
    rate of a single arm.

    Over ``reps`` histories of length ``n`` the best-in-hindsight average
    ``BIH / n`` may exceed the growth ``l*`` by ``sqrt(8 b L / n) + 5 L / n +
    R_n / n`` (``L = log(1/alpha)``, ``R_n`` the CO96 regret) or fall short
    of it by ``sqrt(8 b L / n) + 4 L / n`` each with frequency at most
    ``alpha`` plus ``slack`` binomial standard errors.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie strictly inside (0, 1), got %r" % (alpha,))
    constants = models.constants(problem)
    support, probabilities = induced_distribution(dist, problem, beta_atoms)
    probabilities = probabilities / probabilities.sum()
    _, growth = pf.kelly_oracle(support, probabilities, anchor=constants.lambda_tilde)

    level = math.log(1.0 / alpha)
    root = math.sqrt(8.0 * constants.b * level / n)
    above = root + 5.0 * level / n + pf.co96_regret(n, constants.d) / n
    below = root + 4.0 * level / n

    rng = streams.generator(seed, 0, _DIAGNOSTIC, 3)
    averages = np.empty(reps)
    for r in range(reps):
        counts = rng.multinomial(n, probabilities)
        _, value = pf.best_in_hindsight(support, weights=counts, anchor=constants.lambda_tilde)
        averages[r] = value / n
    over = float(np.mean(averages - growth >= above))
    under = float(np.mean(growth - averages >= below))
    error = math.sqrt(alpha * (1.0 - alpha) / reps)
    bound = alpha + slack * error
    return make_report('confidence_interval', max(over, under) <= bound, max(over, under), bound, error,
                       detail='n=%d, above %.4f (width %.4f), below %.4f (width %.4f)'
                              % (n, over, above, under, below))


#
# Allocation and stopping-time checks
#

def suboptimal_pull_bound(n, gap, params, d):
    """
    Upper bound on the expected pulls of an arm with growth gap ``gap`` after
    ``n`` rounds of SPRUCE.
    """
    if not gap > 0:
        raise DomainError("the pull bound needs a positive gap, got %r" % (gap,))
    L = math.log(params.zeta * n + 1.0)
    gamma, b = params.gamma, params.b
    return (1.0
            + max(72.0 * b * gamma * L / gap ** 2,
                  15.0 * gamma * L / gap,
                  3.0 * pf.co96_regret(n - 1, d) / gap)
            + 4.0 * params.zeta ** (-gamma) / (gamma - 2.0))


def _pulls_task(config, n_grid, rep):
    return [pulls for pulls, _ in harness.checkpoints(config, rep, n_grid)]


def suboptimal_pulls_check(config, oracle, n_grid=(1000, 10000), seeds=200, decrease_share=0.95,
                           threads=None):
    """
    Mean pulls of each suboptimal arm against `suboptimal_pull_bound`, plus
    the share of seeds whose suboptimal pull fraction drops from the first to
    the last round of ``n_grid``.

    Arms with zero gap are skipped; with none left the report is ``SKIP``.
    """
    if config.policy.kind != allocation.SPRUCE:
        raise ConfigError("suboptimal pull bounds apply to the spruce policy only")
    n_grid = tuple(sorted(int(n) for n in n_grid))
    suboptimal = [a for a, gap in enumerate(oracle.gaps, 1) if gap > 0]
    if not suboptimal:
        return CheckReport('suboptimal_pulls', SKIP, 0.0, 0.0, 0.0, 'no arm has a positive gap')

    params, d = config.policy.params, models.constants(config.problem).d
    per_seed = np.asarray(
        tasks.execute(partial(_pulls_task, config, n_grid), range(seeds), pool_size=threads),
        dtype=float,
    )  # seeds x len(n_grid) x K
    ok, worst, worst_error, notes = True, -math.inf, 0.0, []
    for a in suboptimal:
        gap = oracle.gaps[a - 1]
        for j, n in enumerate(n_grid):
            pulls = per_seed[:, j, a - 1]
            bound = suboptimal_pull_bound(n, gap, params, d)
            ratio = pulls.mean() / bound
            if ratio > worst:
                worst, worst_error = ratio, pulls.std(ddof=1) / math.sqrt(seeds) / bound if seeds > 1 else 0.0
            if pulls.mean() > bound:
                ok = False
                notes.append('arm %d n=%d mean %.1f > %.1f' % (a, n, pulls.mean(), bound))
        if len(n_grid) > 1:
            first = per_seed[:, 0, a - 1] / n_grid[0]
            last = per_seed[:, -1, a - 1] / n_grid[-1]
            share = float(np.mean(last < first))
            if share < decrease_share:
                ok = False
            notes.append('arm %d fraction decreased on %.1f%% of seeds' % (a, 100 * share))
    return make_report('suboptimal_pulls', ok, worst, 1.0, worst_error, detail='; '.join(notes))


#: Final-ratio bounds of a sweep are stated at this level and below.
FINAL_RATIO_ALPHA = 1e-6

SweepRow = namedtuple('SweepRow', ['alpha', 'mean_tau', 'ci_lo', 'ci_hi', 'ratio', 'censored_frac'])


def stopping_ratio_sweep(config, alphas, oracle=None, reps=None, max_horizon=None, final_bound=None,
                         lower_slack=3.0, threads=None):
    """
    ``l* E[tau] / log(1/alpha)`` across a sweep of levels.

    Returns ``(rows, report)``: one `SweepRow` per alpha (largest alpha
    first) and a report requiring every ratio to be at least ``1 -
    lower_slack`` standard errors, the ratios to be nonincreasing within
    confidence-interval overlap and, when ``final_bound`` is given and the
    sweep reaches `FINAL_RATIO_ALPHA`, the last ratio to be at most
    ``final_bound``. Censored runs enter the mean at the censoring time, so
    their rows are lower estimates.
    """
    if not alphas:
        raise DomainError("stopping-time sweep needs at least one alpha")
    oracle = oracle or solve_oracle(config)
    if not oracle.growth > 0:
        raise DomainError("stopping-time ratios need a positive optimal growth rate")
    alphas = sorted(alphas, reverse=True)
    reps = reps or config.reps
    results = harness.stopping_study(config, alphas, reps=reps, max_horizon=max_horizon, threads=threads)
    z = float(stats.norm.ppf(0.975))

    rows, errors = [], []
    for alpha, per_alpha in zip(alphas, results):
        taus = np.asarray([r.horizon if r.censored else r.tau for r in per_alpha], dtype=float)
        mean_tau = float(taus.mean())
        se = float(taus.std(ddof=1) / math.sqrt(len(taus))) if len(taus) > 1 else 0.0
        scale = oracle.growth / math.log(1.0 / alpha)
        rows.append(SweepRow(alpha, mean_tau, mean_tau - z * se, mean_tau + z * se, mean_tau * scale,
                             float(np.mean([r.censored for r in per_alpha]))))
        errors.append(se * scale)

    notes, ok = [], True
    for row, error in zip(rows, errors):
        if row.ratio < 1.0 - lower_slack * error:
            ok = False
            notes.append('alpha=%g ratio %.3f below 1' % (row.alpha, row.ratio))
        if row.censored_frac > 0:
            notes.append('alpha=%g censored %.1f%% (lower estimate)' % (row.alpha, 100 * row.censored_frac))
    for (prev, prev_error), (row, error) in zip(zip(rows, errors), zip(rows[1:], errors[1:])):
        if row.ratio - z * error > prev.ratio + z * prev_error:
            ok = False
            notes.append('ratio increases from alpha=%g to alpha=%g' % (prev.alpha, row.alpha))
    bound = math.inf
    if final_bound is not None:
        if rows[-1].alpha <= FINAL_RATIO_ALPHA:
            bound = final_bound
        else:
            notes.append('final bound %g not applied above alpha=%g' % (final_bound, FINAL_RATIO_ALPHA))
    if rows[-1].ratio > bound:
        ok = False
    return rows, make_report('stopping_ratio', ok, rows[-1].ratio, bound, errors[-1], detail='; '.join(notes))


#
# Protocol-level checks
#

def type_one_error_check(config, reps=None, sigmas=3.0, threads=None):
    """
    Rejection-by-horizon frequency under a global null against ``alpha`` plus
    ``sigmas`` binomial standard errors.
    """
    reps = reps or config.reps
    config = config._replace(reps=reps, early_stop=True, record_every=config.horizon)
    summary = harness.monte_carlo(config, threads=threads)
    alpha = config.alpha
    error = math.sqrt(alpha * (1.0 - alpha) / reps)
    bound = alpha + sigmas * error
    return make_report('type_one_error', summary.rejection_rate <= bound, summary.rejection_rate, bound, error,
                       detail='%d/%d rejections, wilson CI [%.4f, %.4f]'
                              % ((summary.rejections, reps) + summary.rejection_ci))


def _growth_task(config, n, rep):
    return harness.checkpoints(config, rep, [n])[0][1] / n


def growth_rate_check(config, oracle, n=20000, seeds=50, tolerance=0.01, oracle_tolerance=0.005,
                      threads=None):
    """
    Median of ``log W_n / n`` over ``seeds`` against the optimal growth rate,
    and against the same median for the policy that always pulls the best arm.
    """
    median = float(np.median(tasks.execute(partial(_growth_task, config, n), range(seeds), pool_size=threads)))
    reference = config._replace(policy=allocation.make_policy(allocation.ORACLE, arm=oracle.best_arm))
    oracle_median = float(np.median(
        tasks.execute(partial(_growth_task, reference, n), range(seeds), pool_size=threads)))
    gap = abs(median - oracle.growth)
    ok = gap <= tolerance and abs(median - oracle_median) <= oracle_tolerance
    return make_report('growth_rate', ok, median, oracle.growth, 0.0,
                       detail='|median - l*| %.4f (tol %g), oracle-arm median %.5f (tol %g)'
                              % (gap, tolerance, oracle_median, oracle_tolerance))


def ht_unbiasedness_check(config, arm=1, rounds=10 ** 5, seed=0, slack=4.0):
    """
    Mean Horvitz-Thompson estimate of one arm's treatment effect over
    ``rounds`` draws, within ``slack`` standard errors of the true effect.
    """
    problem = config.problem
    if problem.kind != models.ATE:
        raise ConfigError("Horvitz-Thompson check needs the %s problem" % (models.ATE,))
    dist = config.arms[arm - 1]
    control, treated = dist.params
    rng = streams.generator(seed, 0, _DIAGNOSTIC, 2)
    z = (rng.random(rounds) < problem.pi).astype(float)
    y1 = harness.sample(treated, rng, rounds)
    y0 = harness.sample(control, rng, rounds)
    y_obs = np.where(z == 1.0, y1, y0)
    psi = models.horvitz_thompson(y_obs, z, problem.pi)
    estimate = float(psi.mean())
    error = float(psi.std(ddof=1) / math.sqrt(rounds))
    truth = harness.treatment_effect(dist)
    return make_report('ht_unbiased', abs(estimate - truth) <= slack * error, estimate, truth, error,
                       detail='arm %d, %d rounds' % (arm, rounds))


def lambda_identity_check(config):
    """
    ``lambda_tilde . E == 1`` on every supported e-vector of every arm.
    """
    constants = models.constants(config.problem)
    lam = np.asarray(constants.lambda_tilde)
    worst = 0.0
    for dist in config.arms:
        support, _ = induced_distribution(dist, config.problem, config.beta_atoms)
        worst = max(worst, float(np.max(np.abs(support @ lam - 1.0))))
    bound = 0.0 if config.problem.kind != models.TWO_SIDED else 1e-12
    return make_report('lambda_identity', worst <= bound, worst, bound)


def _tau_task(config, alpha, max_horizon, rep):
    result = harness.first_crossings(config, rep, [alpha], max_horizon)[0]
    return result.horizon if result.censored else result.tau


def rejection_time_ratio_check(config, baseline, alpha=1e-3, seeds=300, factor=0.6, max_horizon=None,
                               threads=None):
    """
    Mean rejection time of ``config`` against ``factor`` times that of
    ``baseline`` (same arms, another policy).
    """
    max_horizon = max_horizon or config.max_horizon
    taus = np.asarray(tasks.execute(partial(_tau_task, config, alpha, max_horizon), range(seeds),
                                    pool_size=threads), dtype=float)
    base = np.asarray(tasks.execute(partial(_tau_task, baseline, alpha, max_horizon), range(seeds),
                                    pool_size=threads), dtype=float)
    ratio = taus.mean() / base.mean()
    error = ratio * math.sqrt((taus.std(ddof=1) / taus.mean()) ** 2 / seeds
                              + (base.std(ddof=1) / base.mean()) ** 2 / seeds) if seeds > 1 else 0.0
    return make_report('rejection_time_ratio', ratio <= factor, ratio, factor, error,
                       detail='mean tau %.1f vs %.1f' % (taus.mean(), base.mean()))

import math

from nose.tools import eq_, ok_, raises, assert_almost_equal

from spruce import allocation, diagnostics, eprocess, harness, models
from spruce.context_managers import hide
from spruce.exceptions import ConfigError, DomainError

from utils import bernoulli_config, rct_config


KELLY_GROWTH = 0.7 * math.log(1.4) + 0.3 * math.log(0.6)


#
# Oracle
#

def test_oracle_on_the_easy_instance():
    oracle = diagnostics.solve_oracle(bernoulli_config([0.7, 0.5, 0.5]))
    eq_(oracle.best_arm, 1)
    assert_almost_equal(oracle.growth, KELLY_GROWTH, places=9)
    assert_almost_equal(oracle.portfolios[0][1], 0.4, places=8)
    eq_(oracle.growths[1:], (0.0, 0.0))
    eq_(oracle.gaps[0], 0.0)
    eq_(oracle.gaps[1], oracle.growth)


def test_oracle_on_the_null():
    oracle = diagnostics.solve_oracle(bernoulli_config([0.5, 0.5, 0.5]))
    eq_(oracle.growth, 0.0)
    eq_(oracle.gaps, (0.0, 0.0, 0.0))
    eq_(oracle.portfolios[0], (1.0, 0.0))


def test_identical_arms_pick_the_first():
    oracle = diagnostics.solve_oracle(bernoulli_config([0.6, 0.6]))
    eq_(oracle.best_arm, 1)
    eq_(oracle.gaps, (0.0, 0.0))


@raises(ConfigError)
def test_beta_arm_needs_atoms():
    config = harness.sim_config([harness.beta(3, 1)], models.make_problem(models.ONE_SIDED),
                                allocation.make_policy(allocation.ROUND_ROBIN))
    diagnostics.solve_oracle(config)


def test_beta_arm_with_atoms():
    config = harness.sim_config([harness.beta(3, 1)], models.make_problem(models.ONE_SIDED),
                                allocation.make_policy(allocation.ROUND_ROBIN), beta_atoms=200)
    oracle = diagnostics.solve_oracle(config)
    ok_(oracle.growth > 0)


def test_rct_oracle_uses_the_assignment_mixture():
    support, probabilities = diagnostics.induced_distribution(
        harness.potential_outcomes(harness.bernoulli(0.5), harness.bernoulli(0.8)),
        models.make_problem(models.ATE, pi=0.5, delta=0.0),
    )
    eq_(len(support), 4)
    assert_almost_equal(probabilities.sum(), 1.0, places=12)
    assert_almost_equal(probabilities[1], 0.4, places=12)


#
# Pathwise checks
#

def test_regret_and_ordering_on_random_configs():
    traces = [harness.episode(config, 0) for config in diagnostics.random_configs(6, 1, max_rounds=80)]
    for trace in traces:
        eq_(diagnostics.portfolio_regret_check(trace).status, diagnostics.PASS)
    eq_(diagnostics.ordering_check(traces).status, diagnostics.PASS)


def test_random_configs_are_reproducible():
    eq_(diagnostics.random_configs(4, 12), diagnostics.random_configs(4, 12))


def test_make_report_status():
    eq_(diagnostics.make_report('x', True, 1, 2).status, diagnostics.PASS)
    eq_(diagnostics.make_report('x', False, 3, 2).status, diagnostics.FAIL)


#
# Moments and numeraire
#

def test_mgf_at_zero_is_one():
    report = diagnostics.mgf_check(harness.bernoulli(0.7), models.make_problem(models.ONE_SIDED),
                                   theta_grid=(0.0,), samples=1000)
    eq_(report.measured, 1.0)
    eq_(report.status, diagnostics.PASS)


def test_mgf_within_the_increment_bound():
    report = diagnostics.mgf_check(harness.bernoulli(0.7), models.make_problem(models.ONE_SIDED),
                                   samples=20000, seed=3)
    eq_(report.status, diagnostics.PASS)
    ok_(report.measured < 2.0)


@raises(DomainError)
def test_mgf_theta_outside_unit_interval():
    diagnostics.mgf_check(harness.bernoulli(0.7), models.make_problem(models.ONE_SIDED), theta_grid=(1.5,))


def test_kelly_numeraire_ratio_is_exactly_one():
    base = bernoulli_config([0.7, 0.5], horizon=20)
    oracle = diagnostics.solve_oracle(base)
    config = base._replace(statistic_kind=eprocess.KELLY, kelly_portfolios=oracle.portfolios)
    eq_(diagnostics.numeraire_log_ratios(harness.run_episode(config, 0), oracle, (5, 20)), [0.0, 0.0])
    report = diagnostics.numeraire_ratio_check(config, oracle, n_grid=(5, 20), reps=3, threads=1)
    eq_(report.status, diagnostics.PASS)
    eq_(report.measured, 1.0)


@raises(ConfigError)
def test_numeraire_needs_predictable_portfolios():
    config = bernoulli_config([0.7], horizon=5)
    oracle = diagnostics.solve_oracle(config)
    diagnostics.numeraire_log_ratios(harness.run_episode(config, 0), oracle, (5,))


def _null_config(arms, **kwargs):
    problem = models.make_problem(models.ONE_SIDED, mu0=0.5)
    policy = allocation.make_policy(allocation.ROUND_ROBIN)
    return harness.sim_config(arms, problem, policy, **kwargs)


def test_null_mean_of_unit_increments_is_one():
    config = _null_config([harness.discrete([0.5], [1.0])] * 2, horizon=10)
    report = diagnostics.null_mean_check(config, n_grid=(5, 10), reps=3, threads=1)
    eq_(report.status, diagnostics.PASS)
    eq_(report.measured, 1.0)
    eq_(report.mc_error, 0.0)


def test_null_mean_on_fair_coins():
    config = _null_config([harness.bernoulli(0.5)] * 2, horizon=50)
    report = diagnostics.null_mean_check(config, n_grid=(10, 50), reps=300, threads=1)
    eq_(report.status, diagnostics.PASS)
    ok_('n=10' in report.detail and 'n=50' in report.detail)


@raises(ConfigError)
def test_null_mean_needs_a_global_null():
    diagnostics.null_mean_check(bernoulli_config([0.7, 0.5]), reps=2)


def test_confidence_interval_covers_the_growth_rate():
    problem = models.make_problem(models.ONE_SIDED, mu0=0.5)
    report = diagnostics.confidence_interval_check(harness.bernoulli(0.7), problem, n=200, reps=300, seed=3)
    eq_(report.status, diagnostics.PASS)
    ok_(report.measured <= report.bound)


def test_confidence_interval_on_a_certain_win_never_misses():
    problem = models.make_problem(models.ONE_SIDED, mu0=0.5)
    report = diagnostics.confidence_interval_check(harness.bernoulli(1.0), problem, n=50, reps=20)
    eq_(report.status, diagnostics.PASS)
    eq_(report.measured, 0.0)


@raises(DomainError)
def test_confidence_interval_alpha_domain():
    diagnostics.confidence_interval_check(harness.bernoulli(0.7), models.make_problem(models.ONE_SIDED), alpha=1.0)


#
# Allocation and stopping
#

def test_suboptimal_pull_bound_formula():
    params = allocation.ucb_params(3.0, 1.0, 2.0)
    expected = 1.0 + 432.0 * math.log(1001.0) / 0.01 + 4.0
    assert_almost_equal(diagnostics.suboptimal_pull_bound(1000, 0.1, params, 1), expected, places=6)


@raises(DomainError)
def test_suboptimal_pull_bound_needs_a_gap():
    diagnostics.suboptimal_pull_bound(1000, 0.0, allocation.ucb_params(), 1)


def test_suboptimal_pulls_skip_on_the_null():
    config = bernoulli_config([0.5, 0.5])
    report = diagnostics.suboptimal_pulls_check(config, diagnostics.solve_oracle(config))
    eq_(report.status, diagnostics.SKIP)


@raises(ConfigError)
def test_suboptimal_pulls_need_spruce():
    config = bernoulli_config([0.7, 0.5], policy=allocation.ROUND_ROBIN)
    diagnostics.suboptimal_pulls_check(config, diagnostics.solve_oracle(config))


@raises(DomainError)
def test_stopping_sweep_needs_positive_growth():
    diagnostics.stopping_ratio_sweep(bernoulli_config([0.5, 0.5]), [0.1, 0.01])


def test_stopping_sweep_on_a_certain_win():
    # CO96 wealth is (n - 1) log 2 - log(n + 1) / 2 on a single doubling arm.
    config = bernoulli_config([1.0], reps=3)
    with hide('progress'):
        rows, report = diagnostics.stopping_ratio_sweep(config, [0.01, 0.1], max_horizon=50, threads=1)
    eq_([row.alpha for row in rows], [0.1, 0.01])
    eq_([row.mean_tau for row in rows], [6.0, 10.0])
    eq_([row.censored_frac for row in rows], [0.0, 0.0])
    assert_almost_equal(rows[1].ratio, 10 * math.log(2) / math.log(100), places=12)
    eq_(report.status, diagnostics.PASS)


def test_final_ratio_bound_applies_at_small_alpha():
    # tau is 24 at alpha = 1e-6, so the last ratio is 24 log 2 / log 1e6, about 1.204.
    config = bernoulli_config([1.0], reps=2)
    with hide('progress'):
        rows, report = diagnostics.stopping_ratio_sweep(config, [0.1, 1e-6], max_horizon=50, final_bound=1.1,
                                                        threads=1)
    eq_(rows[-1].mean_tau, 24.0)
    eq_(report.status, diagnostics.FAIL)
    eq_(report.bound, 1.1)
    assert_almost_equal(report.measured, 24 * math.log(2) / math.log(1e6), places=12)


def test_final_ratio_bound_skipped_above_small_alpha():
    config = bernoulli_config([1.0], reps=2)
    with hide('progress'):
        _, report = diagnostics.stopping_ratio_sweep(config, [0.1, 0.01], max_horizon=50, final_bound=1.1,
                                                     threads=1)
    eq_(report.status, diagnostics.PASS)
    eq_(report.bound, math.inf)
    ok_('not applied' in report.detail)


def test_sweep_rows_hold_plain_floats():
    config = bernoulli_config([1.0], reps=2)
    with hide('progress'):
        rows, _ = diagnostics.stopping_ratio_sweep(config, [0.1], max_horizon=50, threads=1)
    for value in rows[0][1:]:
        eq_(type(value), float)


@raises(DomainError)
def test_stopping_sweep_needs_alphas():
    diagnostics.stopping_ratio_sweep(bernoulli_config([1.0]), [])


def test_type_one_error_on_the_null():
    config = bernoulli_config([0.5, 0.5], horizon=100, reps=20)
    with hide('progress'):
        report = diagnostics.type_one_error_check(config, threads=1)
    eq_(report.status, diagnostics.PASS)


#
# Protocol checks
#

def test_horvitz_thompson_is_unbiased():
    report = diagnostics.ht_unbiasedness_check(rct_config([0.8]), rounds=20000, seed=5)
    eq_(report.status, diagnostics.PASS)
    assert_almost_equal(report.bound, 0.3, places=12)


@raises(ConfigError)
def test_horvitz_thompson_needs_ate():
    diagnostics.ht_unbiasedness_check(bernoulli_config([0.8]))


def test_lambda_identity_holds():
    for config in (bernoulli_config([0.7, 0.5]), rct_config([0.8, 0.4])):
        report = diagnostics.lambda_identity_check(config)
        eq_(report.status, diagnostics.PASS)
        eq_(report.measured, 0.0)

from nose.tools import eq_, ok_, assert_almost_equal

from spruce import diagnostics, suite
from spruce.context_managers import hide

from utils import bernoulli_config


def test_suites_share_their_fields():
    eq_(sorted(suite.SUITES), ['fast', 'full'])
    ok_(suite.SUITES['fast'].type1_reps < suite.SUITES['full'].type1_reps)


def test_oracle_grid_check_on_the_easy_preset():
    config, settings = suite._preset('easy', horizon=100)
    eq_(settings['horizon'], 100)
    oracle, report = suite.oracle_grid_check(config)
    eq_(oracle.best_arm, 1)
    eq_(report.status, diagnostics.PASS)
    assert_almost_equal(report.bound, report.measured, places=5)


def test_determinism_check_passes():
    config = bernoulli_config([0.7, 0.5], horizon=60, record_every=20)
    with hide('progress'):
        report = suite.determinism_check(config, reps=4, threads=2)
    eq_(report.status, diagnostics.PASS)


def test_sweeps_reach_the_final_ratio_level():
    for sizes in suite.SUITES.values():
        ok_(min(sizes.sweep_alphas) <= diagnostics.FINAL_RATIO_ALPHA)


def test_suite_settings_echo_sizes_and_presets():
    echo = suite.suite_settings('fast')
    eq_(echo['suite'], 'fast')
    eq_(echo['sizes']['null_mean_reps'], suite.SUITES['fast'].null_mean_reps)
    eq_(sorted(echo['presets']), ['determinism', 'easy', 'null', 'rct', 'rct_null'])
    eq_(echo['presets']['null']['horizon'], suite.SUITES['fast'].type1_horizon)
    eq_(echo['presets']['determinism']['record_every'], 50)

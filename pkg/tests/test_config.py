from nose.tools import eq_, ok_, raises, assert_almost_equal

from spruce import allocation, config, eprocess, harness, models
from spruce.exceptions import ConfigError

from utils import support


def _load(path, overrides=None, environ=None):
    return config.load_config(path, overrides, environ={} if environ is None else environ)


#
# Files and presets
#

def test_load_easy_file():
    sim, settings = _load(support('easy.conf'))
    eq_(sim.arms, (harness.bernoulli(0.7), harness.bernoulli(0.5), harness.bernoulli(0.5)))
    eq_(sim.horizon, 2000)
    eq_(sim.reps, 4)
    eq_(sim.alpha, 0.001)
    eq_(sim.master_seed, 17)
    eq_(settings['policy'], allocation.SPRUCE)


def test_defaults_are_filled_in():
    _, settings = _load(support('easy.conf'))
    eq_(settings['gamma'], 3.0)
    eq_(settings['zeta'], 1.0)
    eq_(settings['statistic'], eprocess.CO96)
    eq_(settings['early_stop'], False)
    eq_(settings['slack'], 4.0)
    eq_(list(settings), list(config.config_keys))


def test_ucb_bound_follows_the_problem():
    sim, _ = _load(support('easy.conf'), {'mu0': '0.25'})
    eq_(sim.policy.params, allocation.UcbParams(3.0, 1.0, 4.0))


def test_rct_file_wraps_potential_outcomes():
    sim, _ = _load(support('rct.conf'))
    eq_(sim.problem.kind, models.ATE)
    eq_([arm.kind for arm in sim.arms], [harness.POTENTIAL_OUTCOMES] * 2)
    eq_(sim.arms[1].params, (harness.bernoulli(0.5), harness.beta(2.0, 2.0)))


def test_tuple_file():
    sim, _ = _load(support('tuple.conf'))
    eq_(sim.arms[1], harness.pair(harness.discrete([0.0, 1.0], [0.5, 0.5]), harness.bernoulli(0.2)))
    eq_(sim.policy.kind, allocation.ROUND_ROBIN)


def test_every_preset_resolves():
    for name in sorted(config.PRESETS):
        sim, _ = _load(config.PRESET_PREFIX + name)
        ok_(len(sim.arms) >= 3)


def test_easy_preset():
    sim, _ = _load('preset:easy')
    eq_(sim.alpha, 0.001)
    eq_(sim.horizon, 20000)


@raises(ConfigError)
def test_unknown_preset():
    _load('preset:medium')


@raises(ConfigError)
def test_missing_file():
    _load(support('nope.conf'))


@raises(ConfigError)
def test_unknown_key():
    _load(support('bad_key.conf'))


@raises(ConfigError)
def test_gamma_of_two():
    _load(support('gamma2.conf'))


@raises(ConfigError)
def test_line_without_equals():
    _load(support('no_equals.conf'))


@raises(ConfigError)
def test_control_outside_ate():
    _load(support('easy.conf'), {'control': 'bernoulli(0.5)'})


@raises(ConfigError)
def test_ate_without_control():
    _load('preset:easy', {'problem': models.ATE})


@raises(ConfigError)
def test_bad_number():
    _load('preset:easy', {'horizon': 'lots'})


@raises(ConfigError)
def test_oracle_arm_out_of_range():
    _load('preset:easy', {'policy': allocation.ORACLE, 'oracle_arm': '4'})


#
# Overrides and environment
#

def test_overrides_keep_commas_inside_parentheses():
    eq_(config.parse_overrides("arms=beta(2, 3); bernoulli(0.5),alpha=0.01"),
        {'arms': 'beta(2, 3); bernoulli(0.5)', 'alpha': '0.01'})


def test_empty_overrides():
    eq_(config.parse_overrides(None), {})


@raises(ConfigError)
def test_override_without_equals():
    config.parse_overrides("alpha")


def test_overrides_beat_the_file():
    sim, _ = _load(support('easy.conf'), {'horizon': '300', 'early_stop': 'yes'})
    eq_(sim.horizon, 300)
    eq_(sim.early_stop, True)


def test_seed_from_the_environment():
    sim, settings = _load(support('easy.conf'), environ={'SPRUCE_SEED': '99'})
    eq_(sim.master_seed, 99)
    eq_(settings['master_seed'], 99)


def test_kelly_statistic_solves_the_oracle():
    sim, _ = _load('preset:easy', {'statistic': eprocess.KELLY})
    assert_almost_equal(sim.kelly_portfolios[0][1], 0.4, places=8)
    eq_(sim.kelly_portfolios[1], (1.0, 0.0))


#
# Arm grammar
#

def test_parse_nested_arm():
    eq_(config.parse_arm("pair( bernoulli(0.5) , beta(1, 2) )"),
        harness.pair(harness.bernoulli(0.5), harness.beta(1.0, 2.0)))


def test_parse_arms_ignores_trailing_separator():
    eq_(len(config.parse_arms("bernoulli(0.1); bernoulli(0.2);")), 2)


@raises(ConfigError)
def test_unbalanced_parentheses():
    config.parse_arms("bernoulli(0.1; bernoulli(0.2)")


@raises(ConfigError)
def test_discrete_probabilities_must_sum_to_one():
    config.parse_arm("discrete(0.0:0.5, 1.0:0.6)")


@raises(ConfigError)
def test_unknown_arm_law():
    config.parse_arm("gaussian(0, 1)")

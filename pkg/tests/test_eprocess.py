import math

from nose.tools import eq_, ok_, raises, assert_almost_equal

from spruce import eprocess
from spruce.exceptions import ConfigError, DimensionError, DomainError, UnsupportedDimensionError
from spruce.portfolio import model_constants


ONE_SIDED = model_constants(1, 2.0, (1.0, 0.0))


def _state(K=2, **kwargs):
    return eprocess.init(K, ONE_SIDED, **kwargs)


def test_fresh_state_has_unit_evalue():
    for kind in (eprocess.CO96, eprocess.UP):
        state = _state(3, statistic_kind=kind)
        eq_(eprocess.log_evalue(state), 0.0)
        eq_(eprocess.pull_counts(state), (0, 0, 0))
        eq_(state.round, 0)


@raises(DimensionError)
def test_init_without_arms():
    eprocess.init(0, ONE_SIDED)


@raises(ConfigError)
def test_init_unknown_statistic():
    _state(statistic_kind='MEDIAN')


@raises(ConfigError)
def test_kelly_statistic_needs_portfolios():
    _state(statistic_kind=eprocess.KELLY)


@raises(ConfigError)
def test_kelly_statistic_needs_one_portfolio_per_arm():
    _state(K=2, statistic_kind=eprocess.KELLY, kelly_portfolios=[(0.5, 0.5)])


@raises(UnsupportedDimensionError)
def test_universal_portfolio_needs_d_one():
    eprocess.init(2, model_constants(2, 2.0, (1.0, 0.0, 0.0)), statistic_kind=eprocess.UP)


def test_co96_after_one_win():
    state = eprocess.update(_state(), 1, (1.0, 2.0))
    assert_almost_equal(eprocess.log_evalue(state), -math.log(2.0) / 2.0, places=14)


def test_unpulled_arms_contribute_nothing():
    state = eprocess.update(_state(K=3), 2, (1.0, 2.0))
    eq_(eprocess.arm_log_wealth(state, 1), 0.0)
    eq_(eprocess.arm_log_wealth(state, 3), 0.0)
    eq_(eprocess.log_evalue(state), eprocess.arm_log_wealth(state, 2))


def test_universal_portfolio_after_one_win():
    state = eprocess.update(_state(statistic_kind=eprocess.UP), 1, (1.0, 2.0))
    assert_almost_equal(eprocess.log_evalue(state), math.log(1.5), places=12)


def test_tracked_universal_portfolio_alongside_co96():
    state = eprocess.update(_state(track_up=True), 1, (1.0, 2.0))
    assert_almost_equal(eprocess.log_evalue(state, eprocess.UP), math.log(1.5), places=12)
    assert_almost_equal(eprocess.log_evalue(state), -math.log(2.0) / 2.0, places=14)


@raises(ConfigError)
def test_untracked_universal_portfolio():
    state = eprocess.update(_state(), 1, (1.0, 2.0))
    eprocess.log_evalue(state, eprocess.UP)


def test_only_the_selected_ledger_changes():
    before = eprocess.update(_state(K=3), 1, (1.0, 2.0))
    after = eprocess.update(before, 3, (1.0, 0.5))
    ok_(after.ledgers[0] is before.ledgers[0])
    ok_(after.ledgers[1] is before.ledgers[1])
    eq_(eprocess.pull_counts(after), (1, 0, 1))
    eq_(after.round, 2)


def test_update_does_not_mutate_previous_state():
    before = _state()
    eprocess.update(before, 1, (1.0, 2.0))
    eq_(eprocess.pull_counts(before), (0, 0))


def test_histogram_merges_repeated_evectors():
    state = _state()
    for e in [(1.0, 2.0), (1.0, 0.0), (1.0, 2.0)]:
        state = eprocess.update(state, 1, e)
    ledger = state.ledgers[0]
    eq_(len(ledger.rows), 2)
    eq_(sorted(ledger.counts.tolist()), [1, 2])
    assert_almost_equal(ledger.bih_portfolio[1], 1.0 / 3.0, places=9)


def test_kelly_statistic_reaches_the_boundary():
    state = _state(K=1, statistic_kind=eprocess.KELLY, kelly_portfolios=[(0.0, 1.0)])
    state = eprocess.update(state, 1, (1.0, 2.0))
    eq_(eprocess.log_evalue(state), math.log(2.0))
    ok_(eprocess.reject(state, 0.5))
    ok_(not eprocess.reject(state, 0.49))


def test_kelly_wealth_stays_absorbed_at_zero():
    state = _state(K=1, statistic_kind=eprocess.KELLY, kelly_portfolios=[(0.0, 1.0)])
    state = eprocess.update(state, 1, (1.0, 0.0))
    state = eprocess.update(state, 1, (1.0, 2.0))
    eq_(eprocess.log_evalue(state), -math.inf)
    ok_(not eprocess.reject(state, 0.5))


def test_next_portfolio():
    eq_(eprocess.next_portfolio(_state(), 1), None)
    kelly = _state(statistic_kind=eprocess.KELLY, kelly_portfolios=[(0.6, 0.4), (1.0, 0.0)])
    eq_(tuple(eprocess.next_portfolio(kelly, 1)), (0.6, 0.4))
    up = eprocess.next_portfolio(_state(statistic_kind=eprocess.UP), 2)
    assert_almost_equal(up[1], 0.5, places=12)


@raises(DomainError)
def test_reject_alpha_zero():
    eprocess.reject(_state(), 0.0)


@raises(DomainError)
def test_reject_alpha_one():
    eprocess.rejection_threshold(1.0)


@raises(DimensionError)
def test_update_arm_out_of_range():
    eprocess.update(_state(K=2), 3, (1.0, 1.0))


@raises(DimensionError)
def test_update_wrong_evector_length():
    eprocess.update(_state(), 1, (1.0, 1.0, 1.0))

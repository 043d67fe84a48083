"""
Multi-armed wealth state and the e-process statistics built from it.

The state holds one `ArmLedger` per arm. The combined log e-value is a sum of
per-arm contributions:

* ``CO96``: in-hindsight log wealth of the arm minus Cover's regret bound
  (arms never pulled contribute 0);
* ``UP``: log wealth of the arm's universal portfolio (a test
  supermartingale);
* ``KELLY``: log wealth of a fixed per-arm portfolio, normally the arm's
  log-optimal one (the oracle comparison process).

States are immutable namedtuples; `update` returns a new one.
"""

import math
from collections import namedtuple

import numpy as np

from spruce import portfolio as pf
from spruce.exceptions import ConfigError, DimensionError, DomainError, UnsupportedDimensionError


CO96 = 'CO96'
UP = 'UP'
KELLY = 'KELLY'

STATISTICS = (CO96, UP, KELLY)


ArmLedger = namedtuple('ArmLedger', [
    'pull_count',
    # Histogram of observed e-vectors: unique rows and their multiplicities.
    'rows', 'counts',
    'bih_portfolio', 'bih_value',
    'up', 'up_log_wealth',
    'kelly_log_wealth',
])

WealthState = namedtuple('WealthState', [
    'ledgers', 'statistic_kind', 'round', 'constants',
    'kelly_portfolios', 'track_up',
])


def _empty_ledger(d, track_up):
    return ArmLedger(
        pull_count=0,
        rows=np.zeros((0, d + 1)),
        counts=np.zeros(0, dtype=np.int64),
        bih_portfolio=None,
        bih_value=0.0,
        up=pf.UniversalPortfolio() if track_up else None,
        up_log_wealth=0.0,
        kelly_log_wealth=0.0,
    )


def init(K, constants, statistic_kind=CO96, kelly_portfolios=None, track_up=None):
    """
    Fresh state for ``K`` arms: round 0, log e-value 0.

    ``kelly_portfolios`` (one portfolio per arm) is required for the
    ``KELLY`` statistic. ``track_up`` forces the universal portfolio to be
    carried alongside another statistic so both can be compared on one path;
    it defaults to on exactly when the statistic is ``UP``.
    """
    if K < 1:
        raise DimensionError("need at least one arm, got K=%r" % (K,))
    if statistic_kind not in STATISTICS:
        raise ConfigError("unknown statistic %r (expected one of %s)" % (statistic_kind, ", ".join(STATISTICS)))
    if track_up is None:
        track_up = statistic_kind == UP
    if (track_up or statistic_kind == UP) and constants.d != 1:
        raise UnsupportedDimensionError("universal portfolio statistic is only implemented for d == 1")
    if statistic_kind == KELLY:
        if kelly_portfolios is None or len(kelly_portfolios) != K:
            raise ConfigError("KELLY statistic needs one fixed portfolio per arm")
        kelly_portfolios = tuple(tuple(pf.as_portfolio(lam)) for lam in kelly_portfolios)
    ledgers = tuple(_empty_ledger(constants.d, track_up) for _ in range(K))
    return WealthState(ledgers, statistic_kind, 0, constants, kelly_portfolios, bool(track_up))


def _ledger(state, arm):
    if not 1 <= arm <= len(state.ledgers):
        raise DimensionError("arm %r out of range 1..%d" % (arm, len(state.ledgers)))
    return state.ledgers[arm - 1]


def next_portfolio(state, arm):
    """
    The predictable bet the configured statistic places on ``arm`` next.

    ``None`` for ``CO96``, which has no predictable portfolio.
    """
    ledger = _ledger(state, arm)
    if state.statistic_kind == UP:
        return ledger.up.portfolio()
    if state.statistic_kind == KELLY:
        return np.array(state.kelly_portfolios[arm - 1])
    return None


def _add_row(rows, counts, e):
    hit = np.flatnonzero(np.all(rows == e, axis=1))
    if hit.size:
        counts = counts.copy()
        counts[hit[0]] += 1
        return rows, counts
    return np.vstack([rows, e]), np.append(counts, 1)


def update(state, arm, e):
    """
    Record e-vector ``e`` on ``arm`` and return the next state.

    Only the selected arm's ledger changes. The in-hindsight optimum is
    recomputed from the arm's histogram, warm-started from the previous
    optimum; the universal portfolio (when tracked) is advanced by the bet it
    had committed to before seeing ``e``.
    """
    ledger = _ledger(state, arm)
    d = state.constants.d
    e = pf.as_evector(e, d=d)

    rows, counts = _add_row(ledger.rows, ledger.counts, e)
    start = None
    if ledger.bih_portfolio is not None:
        start = ledger.bih_portfolio[1] if d == 1 else ledger.bih_portfolio
    bih_portfolio, bih_value = pf.best_in_hindsight(
        rows, weights=counts, anchor=state.constants.lambda_tilde, start=start,
    )

    up, up_log_wealth = ledger.up, ledger.up_log_wealth
    if up is not None:
        if up_log_wealth > -math.inf:
            up_log_wealth += pf.log_increment(up.portfolio(), e)
        up = up.update(e)

    kelly_log_wealth = ledger.kelly_log_wealth
    if state.kelly_portfolios is not None and kelly_log_wealth > -math.inf:
        kelly_log_wealth += pf.log_increment(np.array(state.kelly_portfolios[arm - 1]), e)

    new = ArmLedger(
        pull_count=ledger.pull_count + 1,
        rows=rows,
        counts=counts,
        bih_portfolio=bih_portfolio,
        bih_value=bih_value,
        up=up,
        up_log_wealth=up_log_wealth,
        kelly_log_wealth=kelly_log_wealth,
    )
    ledgers = state.ledgers[:arm - 1] + (new,) + state.ledgers[arm:]
    return state._replace(ledgers=ledgers, round=state.round + 1)


def _contribution(ledger, kind, d):
    if ledger.pull_count == 0:
        return 0.0
    if kind == CO96:
        return ledger.bih_value - pf.co96_regret(ledger.pull_count, d)
    if kind == UP:
        if ledger.up is None:
            raise ConfigError("universal portfolio is not tracked in this state")
        return ledger.up_log_wealth
    if kind == KELLY:
        return ledger.kelly_log_wealth
    raise ConfigError("unknown statistic %r" % (kind,))


def arm_log_wealth(state, arm, kind=None):
    """
    Contribution of ``arm`` to the log e-value (0 for an unpulled arm).
    """
    return _contribution(_ledger(state, arm), kind or state.statistic_kind, state.constants.d)


def log_evalue(state, kind=None):
    """
    Log of the configured statistic (or of ``kind``, when tracked).

    Arm contributions are summed in arm order with `math.fsum`.
    """
    kind = kind or state.statistic_kind
    d = state.constants.d
    return math.fsum(_contribution(ledger, kind, d) for ledger in state.ledgers)


def rejection_threshold(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie strictly inside (0, 1), got %r" % (alpha,))
    return math.log(1.0 / alpha)


def reject(state, alpha):
    """
    True iff the log e-value has reached ``log(1/alpha)``.
    """
    return log_evalue(state) >= rejection_threshold(alpha)


def pull_counts(state):
    return tuple(ledger.pull_count for ledger in state.ledgers)

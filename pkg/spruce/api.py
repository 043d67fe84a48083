"""
Non-init module for doing convenient * imports from.

Necessary because if we did this in __init__, one would be unable to import
anything else inside the package -- like, say, the version number used in
setup.py -- without pulling in numpy and scipy.
"""

from spruce.allocation import (
    lcb_score, make_policy, oracle_select, round_robin_select, spruce_select,
    ucb_params, ucb_score, uniform_random_select,
)
from spruce.config import load_config
from spruce.context_managers import hide, quiet, settings, show
from spruce.diagnostics import (
    mgf_check, numeraire_ratio_check, ordering_check, portfolio_regret_check,
    solve_oracle, stopping_ratio_sweep, suboptimal_pulls_check,
)
from spruce.eprocess import arm_log_wealth, log_evalue, reject
from spruce.eprocess import init as init_wealth
from spruce.eprocess import update as update_wealth
from spruce.harness import (
    first_crossings, growth_trajectory, monte_carlo, replay, run_episode,
    run_rct_episode, run_until_rejection,
)
from spruce.models import constants, evector, make_problem
from spruce.portfolio import (
    best_in_hindsight, co96_regret, grid_kelly, kelly_oracle, log_increment,
    universal_portfolio_next,
)
from spruce.state import env, output
from spruce.tasks import execute
from spruce.utils import abort, fastprint, puts, warn

__all__ = [
    "lcb_score", "make_policy", "oracle_select", "round_robin_select", "spruce_select",
    "ucb_params", "ucb_score", "uniform_random_select",
    "load_config",
    "hide", "quiet", "settings", "show",
    "mgf_check", "numeraire_ratio_check", "ordering_check", "portfolio_regret_check",
    "solve_oracle", "stopping_ratio_sweep", "suboptimal_pulls_check",
    "arm_log_wealth", "log_evalue", "reject", "init_wealth", "update_wealth",
    "first_crossings", "growth_trajectory", "monte_carlo", "replay", "run_episode",
    "run_rct_episode", "run_until_rejection",
    "constants", "evector", "make_problem",
    "best_in_hindsight", "co96_regret", "grid_kelly", "kelly_oracle", "log_increment",
    "universal_portfolio_next",
    "env", "output",
    "execute",
    "abort", "fastprint", "puts", "warn",
]

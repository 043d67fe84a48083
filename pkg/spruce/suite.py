"""
The ``fast`` and ``full`` validation suites behind ``spruce validate``.

Both run the same checks; ``fast`` shrinks horizons, replication counts and
sample sizes so it finishes in a couple of minutes, ``full`` uses the sizes
the guarantees are stated at.
"""

from collections import namedtuple

from spruce import allocation, diagnostics, harness, state, writers
from spruce.config import load_config
from spruce.context_managers import hide
from spruce.portfolio import grid_kelly
from spruce.utils import puts


SuiteSizes = namedtuple('SuiteSizes', [
    'type1_horizon', 'type1_reps', 'fuzz_traces', 'growth_n', 'growth_seeds',
    'sweep_alphas', 'sweep_reps', 'mgf_samples', 'pulls_grid', 'pulls_seeds',
    'numeraire_reps', 'null_mean_reps', 'ci_n', 'ci_reps', 'ht_rounds', 'rct_seeds', 'determinism_reps',
])

SUITES = {
    'fast': SuiteSizes(
        type1_horizon=1000, type1_reps=200, fuzz_traces=40, growth_n=5000, growth_seeds=10,
        sweep_alphas=(1e-2, 1e-3, 1e-4, 1e-6), sweep_reps=500, mgf_samples=10 ** 5,
        pulls_grid=(100, 1000), pulls_seeds=20, numeraire_reps=1000, null_mean_reps=2000, ci_n=500, ci_reps=500,
        ht_rounds=10 ** 5, rct_seeds=30, determinism_reps=4,
    ),
    'full': SuiteSizes(
        type1_horizon=5000, type1_reps=2000, fuzz_traces=200, growth_n=20000, growth_seeds=50,
        sweep_alphas=(1e-2, 1e-3, 1e-4, 1e-6), sweep_reps=500, mgf_samples=10 ** 6,
        pulls_grid=(1000, 10000), pulls_seeds=200, numeraire_reps=10 ** 5, null_mean_reps=10 ** 5,
        ci_n=1000, ci_reps=2000, ht_rounds=10 ** 5,
        rct_seeds=300, determinism_reps=8,
    ),
}

#: Bounds on the final stopping-time ratio of an alpha sweep.
SPRUCE_FINAL_RATIO = 1.4
ORACLE_FINAL_RATIO = 1.25

#: SPRUCE's mean rejection time must be at most this share of round robin's.
RCT_SPEEDUP = 0.6


def _preset(name, **overrides):
    config, settings = load_config('preset:' + name, dict((k, str(v)) for k, v in overrides.items()))
    return config, settings


def oracle_grid_check(config):
    """
    Root-finding oracle against the grid brute force for the best arm.
    """
    oracle = diagnostics.solve_oracle(config)
    support, probabilities = diagnostics.induced_distribution(
        config.arms[oracle.best_arm - 1], config.problem, config.beta_atoms)
    _, grid = grid_kelly(support, probabilities)
    gap = abs(oracle.growth - grid)
    return oracle, diagnostics.make_report('oracle_growth', gap <= 1e-5, oracle.growth, grid, 0.0,
                                           detail='best arm %d, |oracle - grid| %.3g' % (oracle.best_arm, gap))


def determinism_check(config, reps, threads=None):
    """
    The same Monte-Carlo run serially and on ``threads`` workers must yield
    identical CSV text.
    """
    config = config._replace(reps=reps)
    serial = harness.monte_carlo(config, threads=1)
    parallel = harness.monte_carlo(config, threads=max(2, threads or state.env.threads))
    texts = [(writers.trajectories_csv(s), writers.stopping_csv(s)) for s in (serial, parallel)]
    same = texts[0] == texts[1]
    return diagnostics.make_report('determinism', same, 0.0 if same else 1.0, 0.0,
                                   detail='%d reps, serial vs parallel CSV bytes' % reps)


def suite_presets(name):
    """
    ``{label: (preset, overrides)}`` for every preset suite ``name`` runs.
    """
    sizes = SUITES[name]
    null_sizes = dict(horizon=sizes.type1_horizon, reps=sizes.type1_reps)
    return {
        'null': ('null', null_sizes),
        'easy': ('easy', {}),
        'rct': ('rct', {}),
        'rct_null': ('rct_null', null_sizes),
        'determinism': ('easy', dict(horizon=500, record_every=50)),
    }


def resolve_presets(name):
    """
    ``{label: (config, settings)}`` of `suite_presets`.
    """
    return dict((label, _preset(preset, **overrides))
                for label, (preset, overrides) in suite_presets(name).items())


def suite_settings(name):
    """
    Provenance echo for ``spruce validate``: suite sizes and the resolved
    settings of every preset.
    """
    return {
        'suite': name,
        'sizes': SUITES[name]._asdict(),
        'presets': dict((label, settings) for label, (_, settings) in resolve_presets(name).items()),
    }


def run_suite(name, threads=None):
    """
    Run every check of suite ``name`` and return the reports in order.
    """
    sizes = SUITES[name]
    configs = dict((label, config) for label, (config, _) in resolve_presets(name).items())
    reports = []

    def record(report):
        reports.append(report)
        puts("%-22s %s" % (report.name, report.status), level='status')

    with hide('progress'):
        null = configs['null']
        record(diagnostics.type_one_error_check(null, threads=threads))
        record(diagnostics.null_mean_check(null, reps=sizes.null_mean_reps, threads=threads))

        traces = [harness.episode(config, 0)
                  for config in diagnostics.random_configs(sizes.fuzz_traces, seed=null.master_seed)]
        record(diagnostics.ordering_check(traces))
        worst = max((diagnostics.portfolio_regret_check(trace) for trace in traces),
                    key=lambda r: (r.status == diagnostics.FAIL, r.measured))
        record(worst)

        easy = configs['easy']
        oracle, report = oracle_grid_check(easy)
        record(report)
        record(diagnostics.growth_rate_check(easy, oracle, n=sizes.growth_n, seeds=sizes.growth_seeds,
                                             threads=threads))

        _, report = diagnostics.stopping_ratio_sweep(easy, sizes.sweep_alphas, oracle=oracle,
                                                     reps=sizes.sweep_reps, final_bound=SPRUCE_FINAL_RATIO,
                                                     threads=threads)
        record(report._replace(name='stopping_ratio_spruce'))
        fixed = easy._replace(policy=allocation.make_policy(allocation.ORACLE, arm=oracle.best_arm))
        _, report = diagnostics.stopping_ratio_sweep(fixed, sizes.sweep_alphas, oracle=oracle,
                                                     reps=sizes.sweep_reps, final_bound=ORACLE_FINAL_RATIO,
                                                     threads=threads)
        record(report._replace(name='stopping_ratio_oracle'))

        best = easy.arms[oracle.best_arm - 1]
        record(diagnostics.mgf_check(best, easy.problem, samples=sizes.mgf_samples,
                                     portfolio=oracle.portfolios[oracle.best_arm - 1]))
        record(diagnostics.confidence_interval_check(best, easy.problem, n=sizes.ci_n, reps=sizes.ci_reps,
                                                     seed=easy.master_seed))

        record(diagnostics.suboptimal_pulls_check(easy, oracle, n_grid=sizes.pulls_grid,
                                                  seeds=sizes.pulls_seeds, threads=threads))
        record(diagnostics.numeraire_ratio_check(easy, oracle, reps=sizes.numeraire_reps, threads=threads))

        rct = configs['rct']
        record(diagnostics.ht_unbiasedness_check(rct, arm=1, rounds=sizes.ht_rounds))
        record(diagnostics.lambda_identity_check(rct))
        report = diagnostics.type_one_error_check(configs['rct_null'], threads=threads)
        record(report._replace(name='type_one_error_rct'))
        round_robin = rct._replace(policy=allocation.make_policy(allocation.ROUND_ROBIN))
        record(diagnostics.rejection_time_ratio_check(rct, round_robin, alpha=rct.alpha, seeds=sizes.rct_seeds,
                                                      factor=RCT_SPEEDUP, threads=threads))

        record(determinism_check(configs['determinism'], sizes.determinism_reps, threads=threads))
    return reports

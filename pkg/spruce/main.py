"""
This module contains Spruce's `main` method plus related subroutines.

`main` is executed as the command line ``spruce`` program and takes care of
parsing options and commands, loading the experiment config and dispatching
to the requested command. Library errors are turned into exit statuses here
and nowhere else: 2 for config errors, 3 for runtime/numeric errors and 4
when a validation check fails.
"""

import json
import sys
from optparse import OptionParser

from spruce import state
from spruce.config import load_config, parse_overrides
from spruce.exceptions import ConfigError, SpruceError, ValidationFailure
from spruce.state import env_options
from spruce.utils import abort, indent, puts, warn


COMMANDS = ('simulate', 'oracle', 'sweep-alpha', 'validate')


def parse_options():
    """
    Handle command-line options with optparse.OptionParser.

    Return ``(parser, options, arguments)``.
    """
    parser = OptionParser(
        usage=("spruce [options] <command>\n\n"
               "commands:\n"
               "  simulate     --config PATH --out DIR [--threads N]\n"
               "  oracle       --config PATH\n"
               "  sweep-alpha  --config PATH --alphas A1,A2,... --out DIR\n"
               "  validate     --suite fast|full [--out DIR]"))

    # Allow overriding of config-file keys at runtime.
    parser.add_option('--set',
        metavar="KEY=VALUE,...",
        dest='config_settings',
        default="",
        help="comma separated KEY=VALUE pairs overriding config-file keys"
    )

    parser.add_option('-V', '--version',
        action='store_true',
        dest='show_version',
        default=False,
        help="show program's version number and exit"
    )

    for option in env_options:
        parser.add_option(option)

    opts, args = parser.parse_args()
    return parser, opts, args


def update_output_levels(show, hide):
    """
    Update state.output values as per given comma-separated list of key names.

    For example, ``update_output_levels(show='debug,warnings')`` is
    functionally equivalent to ``state.output['debug'] = True ;
    state.output['warnings'] = True``. Conversely, anything given to ``hide``
    sets the values to ``False``.
    """
    if show:
        for key in show.split(','):
            state.output[key] = True
    if hide:
        for key in hide.split(','):
            state.output[key] = False


def parse_alphas(text):
    """
    ``"0.01,0.001"`` -> ``[0.01, 0.001]``; every level must lie in (0, 1).
    """
    if not text:
        raise ConfigError("--alphas is required, e.g. --alphas 0.01,0.001")
    try:
        alphas = [float(a) for a in text.split(',') if a.strip()]
    except ValueError:
        raise ConfigError("--alphas must be comma-separated numbers, got %r" % (text,))
    bad = [a for a in alphas if not 0.0 < a < 1.0]
    if bad or not alphas:
        raise ConfigError("every alpha must lie strictly inside (0, 1), got %s" % (text,))
    return alphas


def _require(value, flag):
    if not value:
        raise ConfigError("%s is required for the %s command" % (flag, state.env.command))
    return value


def _load():
    path = _require(state.env.config_path, '--config')
    config, settings = load_config(path, state.env.settings_overrides)
    if state.output.debug:
        puts("Resolved config:\n%s" % indent("%s = %s" % kv for kv in settings.items()), level='debug')
    return config, settings


def simulate():
    from spruce import harness, writers
    config, settings = _load()
    out_dir = _require(state.env.out_dir, '--out')
    puts("Running %d episodes of %d rounds on %d worker(s)..."
         % (config.reps, config.horizon, max(1, state.env.threads)))
    summary = harness.monte_carlo(config)
    paths = writers.write_simulation(out_dir, summary, settings)
    puts("Rejected in %d/%d episodes (%.4f, CI [%.4f, %.4f])"
         % ((summary.rejections, config.reps, summary.rejection_rate) + summary.rejection_ci), level='results')
    puts("Wrote:\n%s" % indent(paths))


def oracle():
    from spruce.diagnostics import solve_oracle
    config, settings = _load()
    solution = solve_oracle(config)
    lines = ["%-4s %-28s %-12s %-12s" % ('arm', 'portfolio', 'growth', 'gap')]
    for arm, (lam, growth, gap) in enumerate(zip(solution.portfolios, solution.growths, solution.gaps), 1):
        lines.append("%-4d %-28s %-12.8f %-12.8f"
                     % (arm, "(" + ", ".join("%.6f" % x for x in lam) + ")", growth, gap))
    lines.append("best arm %d, optimal growth %.8f" % (solution.best_arm, solution.growth))
    puts("\n".join(lines), level='results')
    document = {
        'config': dict(settings),
        'oracle': solution._asdict(),
        'schema_version': state.env.schema_version,
    }
    puts(json.dumps(document, sort_keys=True, indent=2), level='results')


def sweep_alpha():
    from spruce import diagnostics, writers
    config, settings = _load()
    alphas = parse_alphas(state.env.alphas)
    out_dir = _require(state.env.out_dir, '--out')
    rows, report = diagnostics.stopping_ratio_sweep(config, alphas)
    for row in rows:
        if row.censored_frac > 0:
            warn("alpha=%g: %.1f%% of runs censored at %d rounds; mean_tau and ratio are lower estimates"
                 % (row.alpha, 100 * row.censored_frac, config.max_horizon))
    paths = writers.write_alpha_sweep(out_dir, rows, report, settings)
    puts("%s %s (final ratio %.4f)" % (report.name, report.status, report.measured), level='results')
    puts("Wrote:\n%s" % indent(paths))


def validate():
    from spruce import suite, writers
    from spruce.colors import green, red
    name = state.env.suite
    puts("Running the %s validation suite..." % name)
    reports = suite.run_suite(name)
    out_dir = state.env.out_dir or '.'
    paths = writers.write_validation(out_dir, reports, name, suite.suite_settings(name))
    failed = [r.name for r in reports if r.status == 'FAIL']
    puts("Wrote:\n%s" % indent(paths))
    if failed:
        puts(red("FAIL: %s" % ", ".join(failed)), level='results')
        raise ValidationFailure("%d validation check(s) failed: %s" % (len(failed), ", ".join(failed)))
    puts(green("All %d checks passed." % len(reports)), level='results')


_dispatch = {
    'simulate': simulate,
    'oracle': oracle,
    'sweep-alpha': sweep_alpha,
    'validate': validate,
}


def main():
    """
    Main command-line execution loop.
    """
    try:
        parser, options, arguments = parse_options()

        # Update env with any overridden option values
        for option in env_options:
            state.env[option.dest] = getattr(options, option.dest)
        state.env.settings_overrides = parse_overrides(options.config_settings)

        update_output_levels(show=options.show, hide=options.hide)

        if options.show_version:
            import numpy
            import scipy
            print("spruce %s" % state.env.version)
            print("numpy %s" % numpy.__version__)
            print("scipy %s" % scipy.__version__)
            print("Python %d.%d.%d" % sys.version_info[:3])
            sys.exit(0)

        if len(arguments) != 1 or arguments[0] not in COMMANDS:
            if arguments:
                warn("Unknown command: %s" % " ".join(arguments))
            parser.print_help()
            sys.exit(1)

        state.env.command = arguments[0]
        if state.output.debug:
            print("Command to run: %s" % state.env.command)
        _dispatch[state.env.command]()

        if state.output.status:
            print("\nDone.")
    except SpruceError as e:
        abort(str(e) or e.__class__.__name__, code=e.exit_code)
    except KeyboardInterrupt:
        if state.output.status:
            sys.stderr.write("\nStopped.\n")
        sys.exit(1)
    except Exception:  # do not catch SystemExit
        sys.excepthook(*sys.exc_info())
        sys.exit(SpruceError.exit_code)
    sys.exit(0)


if __name__ == '__main__':
    main()

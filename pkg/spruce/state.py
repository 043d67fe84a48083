"""
Internal shared-state variables such as CLI settings and output levels.
"""

import os
from optparse import make_option

from spruce.version import get_version
from spruce.utils import _AliasDict, _AttributeDict


def _default_threads():
    """
    Number of episode workers to use when ``--threads`` is not given.
    """
    return os.cpu_count() or 1


# Options/settings which exist both as environment keys and which can be set on
# the command line. When used via `spruce` they are added to the optparse
# parser, and either way they are added to `env` below (i.e. the 'dest' value
# becomes the environment key and the default its value).
#
# Always specify some sort of default to avoid ending up with
# optparse.NO_DEFAULT. In general, None is a better default than ''.
env_options = [

    make_option('-a', '--alphas',
        default=None,
        metavar='A1,A2,...',
        help="comma-separated significance levels for sweep-alpha"
    ),

    make_option('-c', '--config',
        dest='config_path',
        default=None,
        metavar='PATH',
        help="experiment config file, or preset:<name>"
    ),

    make_option('--colorize-errors',
        action='store_true',
        default=False,
        help="color error output",
    ),

    make_option('--hide',
        metavar='LEVELS',
        help="comma-separated list of output levels to hide"
    ),

    make_option('-o', '--out',
        dest='out_dir',
        default=None,
        metavar='DIR',
        help="directory receiving CSV/JSON/report output"
    ),

    make_option('--show',
        metavar='LEVELS',
        help="comma-separated list of output levels to show"
    ),

    make_option('-s', '--suite',
        default='fast',
        choices=('fast', 'full'),
        metavar='SUITE',
        help="validation suite to run: fast or full"
    ),

    make_option('-t', '--threads',
        type='int',
        default=_default_threads(),
        metavar='N',
        help="number of parallel episode workers (default: all cores)"
    ),

]


# Global environment dict. Most default values are specified in `env_options`
# above; anything in here is generally not settable via the command line.
env = _AttributeDict({
    'abort_exception': None,
    'command': None,
    # Seconds the job queue sleeps between polls of its worker processes.
    'io_sleep': 0.01,
    # Bumped whenever a column is added to or removed from an output file.
    'schema_version': 1,
    'seed_env_var': 'SPRUCE_SEED',
    # KEY=VALUE config overrides collected from --set.
    'settings_overrides': {},
    'version': get_version('short'),
})

for option in env_options:
    env[option.dest] = option.default


# Keys are "levels" or "groups" of output, values are always boolean,
# determining whether output falling into the given group is printed.
#
# By default everything except 'debug' is printed.
output = _AliasDict({
    'status': True,
    'progress': True,
    'results': True,
    'warnings': True,
    'aborts': True,
    'debug': False,
}, aliases={
    'everything': ['status', 'progress', 'results', 'warnings', 'debug'],
    'reports': ['results', 'status'],
})

"""
Experiment config files: the ``key = value`` schema, arm grammar, built-in
presets and resolution into a `~spruce.harness.SimConfig`.

A config file is flat; blank lines and lines starting with ``#`` are ignored::

    # easy analogue: one arm far from the null
    problem = one_sided_mean
    mu0 = 0.5
    arms = bernoulli(0.7); bernoulli(0.5); bernoulli(0.5)
    horizon = 20000

Arms are separated by ``;`` and written as ``bernoulli(p)``, ``beta(a, b)``,
``discrete(y:p, y:p, ...)`` or ``pair(<arm>, <arm>)``. For the
``ate_threshold`` problem, ``arms`` lists the treated outcome laws and
``control`` the shared control law.
"""

import os
import re
from collections import OrderedDict

from spruce import allocation, eprocess, harness, models
from spruce.exceptions import ConfigError
from spruce.state import env


PRESET_PREFIX = 'preset:'


def _bool(value):
    lowered = value.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError("not a boolean: %r" % (value,))


def _int(value):
    return int(value.strip().replace('_', ''))


def _float(value):
    return float(value.strip())


def _choice(*choices):
    def parse(value):
        value = value.strip()
        if value not in choices:
            raise ValueError("expected one of %s" % ", ".join(choices))
        return value
    return parse


def _text(value):
    return value.strip()


# key: (parser, default, help). A default of None marks a key without
# default; `resolve` decides whether it is required.
config_keys = OrderedDict([
    ('problem', (_choice(*models.KINDS), models.ONE_SIDED, "testing problem")),
    ('mu0', (_float, 0.5, "null mean for the mean-testing problems")),
    ('delta', (_float, 0.0, "ATE threshold of the ate_threshold problem")),
    ('pi', (_float, 0.5, "treatment propensity of the ate_threshold problem")),
    ('arms', (_text, None, "arm laws separated by ';' (required)")),
    ('control', (_text, None, "control outcome law (required for ate_threshold)")),
    ('policy', (_choice(*allocation.POLICIES), allocation.SPRUCE, "allocation policy")),
    ('oracle_arm', (_int, 1, "arm pulled by the oracle policy")),
    ('gamma', (_float, 3.0, "UCB exploration exponent, > 2")),
    ('zeta', (_float, 1.0, "UCB exploration scale, > 0")),
    ('statistic', (_choice(*eprocess.STATISTICS), eprocess.CO96, "e-process statistic")),
    ('alpha', (_float, 0.05, "significance level")),
    ('horizon', (_int, 10000, "rounds per episode")),
    ('reps', (_int, 100, "Monte-Carlo replications")),
    ('master_seed', (_int, 0, "seed of every random stream; SPRUCE_SEED overrides")),
    ('early_stop', (_bool, False, "stop episodes at the first rejection")),
    ('max_horizon', (_int, 1000000, "censoring time of stopping-time studies")),
    ('beta_atoms', (_int, 0, "atoms per beta arm for oracle computations (0 = none)")),
    ('record_every', (_int, 1, "trajectory rows are written every this many rounds")),
    ('slack', (_float, 4.0, "standard errors allowed by Monte-Carlo checks")),
])


PRESETS = {
    'null': {
        'arms': 'bernoulli(0.5); bernoulli(0.5); bernoulli(0.5)',
        'horizon': '5000',
        'reps': '2000',
    },
    'easy': {
        'arms': 'bernoulli(0.7); bernoulli(0.5); bernoulli(0.5)',
        'horizon': '20000',
        'reps': '50',
        'alpha': '0.001',
    },
    'hard': {
        'arms': 'bernoulli(0.56); bernoulli(0.54); bernoulli(0.54); bernoulli(0.52); bernoulli(0.5)',
        'horizon': '20000',
        'reps': '50',
        'alpha': '0.001',
    },
    'rct': {
        'problem': models.ATE,
        'pi': '0.5',
        'delta': '0.0',
        'arms': 'bernoulli(0.8); bernoulli(0.5); bernoulli(0.5)',
        'control': 'bernoulli(0.5)',
        'alpha': '0.001',
        'reps': '300',
    },
    'rct_null': {
        'problem': models.ATE,
        'pi': '0.5',
        'delta': '0.0',
        'arms': 'bernoulli(0.5); bernoulli(0.5); bernoulli(0.5)',
        'control': 'bernoulli(0.5)',
        'horizon': '5000',
        'reps': '2000',
    },
}


def split_top_level(sep, text):
    """
    Split ``text`` on ``sep`` outside parentheses.
    """
    parts, depth, current = [], 0, []
    for char in text:
        if char == '(':
            depth += 1
        elif char == ')':
            depth -= 1
            if depth < 0:
                raise ConfigError("unbalanced parentheses in %r" % (text,))
        if char == sep and depth == 0:
            parts.append(''.join(current))
            current = []
        else:
            current.append(char)
    if depth:
        raise ConfigError("unbalanced parentheses in %r" % (text,))
    parts.append(''.join(current))
    return parts


_ARM_RE = re.compile(r'^\s*([a-z_]+)\s*\((.*)\)\s*$', re.DOTALL)


def parse_arm(text):
    """
    Parse one arm law, e.g. ``beta(2, 3)`` or ``pair(bernoulli(0.5), beta(1, 1))``.
    """
    match = _ARM_RE.match(text)
    if not match:
        raise ConfigError("cannot parse arm %r" % (text,))
    kind, body = match.groups()
    args = [a.strip() for a in split_top_level(',', body)]
    try:
        if kind == harness.BERNOULLI and len(args) == 1:
            return harness.bernoulli(float(args[0]))
        if kind == harness.BETA and len(args) == 2:
            return harness.beta(float(args[0]), float(args[1]))
        if kind == harness.DISCRETE:
            atoms = [a.split(':') for a in args]
            if any(len(atom) != 2 for atom in atoms):
                raise ConfigError("discrete atoms are written y:p, got %r" % (text,))
            return harness.discrete([float(y) for y, _ in atoms], [float(p) for _, p in atoms])
        if kind == harness.PAIR and len(args) == 2:
            return harness.pair(parse_arm(args[0]), parse_arm(args[1]))
    except ValueError:
        raise ConfigError("bad number in arm %r" % (text,))
    raise ConfigError("unknown arm law or wrong argument count: %r" % (text,))


def parse_arms(text):
    arms = [a for a in split_top_level(';', text) if a.strip()]
    if not arms:
        raise ConfigError("no arms given")
    return [parse_arm(a) for a in arms]


def load_settings(path):
    """
    Read a config file (or ``preset:<name>``) into a dict of raw strings.

    Raises `~spruce.exceptions.ConfigError` for a missing file, an unknown
    preset or a line without ``=``.
    """
    if path.startswith(PRESET_PREFIX):
        name = path[len(PRESET_PREFIX):]
        try:
            return dict(PRESETS[name])
        except KeyError:
            raise ConfigError("unknown preset %r (expected one of %s)" % (name, ", ".join(sorted(PRESETS))))
    if not os.path.isfile(path):
        raise ConfigError("config file not found: %s" % path)
    settings = {}
    with open(path, 'r') as fd:
        for lineno, line in enumerate(fd, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            key, sep, value = line.partition('=')
            if not sep:
                raise ConfigError("%s:%d: expected key = value, got %r" % (path, lineno, line))
            settings[key.strip()] = value.strip()
    return settings


def parse_overrides(text):
    """
    ``KEY=VALUE,KEY=VALUE`` from ``--set``; commas inside parentheses belong
    to the value.
    """
    overrides = {}
    for pair in split_top_level(',', text or ''):
        if not pair.strip():
            continue
        key, sep, value = pair.partition('=')
        if not sep:
            raise ConfigError("--set expects KEY=VALUE, got %r" % (pair,))
        overrides[key.strip()] = value.strip()
    return overrides


def typed_settings(raw, environ=None):
    """
    Validate raw strings against `config_keys` and fill in defaults.

    Unknown keys are errors. ``SPRUCE_SEED`` in ``environ`` (default
    ``os.environ``) overrides ``master_seed``.
    """
    environ = os.environ if environ is None else environ
    unknown = sorted(set(raw) - set(config_keys))
    if unknown:
        raise ConfigError("unknown config key(s): %s" % ", ".join(unknown))
    raw = dict(raw)
    if environ.get(env.seed_env_var):
        raw['master_seed'] = environ[env.seed_env_var]
    settings = OrderedDict()
    for key, (parse, default, _) in config_keys.items():
        if key not in raw:
            settings[key] = default
            continue
        try:
            settings[key] = parse(raw[key])
        except ValueError as e:
            raise ConfigError("bad value for %s: %r (%s)" % (key, raw[key], e))
    return settings


def resolve(settings):
    """
    Build a validated `~spruce.harness.SimConfig` from typed settings.

    The ``KELLY`` statistic needs the arms' log-optimal portfolios, so it
    solves the oracle here.
    """
    if not settings['arms']:
        raise ConfigError("the arms key is required")
    problem = models.make_problem(settings['problem'], mu0=settings['mu0'],
                                  delta=settings['delta'], pi=settings['pi'])
    arms = parse_arms(settings['arms'])
    if problem.kind == models.ATE:
        if not settings['control']:
            raise ConfigError("the %s problem needs a control law" % (models.ATE,))
        control = parse_arm(settings['control'])
        arms = [harness.potential_outcomes(control, arm) for arm in arms]
    elif settings['control']:
        raise ConfigError("control is only used by the %s problem" % (models.ATE,))

    constants = models.constants(problem)
    params = allocation.ucb_params(settings['gamma'], settings['zeta'], constants.b)
    policy = allocation.make_policy(settings['policy'], params=params,
                                    arm=settings['oracle_arm'], K=len(arms))
    if settings['slack'] <= 0:
        raise ConfigError("slack must be positive, got %r" % (settings['slack'],))
    config = harness.sim_config(
        arms, problem, policy,
        statistic_kind=settings['statistic'],
        alpha=settings['alpha'],
        horizon=settings['horizon'],
        reps=settings['reps'],
        master_seed=settings['master_seed'],
        early_stop=settings['early_stop'],
        max_horizon=settings['max_horizon'],
        beta_atoms=settings['beta_atoms'],
        record_every=settings['record_every'],
    )
    if config.statistic_kind == eprocess.UP and constants.d != 1:
        raise ConfigError("the UP statistic is only available for one-dimensional models")
    if config.statistic_kind == eprocess.KELLY:
        from spruce.diagnostics import solve_oracle
        config = config._replace(kelly_portfolios=solve_oracle(config).portfolios)
    return config


def load_config(path, overrides=None, environ=None):
    """
    `load_settings` + ``--set`` overrides + `typed_settings` + `resolve`.

    Returns ``(config, settings)``; ``settings`` is the typed, defaults-filled
    dict echoed into every output.
    """
    raw = load_settings(path)
    raw.update(overrides or {})
    settings = typed_settings(raw, environ)
    return resolve(settings), settings

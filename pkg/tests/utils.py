from contextlib import contextmanager
from functools import partial, wraps
import copy
import os
import re
import shutil
import tempfile

from nose.tools import raises

from spruce import allocation, harness, models
from spruce.state import env, output

from mock_streams import mock_streams


def _assert_contains(needle, haystack, invert):
    matched = re.search(needle, haystack, re.M)
    if (invert and matched) or (not invert and not matched):
        raise AssertionError("r'%s' %sfound in '%s'" % (
            needle,
            "" if invert else "not ",
            haystack
        ))


assert_contains = partial(_assert_contains, invert=False)
assert_not_contains = partial(_assert_contains, invert=True)


def eq_(result, expected, msg=None):
    """
    Shadow of the Nose builtin which presents easier to read multiline output.
    """
    params = {'expected': expected, 'result': result}
    default_msg = """
Expected:
%(expected)r

Got:
%(result)r
""" % params
    assert result == expected, msg or default_msg


def support(path):
    return os.path.join(os.path.dirname(__file__), 'support', path)


def aborts(func):
    return raises(SystemExit)(mock_streams('stderr')(func))


def restores_state(func):
    """
    Run ``func`` against copies of `env` and `output`, restoring both after.
    """
    @wraps(func)
    def inner(*args, **kwargs):
        previous_env = copy.deepcopy(dict(env))
        previous_output = dict(output)
        try:
            return func(*args, **kwargs)
        finally:
            env.clear()
            env.update(previous_env)
            output.update(previous_output)
    return inner


@contextmanager
def tempdir():
    path = tempfile.mkdtemp()
    try:
        yield path
    finally:
        shutil.rmtree(path)


def read(path):
    with open(path) as fd:
        return fd.read()


def bernoulli_config(means, mu0=0.5, policy=allocation.SPRUCE, oracle_arm=None, **kwargs):
    """
    One-sided mean testing on Bernoulli arms with default UCB parameters.
    """
    problem = models.make_problem(models.ONE_SIDED, mu0=mu0)
    params = allocation.ucb_params(3.0, 1.0, models.constants(problem).b)
    arms = [harness.bernoulli(p) for p in means]
    policy = allocation.make_policy(policy, params=params, arm=oracle_arm, K=len(arms))
    return harness.sim_config(arms, problem, policy, **kwargs)


def rct_config(treated, control=0.5, pi=0.5, delta=0.0, policy=allocation.SPRUCE, **kwargs):
    problem = models.make_problem(models.ATE, pi=pi, delta=delta)
    params = allocation.ucb_params(3.0, 1.0, models.constants(problem).b)
    arms = [harness.potential_outcomes(harness.bernoulli(control), harness.bernoulli(p)) for p in treated]
    return harness.sim_config(arms, problem, allocation.make_policy(policy, params=params), **kwargs)

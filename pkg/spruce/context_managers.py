"""
Context managers for use with the ``with`` statement.

They temporarily change `~spruce.state.env` or `~spruce.state.output` and
restore the previous values on exit, e.g. to silence progress output while a
validation check runs its own Monte-Carlo batch::

    with hide('progress'), settings(threads=1):
        report = stopping_ratio_sweep(config, alphas)
"""

from contextlib import contextmanager

from spruce.state import output, env


@contextmanager
def _set_output(groups, which):
    previous = {}
    try:
        for group in output.expand_aliases(groups):
            previous[group] = output[group]
            output[group] = which
        yield
    finally:
        output.update(previous)


def show(*groups):
    """
    Set the given output ``groups`` to True for the duration of the block.

    Mostly useful for the normally hidden ``debug`` group.
    """
    return _set_output(groups, True)


def hide(*groups):
    """
    Set the given output ``groups`` to False for the duration of the block.
    """
    return _set_output(groups, False)


@contextmanager
def settings(**kwargs):
    """
    Temporarily override ``env`` with the given key/value pairs.

    Keys that did not exist before the block are removed afterwards; existing
    keys get their previous values back::

        with settings(threads=1, abort_exception=ValueError):
            main.cmd_oracle('preset:easy')
    """
    previous = {}
    new = []
    for key, value in kwargs.items():
        if key in env:
            previous[key] = env[key]
        else:
            new.append(key)
        env[key] = value
    try:
        yield
    finally:
        env.update(previous)
        for key in new:
            del env[key]


@contextmanager
def quiet():
    """
    Hide all output except aborts.
    """
    with _set_output(['everything'], False):
        yield

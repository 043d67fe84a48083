"""
Internal subroutines for e.g. aborting execution with an error message,
printing progress, or indenting multiline report text.
"""
import sys
import textwrap


def abort(msg, code=1):
    """
    Abort execution, print ``msg`` to stderr and exit with status ``code``.

    Raises `SystemExit` directly (rather than calling ``sys.exit``) so the
    message is printed exactly once and honors the ``aborts`` output level.
    Callers that want to recover can catch ``SystemExit``; the message is
    available as ``.message`` and the status as ``.code``.

    If ``env.abort_exception`` is set, that exception class is raised with
    ``msg`` instead, which is how the test suite and library users turn aborts
    into ordinary exceptions.
    """
    from spruce.state import output, env
    if not env.colorize_errors:
        red = lambda x: x  # noqa: E731
    else:
        from spruce.colors import red

    if output.aborts:
        sys.stderr.write(red("\nFatal error: %s\n" % msg))
        sys.stderr.write(red("\nAborting.\n"))

    if env.abort_exception:
        raise env.abort_exception(msg)
    e = SystemExit(code)
    e.message = msg
    raise e


def warn(msg):
    """
    Print warning message to stderr, but do not abort execution.

    Honors the ``warnings`` output level.
    """
    from spruce.state import output, env

    if not env.colorize_errors:
        magenta = lambda x: x  # noqa: E731
    else:
        from spruce.colors import magenta

    if output.warnings:
        sys.stderr.write(magenta("\nWarning: %s\n\n" % msg))


def indent(text, spaces=4, strip=False):
    """
    Return ``text`` indented by the given number of spaces.

    If text is not a string, it is assumed to be a list of lines and will be
    joined by ``\\n`` prior to indenting. ``strip=True`` dedents first, so
    relative indentation is kept but the block is normalized.
    """
    if not hasattr(text, 'splitlines'):
        text = '\n'.join(text)
    if strip:
        text = textwrap.dedent(text)
    prefix = ' ' * spaces
    output = '\n'.join(prefix + line for line in text.splitlines())
    output = output.strip()
    return prefix + output


def puts(text, level='status', end="\n", flush=False):
    """
    ``print`` to ``sys.stdout``, managed by the output level ``level``.

    Nothing is written when ``output[level]`` is off. ``end`` and ``flush``
    mirror Python 3's ``print``.

    .. seealso:: `~spruce.utils.fastprint`
    """
    from spruce.state import output
    if output.get(level, False):
        sys.stdout.write(str(text) + end)
        if flush:
            sys.stdout.flush()


def fastprint(text, level='progress', end="", flush=True):
    """
    Print ``text`` immediately, without a line ending.

    Alias of `~spruce.utils.puts` with defaults suited to progress dots
    printed while episodes are running.
    """
    return puts(text=text, level=level, end=end, flush=flush)


class _AttributeDict(dict):
    """
    Dictionary subclass enabling attribute lookup/assignment of keys/values.

    For example::

        >>> m = _AttributeDict({'threads': 4})
        >>> m.threads
        4
        >>> m.threads = 1
        >>> m['threads']
        1
    """
    def __getattr__(self, key):
        try:
            return self[key]
        except KeyError:
            # to conform with __getattr__ spec
            raise AttributeError(key)

    def __setattr__(self, key, value):
        self[key] = value


class _AliasDict(_AttributeDict):
    """
    `_AttributeDict` subclass whose ``aliases`` fan writes out to other keys.

    ``aliases`` maps an alias name to a list of key (or alias) names. Writing
    to an alias sets every mapped key; aliases hold no value of their own, so
    they cannot be read and do not show up in ``keys()``::

        levels = _AliasDict(
            {'status': True, 'progress': True, 'debug': False},
            aliases={'chatter': ['status', 'progress']}
        )
        levels['chatter'] = False    # silences status and progress

    `expand_aliases` turns a list of names into the underlying keys, without
    deduplication.
    """
    def __init__(self, arg=None, aliases=None):
        init = super(_AliasDict, self).__init__
        if arg is not None:
            init(arg)
        else:
            init()
        # Can't use super() here because of _AttributeDict's setattr override
        dict.__setattr__(self, 'aliases', aliases or {})

    def __setitem__(self, key, value):
        # Attr test required to not blow up when deepcopy'd
        if hasattr(self, 'aliases') and key in self.aliases:
            for aliased in self.aliases[key]:
                self[aliased] = value
        else:
            return super(_AliasDict, self).__setitem__(key, value)

    def expand_aliases(self, keys):
        ret = []
        for key in keys:
            if key in self.aliases:
                ret.extend(self.expand_aliases(self.aliases[key]))
            else:
                ret.append(key)
        return ret

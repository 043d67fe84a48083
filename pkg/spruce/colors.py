"""
Functions for wrapping strings in ANSI color codes.

Used for PASS/FAIL markers in validation output and, when
``env.colorize_errors`` is set, for warnings and aborts::

    from spruce.colors import green, red

    print(green("PASS") + " type_i_error")

If the shell env var ``SPRUCE_DISABLE_COLORS`` is set to any non-empty value,
all colorization driven by this module is skipped.
"""

import os


def _wrap_with(code):

    def inner(text, bold=False):
        c = code

        if os.environ.get('SPRUCE_DISABLE_COLORS'):
            return text

        if bold:
            c = "1;%s" % c
        return "\033[%sm%s\033[0m" % (c, text)
    return inner


red = _wrap_with('31')
green = _wrap_with('32')
magenta = _wrap_with('35')

"""
Custom spruce exception classes.

Library code raises these; only `spruce.main` turns them into process exit
codes (see ``exit_code`` on each class).
"""


class SpruceError(Exception):
    exit_code = 3

    # Must allow for calling with zero args, since exceptions raised inside
    # episode workers are pickled across a multiprocessing.Queue.
    def __init__(self, message=None, wrapped=None):
        super(SpruceError, self).__init__(message)
        self.message = message
        self.wrapped = wrapped

    def __str__(self):
        return self.message or ""

    def __repr__(self):
        return "%s(%s) => %r" % (
            self.__class__.__name__, self.message, self.wrapped
        )


class ConfigError(SpruceError):
    """
    Bad config file, unknown key, or a value violating a model invariant.
    """
    exit_code = 2


class NumericError(SpruceError):
    exit_code = 3


class DimensionError(SpruceError, ValueError):
    """
    Structural mismatch, e.g. an e-vector whose length differs from d+1.
    """
    exit_code = 3


class DegenerateInputError(NumericError):
    """
    The log-wealth objective is identically -inf (an all-zero e-vector).
    """


class UnsupportedDimensionError(SpruceError):
    exit_code = 3


class DomainError(SpruceError, ValueError):
    """
    A scalar argument outside its domain, e.g. an outcome outside [0, 1].
    """
    exit_code = 3


class ValidationFailure(SpruceError):
    exit_code = 4


class OutputError(SpruceError):
    """
    An output file or directory could not be written.
    """
    exit_code = 3

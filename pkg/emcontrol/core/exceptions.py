"""Exception hierarchy shared by every emcontrol module"""


class EmControlError(Exception):
    """Base class for all errors raised by emcontrol"""


class UsageError(EmControlError, ValueError):
    """A caller broke an operation's contract (bad action, wrong dimensions, ...)"""


class UnsupportedModelError(UsageError):
    """Alignment requested for a representation under which it is not exact"""


class DivergenceError(EmControlError, ArithmeticError):
    """A learned head or model produced non-finite values"""


class ConfigError(EmControlError):
    """An experiment configuration file is missing, malformed or inconsistent"""


class OracleError(EmControlError):
    """A ground-truth solver failed to converge or hit a singular system"""

"""Exception types raised by ep_lab."""


class EpLabError(Exception):
    """Base class for all library errors."""


class ConfigError(EpLabError, ValueError):
    """Invalid system, scenario or command-line configuration."""


class UnknownPreset(ConfigError):
    pass


class InconsistentSpectrum(EpLabError, ValueError):
    pass


class ZeroVector(EpLabError, ValueError):
    pass


class NoRootInInterval(EpLabError):
    pass


class DegenerateWidths(EpLabError, ValueError):
    pass


class FamilyMismatch(EpLabError, ValueError):
    pass


class NoConvergence(EpLabError):
    """Newton search for an exceptional point did not converge.

    ``diagnostic`` carries a short human-readable reason.
    """

    def __init__(self, message, diagnostic=None, last=None):
        super().__init__(message)
        self.diagnostic = diagnostic or message
        self.last = last


class LeftBox(NoConvergence):
    pass


class PoleOnRealAxis(EpLabError, ZeroDivisionError):
    pass


class TooFewPoints(EpLabError, ValueError):
    pass


class NumericError(EpLabError, ArithmeticError):
    """Non-finite value produced during a sweep; ``index`` is the grid index."""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"grid index {index}: {message}"
        super().__init__(message)
        self.index = index

"""Shared exception types."""


class Stab23Error(Exception):
    pass


class PrecisionMismatch(Stab23Error):
    """Two values at different 3-adic precisions entered one operation."""


class NonUnitError(Stab23Error):
    """Inversion or a group operation was attempted on a non-unit."""


class ClosureBoundExceeded(Stab23Error):
    """Subgroup closure search exceeded its configured element cap."""


class ResourceBoundExceeded(Stab23Error):
    """A quotient, window or matrix size exceeded the configured bound."""


class PrecisionUnstable(Stab23Error):
    """A reported rank changed when recomputed at precision N+2."""


class CheckFailed(Stab23Error):
    """An exact identity or structural assertion did not hold."""

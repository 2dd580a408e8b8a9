"""Exception hierarchy.

Validation problems (bad input, wrong representation, oversized operators)
derive from :class:`ValidationError`; failures of the numerics themselves
derive from :class:`NumericError`. The CLI maps these to exit codes 1 and 2.
"""

from __future__ import annotations


class ProbeResonanceError(Exception):
    pass


class ValidationError(ProbeResonanceError, ValueError):
    pass


class SizeError(ValidationError):
    pass


class UnsupportedRepresentationError(ValidationError):
    pass


class NumericError(ProbeResonanceError, ArithmeticError):
    pass


class DegenerateRootsError(NumericError):
    """Cubic roots too close for the residue formula; use ``p_numeric3``."""


class UnreachableTargetError(NumericError):
    def __init__(self, message: str, best_p: float, best_alpha: float):
        super().__init__(message)
        self.best_p = best_p
        self.best_alpha = best_alpha


class StrongCouplingWarning(UserWarning):
    """Coupling is not small compared to the probe frequency."""

"""Exception types shared across the package.

Every error below signals a *broken guarantee*: either bad input (the
ValueError family) or a violated mathematical identity that must abort the
computation rather than be papered over (the ArithmeticError / RuntimeError
family).
"""

from __future__ import annotations


class ArityError(ValueError):
    """Operands have incompatible numbers of variables."""


class LogTermError(ArithmeticError):
    """Antidifferentiation hit an exponent -1 term (would need a logarithm)."""


class RemainderError(ArithmeticError):
    """A division that is guaranteed exact left a remainder."""


class NonExpandableError(ArithmeticError):
    """A Laurent expansion requires inverting a non-monomial coefficient."""


class ShapeError(ValueError):
    """A series argument does not have the required leading form."""


class OddPowerOfCError(ValueError):
    """The z-substitution would introduce odd powers of the curve parameter c."""


class StabilityError(ValueError):
    """Requested (g, n) lies outside the stable range 2g - 2 + n > 0."""


class InvariantViolation(RuntimeError):
    """A computed object failed one of its structural invariants."""


class MismatchError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class IncompleteError(RuntimeError):
    """A differential has support outside its guaranteed pole set."""

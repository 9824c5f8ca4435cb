"""Error taxonomy shared by all modules.

Three failure classes, mapped to CLI exit codes by cli.py:
argument errors (bad inputs, exit 2), capability errors (valid input the
implementation does not support, exit 3), numeric errors (solver failed to
converge, exit 4).
"""


class ArgumentError(ValueError):
    """Input violates a documented precondition."""


class CapabilityError(RuntimeError):
    """Input is legal but outside the supported capability envelope."""


class NumericError(ArithmeticError):
    """A numeric routine failed to reach its required tolerance."""

"""Exception hierarchy shared by all modules."""


class DefinettiError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(DefinettiError, ValueError):
    """Operand shapes do not match the declared subsystem structure."""


class DimensionLimitError(DefinettiError):
    """A matrix would exceed the configured entry cap."""


class EnumerationLimitError(DefinettiError):
    """A combinatorial enumeration would exceed its configured cap."""


class SymmetryError(DefinettiError, ValueError):
    """An operator expected to be Hermitian is not."""


class UnitarityError(DefinettiError, ValueError):
    """A matrix expected to be unitary is not."""


class PreconditionError(DefinettiError, ValueError):
    """An input state violates an operation's precondition."""


class SingularScalingError(DefinettiError, ZeroDivisionError):
    """A normalising trace vanishes."""


class ArgumentError(DefinettiError, ValueError):
    """An argument is outside its admissible range."""

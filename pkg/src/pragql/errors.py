"""Exception hierarchy shared by every pragql module."""


class PragqlError(Exception):
    """Base class for all errors raised by pragql."""


class DimensionError(PragqlError, ValueError):
    """Vectors or subspaces living in different ambient spaces were combined."""


class DomainError(PragqlError, ValueError):
    """A numeric input was NaN, infinite, zero where a unit vector is needed, etc."""


class FormulaSyntaxError(PragqlError, ValueError):
    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")


class ModelError(PragqlError, ValueError):
    """A property model file or registry violates its invariants."""


class UnknownPropertyError(ModelError, KeyError):
    def __str__(self):
        return self.args[0] if self.args else "unknown property"


class AssignmentError(PragqlError, ValueError):
    """A truth assignment is not consistent with the quantum state it is attached to."""


class ConsistencyError(PragqlError, AssertionError):
    """Two independent computations of the same quantity disagreed."""

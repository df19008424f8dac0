"""Shared exception types."""


class SymsageError(Exception):
    pass


class SchemaError(SymsageError, ValueError):
    """Malformed JSON input (signomial, group, program or certificate)."""


class NotClosedError(SymsageError, ValueError):
    """A set of exponent vectors is not closed under the group action."""


class OrbitBudgetError(SymsageError, ValueError):
    """An orbit would exceed the materialization budget."""


class GroupEnumerationError(SymsageError, ValueError):
    """A generated group exceeds the enumeration limit."""


class InvarianceError(SymsageError, ValueError):
    """A signomial is not invariant under the requested group."""


class CountOverflowError(SymsageError, OverflowError):
    """An exact count does not fit a float64 without precision loss."""


class CertificateError(SymsageError, ValueError):
    """A solver point cannot be turned into a valid certificate."""


class BuildError(SymsageError, ValueError):
    """A relative-entropy program cannot be assembled from the inputs."""

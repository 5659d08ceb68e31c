"""Exception types shared across the package."""


class AtomGraphError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(AtomGraphError):
    """A size cap (elements, cliques, states, closure) was exceeded."""


class MalformedTable(AtomGraphError):
    """An operation table is defined outside the compatibility relation or is inconsistent."""


class UnknownElement(AtomGraphError, KeyError):
    """An element or vertex name does not belong to the structure."""

    def __str__(self):
        return Exception.__str__(self)


class SearchBudgetExceeded(AtomGraphError):
    """A backtracking or branch-and-bound search ran out of nodes."""


class LepRequired(AtomGraphError):
    """The operation needs an algebra satisfying the exclusivity principle."""


class NotAtomSpanned(AtomGraphError):
    """Some nonzero element is not a join of atoms inside a single context."""


class SolverFailure(AtomGraphError):
    """A numerical LP/SDP solve did not converge.

    ``diagnostics`` carries whatever the solver knew when it gave up
    (iterations, residuals, status text).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class DimensionMismatch(AtomGraphError):
    """Matrices of incompatible size were combined."""


class NotRankOne(AtomGraphError):
    """A projector expected to have rank one does not."""

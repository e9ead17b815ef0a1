"""Exception hierarchy shared by all monoidscheme modules.

Every mathematically meaningful failure gets its own class so callers can
distinguish "the input is outside the decidable fragment" (bounded searches,
completion budgets) from "the input is malformed".  Internal consistency
errors signal bugs: they are raised when two independent computations of the
same invariant disagree.
"""


class MonoidSchemeError(Exception):
    """Base class for all errors raised by this package."""


class CompletionExceededBound(MonoidSchemeError):
    """Knuth-Bendix completion did not certify confluence within its budget.

    Equality answers for the presentation are unavailable; callers must not
    fall back silently.
    """

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class UnitsInconclusive(MonoidSchemeError):
    """The unit-group computation could not certify completeness."""

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class NonCommutingDiagram(MonoidSchemeError):
    """A poset-indexed diagram of abelian groups fails path independence."""


class NotOpen(MonoidSchemeError):
    """A subset passed as an open set is not down-closed in the base poset."""


class NotSeparatedPoset(MonoidSchemeError):
    """A pairwise intersection of chart down-sets has two maximal points,
    so the reduced covering complex is not defined."""


class InconsistentGluing(MonoidSchemeError):
    """Gluing data does not determine a scheme (ambiguous identifications,
    non-open overlap embeddings, or underivable overlap inverses)."""


class NotSeparated(MonoidSchemeError):
    """The scheme lacks the separatedness certificate required here."""


class NotConnected(MonoidSchemeError):
    """The operation requires a connected scheme."""


class NotSCancellative(MonoidSchemeError):
    """The s-divisor machinery is only defined over s-cancellative schemes."""


class RequiresCancellative(MonoidSchemeError):
    """The predicate is only meaningful for (bound-verified) cancellative
    monoids or schemes."""


class MembershipBoundExceeded(MonoidSchemeError):
    """A monoid-membership search hit its bound without a verdict."""

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class CocycleInvalid(MonoidSchemeError):
    """Transition data violates the cocycle or inverse conditions."""


class ConsistencyError(MonoidSchemeError):
    """Two independent computations of the same invariant disagree; a bug."""


class ModelDisagreement(ConsistencyError):
    """The order-chain and reduced covering cohomology models disagree."""


class ParseError(MonoidSchemeError):
    """Syntax error in the declarative input language, with position."""

    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class ManifestError(MonoidSchemeError):
    """A parsed manifest fails name resolution or well-formedness."""

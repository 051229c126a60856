"""Exception types shared across the package.

Each class carries a ``category`` string used by the CLI when reporting,
so callers can match on the category without importing the class.
"""


class KnotwindError(Exception):
    category = "Error"


class DiagramSyntaxError(KnotwindError):
    """A diagram file contains an unparseable line or token."""

    category = "SyntaxError"


class StructureError(KnotwindError):
    """A code violates the Gauss-code structure rules (passage counts, roles, signs)."""

    category = "StructureError"


class MarkError(KnotwindError):
    """An edge mark has the wrong length or refers to a missing edge."""

    category = "MarkError"


class UnknownCrossingError(KnotwindError):
    """The requested crossing id does not occur in the diagram."""

    category = "UnknownCrossing"


class NotApplicableError(KnotwindError):
    """A move's precondition fails at the requested site."""

    category = "NotApplicable"


class StuckError(KnotwindError):
    """No move is applicable under the current size cap.

    Reserved: insertion moves are always applicable, so walks cannot
    actually strand themselves.
    """

    category = "Stuck"


class MalformedTraceError(KnotwindError):
    """A trace file fails validation or does not replay bit-exactly."""

    category = "MalformedTrace"


class DimensionMismatchError(KnotwindError):
    """A vector or relation has the wrong length for its ambient group."""

    category = "DimensionMismatch"


class GroupMismatchError(KnotwindError):
    """Two elements of different groups were combined."""

    category = "GroupMismatch"


class BadModulusError(KnotwindError):
    """The modulus does not divide the diagram degree, so reduction is not move-stable."""

    category = "BadModulus"


class NotHomologicalError(KnotwindError):
    """The projection requires an assignment produced by the homology-valued parity."""

    category = "NotHomological"


class NonzeroFixedElementError(KnotwindError):
    """The sign-twisted construction requires a parity whose fixed element is zero."""

    category = "NonzeroFixedElement"


class UnknownParityKindError(KnotwindError):
    """The parity kind name is not recognised."""

    category = "UnknownParityKind"


class IncompatibleGroupsError(KnotwindError):
    """A parity's coefficient group varies along a trace; the trace is inconsistent."""

    category = "IncompatibleGroups"

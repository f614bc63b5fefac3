"""Error hierarchy shared by the library, the service and the CLI.

Every error carries a short machine-readable ``code``.  The CLI maps codes
to exit statuses: invalid input -> 2, exhausted search budget -> 3,
internal consistency failure -> 4, archived red-link violation -> 5.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class; ``code`` is a stable kebab-case identifier."""

    code = "error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class InvalidInput(WorkbenchError):
    code = "invalid-input"


class FormatError(InvalidInput):
    """Malformed instance text.  Codes: malformed-json, bad-uniformity,
    bad-arity, bad-vertex, duplicate-edge, missing-color."""


class CapExceeded(InvalidInput):
    """A static size cap (edge cap, LP cap, enumeration cap) was exceeded."""

    code = "cap-exceeded"


class BudgetExhausted(WorkbenchError):
    """A search ran out of its node budget before resolving."""

    code = "budget-exhausted"


class InternalConsistencyError(WorkbenchError):
    """A should-be-unreachable condition fired (e.g. a component projection
    that is not a bijection).  Always a defect, never user error."""

    code = "internal-consistency"


class RedLinkViolation(WorkbenchError):
    """A closed walk between distinct components of one colour carried no
    same-component link of the other colour.  Expected to be impossible for
    large dense instances; at desk scale it is archived, not fatal."""

    code = "red-link-violation"

    def __init__(self, message: str, archive: dict):
        super().__init__(message)
        self.archive = archive

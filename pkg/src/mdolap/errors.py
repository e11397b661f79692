"""Exception hierarchy shared by the engine modules.

Every error carries a stable machine-readable ``code`` so the CLI and the
HTTP service can map failures without string matching.
"""

from __future__ import annotations


class MdolapError(Exception):
    """Base class for all engine errors."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UnknownDimension(MdolapError):
    code = "unknown-dimension"


class UnknownHierarchy(MdolapError):
    code = "unknown-hierarchy"


class UnknownFact(MdolapError):
    code = "unknown-fact"


class UnknownAttribute(MdolapError):
    code = "unknown-attribute"


class UnknownInstance(MdolapError):
    code = "unknown-instance"


class UnknownParam(MdolapError):
    code = "unknown-param"


class NotMember(MdolapError):
    code = "not-member"


class DimensionNotLinked(MdolapError):
    code = "dimension-not-linked"


class NotCurrentDimension(MdolapError):
    code = "not-current-dimension"


class NotCurrentHierarchy(MdolapError):
    code = "not-current-hierarchy"


class NotAParameter(MdolapError):
    code = "not-a-parameter"


class NotFiner(MdolapError):
    code = "not-finer"


class AlreadyDisplayed(MdolapError):
    code = "already-displayed"


class EmptyGroup(MdolapError):
    code = "empty-group"


class InconsistentStore(MdolapError):
    code = "inconsistent-store"


class LoadError(MdolapError):
    code = "load-error"


class MissingIdColumn(LoadError):
    code = "missing-id-column"


class MissingLinkColumn(LoadError):
    code = "missing-link-column"


class MissingMeasureColumn(LoadError):
    code = "missing-measure-column"


class UnknownColumn(LoadError):
    code = "unknown-column"


class SnapshotError(MdolapError):
    code = "snapshot-error"

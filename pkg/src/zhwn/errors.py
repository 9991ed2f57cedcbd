"""Exception hierarchy for the toolkit.

Everything raised on purpose derives from ZhwnError so CLI code can map
"our" failures to exit code 2 and let genuine bugs propagate.
"""


class ZhwnError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ZhwnError):
    """A flat file violated its grammar."""

    def __init__(self, message, *, line=None, offset=None):
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = f" (line {line}"
            if offset is not None:
                where += f", byte offset {offset}"
            where += ")"
        super().__init__(f"{message}{where}")


class LinkError(ZhwnError):
    """Relation targets that do not resolve in the database."""

    def __init__(self, unresolved):
        self.unresolved = list(unresolved)
        shown = ", ".join(str(u) for u in self.unresolved[:10])
        more = "" if len(self.unresolved) <= 10 else f" (+{len(self.unresolved) - 10} more)"
        super().__init__(f"unresolved relation targets: {shown}{more}")


class ConfigurationError(ZhwnError):
    """Missing or unusable input files / settings."""


class ConsistencyError(ZhwnError):
    """Index and data files disagree, or invariants are violated."""

    def __init__(self, message, offenders=()):
        self.offenders = list(offenders)
        if self.offenders:
            shown = "; ".join(str(o) for o in self.offenders[:10])
            more = "" if len(self.offenders) <= 10 else f" (+{len(self.offenders) - 10} more)"
            message = f"{message}: {shown}{more}"
        super().__init__(message)


class NotFoundError(ZhwnError):
    """A synset id or lookup key is absent."""


class UnsupportedPosError(ZhwnError):
    """Operation requires a hypernym taxonomy (nouns or verbs)."""


class DegenerateInputError(ZhwnError):
    """Too little data to perform the operation (e.g. <3 points for PCA)."""


class EditApplyError(ZhwnError):
    """An edit in the log cannot be applied; the whole log is rejected."""

    def __init__(self, message, edit_id=None):
        self.edit_id = edit_id
        if edit_id is not None:
            message = f"edit {edit_id}: {message}"
        super().__init__(message)


class ChainError(ZhwnError):
    """The edit log's hash chain does not verify."""


class ConflictError(ZhwnError):
    """A second decision was attempted on a closed review item."""


class ConstantInputError(ZhwnError):
    """Spearman correlation is undefined for a constant-rank input."""

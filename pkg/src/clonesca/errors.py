"""Exception types shared across the pipeline."""


class CloneScaError(Exception):
    """Base class for all tool-specific errors."""


class ParseError(CloneScaError):
    """Java source could not be parsed. Files raising this are skipped."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self) -> str:
        base = super().__str__()
        if self.line:
            return f"{base} (line {self.line}, col {self.col})"
        return base


class EncodingError(CloneScaError):
    """File content is not valid UTF-8."""


class EmptyClassAst(CloneScaError):
    """Every function of the class is trivial; the class yields no feature."""


class InliningCapExceeded(CloneScaError):
    """A linked function tree hit the node budget; remaining internal calls
    were degraded to external placeholders."""


class DegenerateClassPair(CloneScaError):
    """Conjugate percentage is undefined for two classes with no functions."""


class NoCallees(CloneScaError):
    """Associated clone percentage is undefined for a caller without callees."""


class MissingSource(CloneScaError):
    """A corpus version has no source directory, archive, or .java entries."""


class EmptyIndex(CloneScaError):
    """No feature survived refinement; the index is valid but empty."""


class IoError(CloneScaError):
    """Index or report file could not be read or written."""


class FormatVersionMismatch(CloneScaError):
    """Index file carries an unknown format tag or is truncated."""


class ManifestError(CloneScaError):
    """Corpus manifest is malformed or inconsistent."""

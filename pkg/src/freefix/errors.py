"""Exception hierarchy shared by all modules."""


class FreeFixError(Exception):
    """Base class for every error raised by this package."""


class AlphabetMismatchError(FreeFixError, ValueError):
    """Objects over different alphabets were combined, or a symbol is unknown."""


class WordParseError(FreeFixError, ValueError):
    """Malformed word, subgroup or morphism text."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UndefinedRootError(FreeFixError, ValueError):
    """The identity has no root."""


class NotASubgroupError(FreeFixError, ValueError):
    """A containment precondition failed; ``word`` is the offending element."""

    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word


class BudgetExceededError(FreeFixError, RuntimeError):
    """A configured search cap was hit; the requested answer is unavailable."""


class InconclusiveError(BudgetExceededError):
    """A decision procedure exhausted its budget without an answer."""


class CertificateError(FreeFixError, ValueError):
    """A certificate failed re-validation."""

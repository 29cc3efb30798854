"""Exception and warning types shared across the package."""


class AutomatonError(ValueError):
    """An automaton (or tree) violates a structural invariant."""


class IncompleteAutomatonError(AutomatonError):
    """A transition needed for evaluation is missing and no trap is enabled."""


class ResourceLimitError(RuntimeError):
    """A bounded search or construction exceeded its configured cap."""


class ParseError(ValueError):
    """Syntax or semantic error in a textual tree / automaton description."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        if line is None:
            super().__init__(message)
        elif col is None:
            super().__init__(f"line {line}: {message}")
        else:
            super().__init__(f"line {line}, col {col}: {message}")


class EmptyAutomatonWarning(UserWarning):
    """Reduction left no reachable state."""

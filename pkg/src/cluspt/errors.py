"""Exception types shared across the package."""


class CluSPTError(Exception):
    """Base class for all library errors."""


class ParseError(CluSPTError):
    """Malformed instance file; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(CluSPTError):
    """Instance data violates a structural invariant."""


class InvalidParameters(CluSPTError):
    """Generator or config parameters out of range."""


class DisconnectedSubgraph(CluSPTError):
    """A vertex set is not connected in the induced subgraph."""


class DisconnectedClusterGraph(CluSPTError):
    """The cluster multigraph is not connected."""


class NotATree(CluSPTError):
    """An edge list expected to form a tree does not."""


class InfeasibleRoots(CluSPTError):
    """No arborescence exists for the chosen root combination."""


class TooLarge(CluSPTError):
    """Exhaustive enumeration would exceed its budget."""


class InvalidBaseline(CluSPTError):
    """A ratio metric was given a non-positive baseline."""


class DegenerateInput(CluSPTError):
    """A statistical test is undefined for the given data."""

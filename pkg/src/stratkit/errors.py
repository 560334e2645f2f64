"""Exception hierarchy shared by every module."""


class StratkitError(Exception):
    """Base class for all library errors."""


class EmptyInput(StratkitError):
    pass


class DuplicateVertexInFace(StratkitError):
    pass


class ApexCollision(StratkitError):
    pass


class VertexCollision(StratkitError):
    pass


class NotASimplex(StratkitError):
    pass


class NotNested(StratkitError):
    pass


class SkeletonNotSubcomplex(StratkitError):
    pass


class SingularEqualsTotal(StratkitError):
    pass


class DifferentComplex(StratkitError):
    pass


class EmptyIntersectionWithRegularPart(StratkitError):
    pass


class AlreadyAPointStratum(StratkitError):
    pass


class RegularSimplex(StratkitError):
    pass


class IndeterminateInfinity(StratkitError, ArithmeticError):
    pass


class StratumMismatch(StratkitError):
    pass


class NotACoarsening(StratkitError):
    pass


class SkeletonNotClosed(StratkitError):
    pass


class ChainFailure(StratkitError):
    pass


class RingUnsupported(StratkitError):
    pass


class PerversityTooLarge(StratkitError):
    pass


class DisconnectedSpine(StratkitError):
    pass


class NotACover(StratkitError):
    pass


class InconsistentDeclaration(StratkitError):
    pass


class MissingBaseFact(StratkitError):
    pass


class ParseError(StratkitError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UsageError(StratkitError):
    pass

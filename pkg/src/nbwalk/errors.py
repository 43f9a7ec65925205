"""Exception hierarchy. Input problems derive from ValueError."""

from __future__ import annotations


class NBWalkError(Exception):
    """Base class for all package errors."""


class GraphInputError(NBWalkError, ValueError):
    def __init__(self, message: str, line: int | None = None, vertex: str | None = None):
        self.line = line
        self.vertex = vertex
        where = []
        if line is not None:
            where.append(f"line {line}")
        if vertex is not None:
            where.append(f"vertex {vertex!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class SelfLoopError(GraphInputError):
    pass


class DuplicateEdgeError(GraphInputError):
    pass


class MalformedLineError(GraphInputError):
    pass


class TooFewVerticesError(GraphInputError):
    pass


class MinDegreeViolation(GraphInputError):
    pass


class InfeasibleProfile(NBWalkError, ValueError):
    pass


class GenerationExhausted(NBWalkError, RuntimeError):
    pass


class NotSymmetric(NBWalkError, ValueError):
    pass


class NoConvergence(NBWalkError, ArithmeticError):
    pass


class RankDeficient(NBWalkError, ArithmeticError):
    pass


class NonPositiveWeight(NBWalkError, ValueError):
    pass


class SingularChangeOfBasis(NBWalkError, ArithmeticError):
    pass


class NotRegular(NBWalkError, ValueError):
    pass


class NotBiregular(NBWalkError, ValueError):
    pass


class MissingPerron(NBWalkError, ValueError):
    pass


class DegreeTooSmall(NBWalkError, ValueError):
    pass


class DimensionOverflow(NBWalkError, ValueError):
    pass


class SingularMatrix(NBWalkError, ArithmeticError):
    pass

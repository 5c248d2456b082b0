"""Exception hierarchy.

Input problems derive from :class:`ValidationError` (CLI exit code 2); failures
of a search or numerical procedure on valid input derive from
:class:`ComputationError` (exit code 3).
"""


class PolyrigidError(Exception):
    pass


class ValidationError(PolyrigidError, ValueError):
    pass


class ComputationError(PolyrigidError, RuntimeError):
    pass


class ParseError(ValidationError):
    pass


# polytope geometry
class NotSymmetric(ValidationError):
    pass


class NotFullDimensional(ValidationError):
    pass


class NonExtremePoint(ValidationError):
    pass


class DimensionUnsupported(ValidationError):
    pass


class DegenerateFacet(ComputationError):
    pass


class ZeroVector(ValidationError):
    pass


# frameworks
class CoincidentEndpoints(ValidationError):
    pass


class PerturbationFailed(ComputationError):
    pass


class EmptySubgraph(ValidationError):
    pass


class BadColourSet(ValidationError):
    pass


# constructions
class NotWellPositioned(ValidationError):
    pass


class MovePreconditionError(ValidationError):
    pass


class EmptyConeIntersection(ComputationError):
    pass


class EmptyIntersection(ComputationError):
    pass


class RadiusSearchFailed(ComputationError):
    pass


class SearchFailed(ComputationError):
    pass


class NotTight(ValidationError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class SearchExhausted(ComputationError):
    def __init__(self, message, stuck_graph=None):
        super().__init__(message)
        self.stuck_graph = stuck_graph


# norm gallery
class OddN(ValidationError):
    pass


class DegenerateB(ValidationError):
    pass


class NotSubmodular(ValidationError):
    pass


class NotMonotone(ValidationError):
    pass

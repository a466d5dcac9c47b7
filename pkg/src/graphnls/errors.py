"""Exception types raised by graphnls."""


class GraphNLSError(ValueError):
    """Base class for all input-validation errors in the package."""


class DisconnectedGraph(GraphNLSError):
    pass


class NonpositiveLength(GraphNLSError):
    pass


class DanglingVertexReference(GraphNLSError):
    pass


class InvalidEdge(GraphNLSError):
    pass


class InvalidResolution(GraphNLSError):
    pass


class NegativePotentialValue(GraphNLSError):
    pass


class PotentialOnInfiniteEdge(GraphNLSError):
    pass


class CurvatureOnInfiniteEdge(GraphNLSError):
    pass


class MeshMismatch(GraphNLSError):
    pass


class InvalidP(GraphNLSError):
    pass


class EmptyCore(GraphNLSError):
    pass


class NotUnitMass(GraphNLSError):
    pass


class ZeroMass(GraphNLSError):
    pass


class ZeroPotential(GraphNLSError):
    pass


class CoreTooShort(GraphNLSError):
    pass

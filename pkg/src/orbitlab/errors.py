"""Exception types raised across the toolkit."""


class OrbitlabError(ValueError):
    pass


class KernelDimensionError(OrbitlabError):
    """The homogenized weight system does not have a one-dimensional kernel."""


class SpanError(OrbitlabError):
    """Weights fail to affinely span their ambient space."""


class NotInteriorError(OrbitlabError):
    pass


class OutsidePolytopeError(OrbitlabError):
    pass


class OffQuadricError(OrbitlabError):
    pass


class IndeterminacyError(OrbitlabError):
    """A rational map was evaluated on its indeterminacy locus."""


class OverlapError(OrbitlabError):
    """Flagged boundary cells are not pairwise disjoint."""

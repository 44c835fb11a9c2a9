"""Torus orbit spaces of oriented real Grassmannians and complexity-one actions.

Exact rational polytopes, moment-image stratifications, the quadric model of
oriented 2-planes, GIT-style quotient descriptors and symbolic orbit-space
verdicts, together with a Monte Carlo verifier.
"""

from .errors import (
    IndeterminacyError,
    KernelDimensionError,
    NotInteriorError,
    OffQuadricError,
    OrbitlabError,
    OutsidePolytopeError,
    OverlapError,
    SpanError,
)
from .moment import LinearTorusAction, Stratification, moment_map, stratify
from .orbitspace import (
    Disc,
    Join,
    KHoledSphere,
    Product,
    Sphere,
    assemble_orbit_space,
    classify_action,
    classify_projective_cplx1,
    grassmannian_orbit_space,
    holes_from_degree_function,
    homeomorphism_class,
    normalize,
)
from .polytope import (
    RationalPolytope,
    Subdivision,
    common_refinement,
    convex_hull,
    cross_polytope,
    stellar_subdivision,
)
from .projective import ProjectivePoint
from .quadric import QuadricModel, OrientedPlane, embed_plane, sample_oriented_plane
from .quotient import model_stratification, q_map, t_orbit_equivalence
from .verify import VerificationReport, run_verification

__version__ = "0.1.0"

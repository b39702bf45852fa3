"""Reaction networks, their projections, and vertexical checks on hypercubes."""

__version__ = "0.1.0"

from .intervals import PositiveInterval, interval_hull, interval_mul, interval_pow
from .network import (
    Reaction,
    ReactionNetwork,
    flux,
    invariant_polyhedron_contains,
    stoichiometric_basis,
)
from .system import Allotment, SubconfinedSystem, Tempering
from .lp import LinearConstraintSystem, box_fit, feasible
from .structure import (
    classify,
    is_endotactic,
    is_strongly_endotactic,
    is_w_endotactic,
    is_weakly_reversible,
    linkage_classes,
    w_support,
)
from .reduction import Projection, is_projectable, project_system, reduce_network
from .dynamics import fiber_contains, lyapunov_value, sample_rate_path, simulate
from .cube import (
    Face,
    RepulsingIndexSet,
    block_contains,
    boundary_distances,
    classify_face,
    push_tangent,
    to_cube,
    to_orthant,
)
from .diagnostics import (
    Ensemble,
    block_segments,
    permanence_probe,
    persistence_probe,
    repulsion_probe,
    verify_factorization,
)
from .fileformat import format_crn, parse_crn

"""Singular marked graph diagrams of immersed surface-links.

The package computes everything the diagrammatic calculus makes computable:
positive/negative resolutions and admissibility, the unoriented and oriented
local move catalogs with site search and bounded equivalence search,
complement-group presentations, quandle coloring counts, the marker/singular
semi-invariant transforms, and handle diagrams of exteriors.
"""

from .catalog import catalog_map, move_catalog
from .diagram import (
    CROSSING,
    MARKER,
    SINGULAR,
    Diagram,
    Node,
    OrientedDiagram,
    SMGError,
    SMGSemanticError,
    SMGSyntaxError,
    enumerate_orientations,
    parse_smg,
    serialize,
)
from .fixtures import fixture, fixture_names
from .groups import (
    Presentation,
    abelianization,
    hom_count,
    tietze_simplify,
    wirtinger_presentation,
)
from .moves import (
    FORWARD,
    REVERSE,
    MoveSequence,
    MoveSpec,
    SearchBudget,
    Site,
    apply_move,
    find_sites,
    search_equivalence,
    verify_sequence,
)
from .quandles import (
    FOUR_QUANDLE,
    QuandleTable,
    check_quandle,
    coloring_count,
    colorings,
    dihedral_quandle,
    small_quandles,
)
from .resolution import (
    NEGATIVE,
    POSITIVE,
    Budget,
    is_admissible,
    is_trivial_unlink,
    linking_matrix,
    reidemeister_simplify,
    resolve,
)
from .transforms import (
    KirbyDiagram,
    Profile,
    export_exterior,
    kirby_group,
    profile,
    semi_transform,
)

__all__ = [
    "CROSSING", "MARKER", "SINGULAR", "FORWARD", "REVERSE",
    "NEGATIVE", "POSITIVE",
    "Diagram", "Node", "OrientedDiagram", "MoveSpec", "MoveSequence", "Site",
    "Presentation", "QuandleTable", "KirbyDiagram", "Profile",
    "SMGError", "SMGSemanticError", "SMGSyntaxError",
    "Budget", "SearchBudget", "FOUR_QUANDLE",
    "parse_smg", "serialize", "enumerate_orientations",
    "fixture", "fixture_names",
    "move_catalog", "catalog_map", "find_sites", "apply_move",
    "verify_sequence", "search_equivalence",
    "resolve", "is_admissible", "is_trivial_unlink", "reidemeister_simplify",
    "linking_matrix",
    "wirtinger_presentation", "tietze_simplify", "abelianization", "hom_count",
    "check_quandle", "colorings", "coloring_count", "dihedral_quandle",
    "small_quandles",
    "semi_transform", "profile", "export_exterior", "kirby_group",
]

__version__ = "0.1.0"

"""Monodromy invariants of plane-curve singularities from resolution dual graphs."""

__version__ = "0.1.0"

from planemono.covers import StratumCover, bm_ranks, proper_transform_stratum, stratum_cover
from planemono.graph import (
    Arrow,
    Decoration,
    DualGraph,
    Vertex,
    check_ample,
    decorate,
    separate,
    solve_discrepancies,
    solve_multiplicities,
    suggest_ample,
    validate_graph,
)
from planemono.invariants import (
    InvariantReport,
    invariant_report,
    lefschetz_numbers,
    milnor_number,
    multiplicity,
    tangent_cone_column,
    zeta_function,
)
from planemono.page import (
    SpectralPage,
    action_order,
    assemble_page,
    cz_index,
    degeneration_feasibility,
    forbidden_arrows,
)

__all__ = [
    "Arrow", "Decoration", "DualGraph", "Vertex", "StratumCover", "SpectralPage",
    "InvariantReport", "validate_graph", "solve_multiplicities", "solve_discrepancies",
    "decorate", "check_ample", "suggest_ample", "separate", "stratum_cover", "bm_ranks",
    "proper_transform_stratum", "assemble_page", "cz_index", "action_order",
    "forbidden_arrows", "degeneration_feasibility", "lefschetz_numbers", "zeta_function",
    "milnor_number", "multiplicity", "tangent_cone_column", "invariant_report",
]

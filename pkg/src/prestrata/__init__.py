"""Exact combinatorial presentation of the strata ring of genus-0
prestable curves: normal-form basis enumeration, four-point relations,
psi-monomial normalization, and Chow-group dimensions over the rationals."""

from .engine import (
    ChowQuery,
    ChowResult,
    HilbertTable,
    RankTable,
    chow_rank,
    expand_rational,
    hilbert_coeffs,
    parse_rational_function,
    rank_table,
    relation_matrix,
)
from .graphs import (
    PrestableGraph,
    build_graph,
    canonicalize_graph,
    contract_edge,
    enumerate_graphs,
    item_order,
)
from .linalg import SparseRatMatrix, in_row_span, rank, rank_modular
from .rationals import QQ, qq_str
from .relations import (
    LocalRelation,
    RelationVector,
    glue_relation_at_vertex,
    make_local_relation,
    normalize,
    psi_rewrite_step,
    split_vertex,
    wdvv_local,
    wdvv_relations,
)
from .strata import (
    ALL_LOCUS,
    DecorationState,
    InvariantViolation,
    LocusPredicate,
    MonomialStratum,
    NormalFormStratum,
    StrataVector,
    canonicalize_decorated,
    degree,
    enumerate_basis,
    is_zero_by_symmetry,
    parse_locus,
    verify_locus,
)

__all__ = [
    "ALL_LOCUS",
    "ChowQuery",
    "ChowResult",
    "DecorationState",
    "HilbertTable",
    "InvariantViolation",
    "LocalRelation",
    "LocusPredicate",
    "MonomialStratum",
    "NormalFormStratum",
    "PrestableGraph",
    "QQ",
    "RankTable",
    "RelationVector",
    "SparseRatMatrix",
    "StrataVector",
    "build_graph",
    "canonicalize_decorated",
    "canonicalize_graph",
    "chow_rank",
    "contract_edge",
    "degree",
    "enumerate_basis",
    "enumerate_graphs",
    "expand_rational",
    "glue_relation_at_vertex",
    "hilbert_coeffs",
    "in_row_span",
    "is_zero_by_symmetry",
    "item_order",
    "make_local_relation",
    "normalize",
    "parse_locus",
    "parse_rational_function",
    "psi_rewrite_step",
    "qq_str",
    "rank",
    "rank_modular",
    "rank_table",
    "relation_matrix",
    "split_vertex",
    "verify_locus",
    "wdvv_local",
    "wdvv_relations",
]

__version__ = "0.1.0"

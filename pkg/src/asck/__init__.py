"""Toolkit for coherent configurations of finite point sets.

Validate color matrices, enumerate closed subsets and the equivalences
they induce, build schemes (thin schemes of group tables, wreath
products, quotients, restrictions, coherent closures of digraphs), and
run two-sided checks that relate prime-power relation sizes to cyclic
partitions of the basis digraphs.
"""

from .checks import (
    PSchemeVerdict,
    TheoremReport,
    check_bipartite_criterion,
    check_block_criterion,
    check_fiber_reduction,
    check_partite_criterion,
    check_primitive_structure,
    check_quotient_factorization,
    is_p_scheme,
    is_prime,
    verify_size_factorization,
)
from .constructions import (
    CayleyTable,
    cayley_table,
    cyclic_table,
    digraph_color_matrix,
    dihedral_table,
    direct_product,
    is_block,
    quotient,
    rank_two_scheme,
    restriction,
    thin_scheme,
    wl_closure,
    wreath,
)
from .core import Scheme, as_color_matrix, canonical_recolor, scheme_from_colors, validate
from .corpus import (
    CorpusMember,
    CorpusSpec,
    generate_corpus,
    member_reports,
    run_corpus_checks,
)
from .digraph import (
    CyclicPartition,
    Digraph,
    basis_digraph,
    basis_graph,
    cyclically_p_partite,
    is_bipartite,
    is_strongly_connected,
    period,
    strongly_connected_components,
    weakly_connected_components,
)
from .errors import SchemeError
from .io import ParseError, ccm_text, dg_text, read_ccm, read_dg, write_ccm, write_dg
from .lattice import (
    ClosedSet,
    Equivalence,
    ThinRadical,
    all_equivalences,
    element_order,
    equivalence_from_colors,
    equivalence_from_partition,
    generated_closed_set,
    generated_equivalence,
    is_primitive,
    is_regular,
    maximal_below_full,
    maximal_equivalences,
    minimal_equivalences,
    thin_radical,
)

__version__ = "0.1.0"

__all__ = [
    "CayleyTable",
    "ClosedSet",
    "CorpusMember",
    "CorpusSpec",
    "CyclicPartition",
    "Digraph",
    "Equivalence",
    "ParseError",
    "PSchemeVerdict",
    "Scheme",
    "SchemeError",
    "TheoremReport",
    "ThinRadical",
    "all_equivalences",
    "as_color_matrix",
    "basis_digraph",
    "basis_graph",
    "canonical_recolor",
    "cayley_table",
    "ccm_text",
    "check_bipartite_criterion",
    "check_block_criterion",
    "check_fiber_reduction",
    "check_partite_criterion",
    "check_primitive_structure",
    "check_quotient_factorization",
    "cyclic_table",
    "cyclically_p_partite",
    "dg_text",
    "digraph_color_matrix",
    "dihedral_table",
    "direct_product",
    "element_order",
    "equivalence_from_colors",
    "equivalence_from_partition",
    "generate_corpus",
    "generated_closed_set",
    "generated_equivalence",
    "is_bipartite",
    "is_block",
    "is_p_scheme",
    "is_prime",
    "is_primitive",
    "is_regular",
    "is_strongly_connected",
    "maximal_below_full",
    "maximal_equivalences",
    "member_reports",
    "minimal_equivalences",
    "period",
    "quotient",
    "rank_two_scheme",
    "read_ccm",
    "read_dg",
    "restriction",
    "run_corpus_checks",
    "scheme_from_colors",
    "strongly_connected_components",
    "thin_radical",
    "thin_scheme",
    "validate",
    "verify_size_factorization",
    "weakly_connected_components",
    "wl_closure",
    "wreath",
    "write_ccm",
    "write_dg",
]

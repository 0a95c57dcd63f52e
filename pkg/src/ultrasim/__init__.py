"""ultrasim: exact deciders for similarity of finite value tables to ultrametrics.

A finite symmetric table of opaque value labels either can be turned into a
(pseudo)ultrametric by relabeling its values with nonnegative rationals, or
it cannot, and then a small combinatorial obstruction exists.  This package
decides the question constructively: it produces an explicit rational
realization or a minimal refutation certificate, handles poset-valued
generalizations (pseudoultrametrics, ultrametrics and ultrametric distances
over an arbitrary finite order with a bottom), and decides combinatorial and
weak similarity between two tables.

Convention for checkers: operations that validate a property return ``True``
on success and a certificate/witness object on failure; test results with
``is True`` or ``isinstance``, never with bare truthiness.
"""

from .errors import InputError
from .relations import (
    Partition,
    PairPartition,
    Relation,
    RelationReport,
    classify,
    compose,
    equivalence_from_partition,
    partition_from_equivalence,
    refines,
    tensor_partition,
    transitive_closure,
)
from .mappings import (
    Asymmetry,
    Certificate,
    FiberNotDiagonal,
    FiberNotEquivalence,
    FiniteMapping,
    NonCoherentQuadruple,
    NonConstantDiagonal,
    ScaleneTriple,
    UCycle,
    ValueRelation,
    canonical_label,
    diagonal_value,
    fiber,
    fiber_partition,
    is_coherent_composition,
    is_coherent_direct,
    is_coherent_refinement,
    is_symmetric,
    scalene_triple,
    scalene_triples,
    u_relation,
    validate,
)
from .orders import (
    FinitePoset,
    ValueMap,
    embed_ranks,
    is_isotone,
    is_order_isomorphism,
    linear_extension,
    minimal_order,
    order_extensions_oracle,
    poset_from_doc,
    poset_to_doc,
    smallest_element,
)
from .decision import (
    AnalysisReport,
    QViolation,
    Realization,
    analyze,
    canonical_chain_ultrametric,
    check_ultrametric_preserving,
    closed_balls,
    compose_isotone,
    is_q_pseudoultrametric,
    is_q_ultrametric,
    is_ultrametric_distance,
    mapping_from_realization,
    realization_from_matrix,
    realize_pseudoultrametric,
    realize_ultrametric,
    strong_triangle_violations,
    two_point_mapping,
    u_via_balls,
    validate_realization,
)
from .similarity import (
    BudgetExceeded,
    CoincidenceReport,
    SimilarityWitness,
    combinatorially_similar,
    similarity_coincidence_check,
    verify_witness,
    weakly_similar,
)

__version__ = "0.1.0"

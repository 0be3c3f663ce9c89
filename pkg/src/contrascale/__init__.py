"""Contranominal-scale enumeration and influence-guided attribute selection.

The package works on formal contexts (binary object/attribute tables).  It
enumerates every contranominal subcontext, scores attributes by how many
maximal such subcontexts they sit in, and selects low-influence attribute
subsets whose concept lattice is a small sub-meet-semilattice of the
original and whose implications stay valid.
"""

__version__ = "0.1.0"

from .context import (
    ClarificationMap,
    FormalContext,
    NotClarifiedError,
    ReductionTrace,
    SubcontextSelection,
    apply_selection,
    clarify,
    complement,
    derive_attributes,
    derive_objects,
    make_contranominal,
    pq_core,
    reduce_context,
)
from .formats import ContextParseError, load_context, save_context
from .scales import (
    BipartiteGraph,
    ConflictGraph,
    ContranominalScale,
    ScaleCount,
    conflict_graph,
    count_scales,
    enumerate_bronkerbosch,
    enumerate_scales,
    induced_matchings,
    max_dimension,
    scales_from_clarified,
    scales_from_reduced,
    to_bipartite,
)
from .lattice import (
    ConceptSet,
    FormalConcept,
    Implication,
    ImplicationBase,
    attribute_concept,
    canonical_base,
    enumerate_concepts,
    generated_sub_meet_semilattice,
    is_boolean_suborder,
    is_valid_implication,
    meet,
    restrict_base_on_removal,
)
from .adjust import (
    AdjustedSelection,
    AttributeInfluence,
    CubicSet,
    InfluenceReport,
    NotPreprocessedError,
    cubic_sets,
    delta_adjust,
    influence,
    influence_table,
    select_attributes,
)
from .bench import (
    ExperimentConfig,
    ExperimentResult,
    benchmark_enumeration,
    decision_tree_accuracy,
    run_knowledge_experiment,
    run_structure_experiment,
    sample_attributes,
)
from .datasets import medical_diagnosis

__all__ = [
    "__version__",
    "FormalContext",
    "SubcontextSelection",
    "ClarificationMap",
    "ReductionTrace",
    "NotClarifiedError",
    "ContextParseError",
    "derive_attributes",
    "derive_objects",
    "complement",
    "clarify",
    "reduce_context",
    "pq_core",
    "apply_selection",
    "make_contranominal",
    "load_context",
    "save_context",
    "ContranominalScale",
    "ScaleCount",
    "ConflictGraph",
    "BipartiteGraph",
    "enumerate_scales",
    "count_scales",
    "max_dimension",
    "conflict_graph",
    "enumerate_bronkerbosch",
    "scales_from_clarified",
    "scales_from_reduced",
    "to_bipartite",
    "induced_matchings",
    "FormalConcept",
    "ConceptSet",
    "Implication",
    "ImplicationBase",
    "enumerate_concepts",
    "meet",
    "attribute_concept",
    "generated_sub_meet_semilattice",
    "is_boolean_suborder",
    "is_valid_implication",
    "canonical_base",
    "restrict_base_on_removal",
    "CubicSet",
    "AttributeInfluence",
    "InfluenceReport",
    "AdjustedSelection",
    "NotPreprocessedError",
    "cubic_sets",
    "influence",
    "select_attributes",
    "delta_adjust",
    "influence_table",
    "ExperimentConfig",
    "ExperimentResult",
    "sample_attributes",
    "decision_tree_accuracy",
    "run_knowledge_experiment",
    "run_structure_experiment",
    "benchmark_enumeration",
    "medical_diagnosis",
]

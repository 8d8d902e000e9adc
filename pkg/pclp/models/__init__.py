"""
Probability models over proof trees.
"""

from .distribution import TreeDistribution, reweight_distribution
from .loglinear import (
    LogLinearModel,
    conditional,
    exact_dist,
    extend_model,
    extension_by_reweighting,
    log_likelihood,
    space_log_likelihood,
    space_log_weights,
    unnormalized_log_weight,
    unnormalized_weight,
)
from .model_io import read_model, write_model
from .properties import (
    ROOT,
    AnswerBinding,
    PatternNode,
    Property,
    RootProperty,
    SubtreePattern,
    parse_property,
    property_order,
    single_node,
)
from .scf import (
    ChoiceParams,
    CountVector,
    DerivationSampler,
    ErfReport,
    clause_counts,
    corpus_likelihood,
    erf_iterate,
    erf_reestimate,
    erf_table,
    expected_frequency_params,
    normalized_tree_dist,
    read_choice_params,
    sample_derivation,
    scf_log_prob,
    scf_prob,
    write_choice_params,
)
from .space import TreeSpace, distinct_queries

__all__ = [
    "TreeDistribution",
    "reweight_distribution",
    "LogLinearModel",
    "conditional",
    "exact_dist",
    "extend_model",
    "extension_by_reweighting",
    "log_likelihood",
    "space_log_likelihood",
    "space_log_weights",
    "unnormalized_log_weight",
    "unnormalized_weight",
    "read_model",
    "write_model",
    "ROOT",
    "AnswerBinding",
    "PatternNode",
    "Property",
    "RootProperty",
    "SubtreePattern",
    "parse_property",
    "property_order",
    "single_node",
    "ChoiceParams",
    "CountVector",
    "DerivationSampler",
    "ErfReport",
    "clause_counts",
    "corpus_likelihood",
    "erf_iterate",
    "erf_reestimate",
    "erf_table",
    "expected_frequency_params",
    "normalized_tree_dist",
    "read_choice_params",
    "sample_derivation",
    "scf_log_prob",
    "scf_prob",
    "write_choice_params",
    "TreeSpace",
    "distinct_queries",
]

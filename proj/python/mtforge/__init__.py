"""Multi-turn NL2GQL dataset forge: graph-grounded dialogue generation,
validation, filtering, evaluation, and a dependency-aware inference
baseline."""

from ._core import (  # noqa: F401
    GraphSchema,
    MtforgeError,
    PropertyGraph,
    analyze_dataset,
    classify_query_type,
    cosine_similarity,
    count_keywords,
    dataset_stats,
    evaluate,
    execute,
    fallback_embed,
    filter_dataset,
    generate_dataset,
    infer_dataset,
    load_graph,
    load_schema,
    mask_entities,
    parse_canonical,
    read_dataset,
    sample_entity,
    __version__,
)

__all__ = [
    "GraphSchema",
    "MtforgeError",
    "PropertyGraph",
    "analyze_dataset",
    "classify_query_type",
    "cosine_similarity",
    "count_keywords",
    "dataset_stats",
    "evaluate",
    "execute",
    "fallback_embed",
    "filter_dataset",
    "generate_dataset",
    "infer_dataset",
    "load_graph",
    "load_schema",
    "mask_entities",
    "parse_canonical",
    "read_dataset",
    "sample_entity",
]

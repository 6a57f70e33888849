"""Commonsense word analogies from structured sense definitions.

Parse ontology definitions into graphs, diff them into analogies, benchmark
embeddings against the synset-answer questions, retrofit vectors to the
taxonomy, and run linguist annotation over the intermediate candidates.
"""

from .annotation import (
    AnnotationSession,
    Verdict,
    apply_verdicts,
    cohen_kappa,
    fleiss_kappa,
)
from .defgraph import (
    ConceptId,
    DefGraph,
    ParseError,
    TokenKind,
    classify_token,
    parse_definition,
    serialize_definition,
)
from .evaluation import (
    AnalogyQuestion,
    Embedding,
    EvalReport,
    answer_question,
    evaluate,
    load_benchmark,
    load_embedding,
)
from .extraction import (
    Analogy,
    ConceptAnalogy,
    ExtractionConfig,
    ExtractionVerdicts,
    compare_graphs,
    expand_definition,
    extract_analogies,
    group_relations,
)
from .lexicon import (
    FrequencyTable,
    Lexicon,
    Sense,
    Taxonomy,
    load_frequencies,
    load_lexicon,
    load_taxonomy,
)
from .retrofit import (
    KnowledgeGraph,
    RetrofitConfig,
    build_knowledge_graph,
    retrofit,
)

__version__ = "0.1.0"

__all__ = [
    "AnalogyQuestion",
    "Analogy",
    "AnnotationSession",
    "ConceptAnalogy",
    "ConceptId",
    "DefGraph",
    "Embedding",
    "EvalReport",
    "ExtractionConfig",
    "ExtractionVerdicts",
    "FrequencyTable",
    "KnowledgeGraph",
    "Lexicon",
    "ParseError",
    "RetrofitConfig",
    "Sense",
    "Taxonomy",
    "TokenKind",
    "Verdict",
    "answer_question",
    "apply_verdicts",
    "build_knowledge_graph",
    "classify_token",
    "cohen_kappa",
    "compare_graphs",
    "evaluate",
    "expand_definition",
    "extract_analogies",
    "fleiss_kappa",
    "group_relations",
    "load_benchmark",
    "load_embedding",
    "load_frequencies",
    "load_lexicon",
    "load_taxonomy",
    "parse_definition",
    "retrofit",
    "serialize_definition",
]

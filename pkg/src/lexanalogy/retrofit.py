"""Retrofitting word vectors to taxonomy-derived knowledge graphs.

The knowledge graph links words attached to the same taxonomy concept
(same-taxon) and words of a concept with words of its parent (hypo-hyper).
Retrofitting then pulls each vector toward its graph neighbors while
anchoring it to its original position, with in-place Gauss-Seidel updates

    q_i <- (alpha * q̂_i + sum_j beta_ij * q_j) / (alpha + sum_j beta_ij)

where beta_ij = 1/degree(i) over neighbors present in the vocabulary.
Each update exactly minimizes a convex quadratic in q_i, so the recorded
objective never increases across passes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .evaluation import Embedding
from .lexicon import Lexicon, Taxonomy

__all__ = [
    "EdgeType",
    "KnowledgeGraph",
    "RetrofitConfig",
    "RetrofitReport",
    "build_knowledge_graph",
    "retrofit",
    "load_knowledge_graph",
]


class EdgeType(Enum):
    SAME_TAXON = "same_taxon"
    HYPO_HYPER = "hypo_hyper"


class KnowledgeGraph:
    """Unordered, typed word-pair edges without self-loops."""

    def __init__(self):
        self.edges: set[tuple[str, str, EdgeType]] = set()
        self._adjacency: dict[str, set[str]] = {}

    def add_edge(self, a: str, b: str, kind: EdgeType) -> None:
        if a == b:
            raise ValueError(f"self-loop on {a!r}")
        lo, hi = sorted((a, b))
        self.edges.add((lo, hi, kind))
        self._adjacency.setdefault(a, set()).add(b)
        self._adjacency.setdefault(b, set()).add(a)

    def neighbors(self, word: str) -> set[str]:
        return self._adjacency.get(word, set())

    def words(self) -> set[str]:
        return set(self._adjacency)

    def __len__(self) -> int:
        return len(self.edges)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for a, b, kind in sorted(self.edges, key=lambda e: (e[0], e[1], e[2].value)):
                fh.write(f"{a}\t{b}\t{kind.value}\n")

    @classmethod
    def load(cls, path) -> "KnowledgeGraph":
        kg = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line.strip():
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise ValueError(f"line {lineno}: expected 3 columns")
                a, b, kind = (f.strip() for f in fields)
                try:
                    kg.add_edge(a, b, EdgeType(kind))
                except ValueError as exc:
                    raise ValueError(f"line {lineno}: {exc}") from exc
        return kg


def load_knowledge_graph(path) -> KnowledgeGraph:
    return KnowledgeGraph.load(path)


def build_knowledge_graph(taxonomy: Taxonomy, lexicon: Lexicon) -> KnowledgeGraph:
    """Same-taxon and hypo-hyper edges over taxonomy-attached words.

    A word attaches to a concept when one of its senses is defined trivially
    by it.  Words on one concept pair up as same-taxon; words on a concept
    and its parent pair up as hypo-hyper.
    """
    kg = KnowledgeGraph()
    attached = {
        concept: lexicon.synset_of(concept)
        for concept in taxonomy.parent
    }
    for concept, words in attached.items():
        for i in range(len(words)):
            for j in range(i + 1, len(words)):
                kg.add_edge(words[i], words[j], EdgeType.SAME_TAXON)
        parent = taxonomy.parent[concept]
        if parent is None:
            continue
        for child_word in words:
            for parent_word in attached.get(parent, []):
                if child_word != parent_word:
                    kg.add_edge(child_word, parent_word, EdgeType.HYPO_HYPER)
    return kg


@dataclass(frozen=True)
class RetrofitConfig:
    alpha: float = 1.0
    iterations: int = 10
    convergence_eps: float = 1e-6

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")


@dataclass
class RetrofitReport:
    objective_per_pass: list[float] = field(default_factory=list)
    passes_run: int = 0
    updated_words: int = 0


def _objective(matrix, original, neighbor_rows, alpha) -> float:
    """The quadratic each Gauss-Seidel update minimizes in its coordinate.

    sum_i alpha*deg(i)*||q_i - q̂_i||^2 + sum_{edges, once} ||q_i - q_j||^2
    (its stationarity conditions are exactly the update fixed points).
    """
    total = 0.0
    for i, rows in neighbor_rows.items():
        diff = matrix[i] - original[i]
        total += alpha * len(rows) * float(diff @ diff)
        for j in rows:
            if j > i:
                d = matrix[i] - matrix[j]
                total += float(d @ d)
    return total


def retrofit(
    emb: Embedding, kg: KnowledgeGraph, config: RetrofitConfig = RetrofitConfig()
) -> tuple[Embedding, RetrofitReport]:
    """Retrofit an embedding to a knowledge graph.

    Words without in-vocabulary neighbors keep their vectors exactly; graph
    words missing from the vocabulary are ignored.  One pass updates every
    connected word once, in ascending row order.  Stops after
    ``config.iterations`` passes or when the mean per-word vector change in
    a pass drops below ``config.convergence_eps``.
    """
    matrix = emb.matrix.copy()
    original = emb.matrix
    neighbor_rows: dict[int, list[int]] = {}
    for word, i in emb.vocab.items():
        rows = sorted(emb.vocab[n] for n in kg.neighbors(word) if n in emb.vocab)
        if rows:
            neighbor_rows[i] = rows
    report = RetrofitReport(updated_words=len(neighbor_rows))
    update_order = sorted(neighbor_rows)
    alpha = config.alpha
    for _ in range(config.iterations):
        before = matrix[update_order].copy() if update_order else None
        for i in update_order:
            rows = neighbor_rows[i]
            beta = 1.0 / len(rows)
            neighbor_sum = matrix[rows].sum(axis=0) * beta
            matrix[i] = (alpha * original[i] + neighbor_sum) / (alpha + 1.0)
        report.passes_run += 1
        report.objective_per_pass.append(
            _objective(matrix, original, neighbor_rows, alpha)
        )
        if not update_order:
            break
        mean_change = float(
            np.linalg.norm(matrix[update_order] - before, axis=1).mean()
        )
        if mean_change < config.convergence_eps:
            break
    out = Embedding(emb.words, matrix, emb.had_header)
    return out, report

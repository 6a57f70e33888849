"""Embeddings and analogy-question evaluation.

Questions w1:w2 = w3:? are answered by the vocabulary word whose vector is
most cosine-similar to v3 + v2 - v1, excluding the three question words.
An answer counts as correct when it belongs to the question's synset, and
a question counts as covered when w1, w2, w3 and at least one synset member
are all in the vocabulary, so small vocabularies are not penalized.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EmbeddingFormatError",
    "Embedding",
    "AnalogyQuestion",
    "QuestionVerdict",
    "EvalReport",
    "load_embedding",
    "load_benchmark",
    "answer_question",
    "evaluate",
    "write_eval_report",
]


class EmbeddingFormatError(ValueError):
    """Malformed embedding file; names the offending 1-based line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Embedding:
    """Dense word vectors with a word -> row-index vocabulary."""

    def __init__(self, words, matrix, had_header: bool = False):
        self.words: list[str] = list(words)
        self.matrix = np.asarray(matrix, dtype=np.float64)
        if self.matrix.ndim != 2 or len(self.words) != self.matrix.shape[0]:
            raise ValueError("matrix shape does not match the word list")
        self.vocab: dict[str, int] = {w: i for i, w in enumerate(self.words)}
        if len(self.vocab) != len(self.words):
            raise ValueError("duplicate words in the vocabulary")
        self.had_header = had_header
        self._norms = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def vector(self, word: str) -> np.ndarray:
        return self.matrix[self.vocab[word]]

    def row_norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.linalg.norm(self.matrix, axis=1)
        return self._norms

    @classmethod
    def load(cls, path) -> "Embedding":
        words: list[str] = []
        rows: list[list[float]] = []
        seen: dict[str, int] = {}
        dim: int | None = None
        had_header = False
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                parts = raw.split()
                if not parts:
                    continue
                if lineno == 1 and len(parts) == 2 and _both_ints(parts):
                    had_header = True
                    continue
                word, values = parts[0], parts[1:]
                if not values:
                    raise EmbeddingFormatError("row has no vector values", lineno)
                try:
                    vector = [float(v) for v in values]
                except ValueError as exc:
                    raise EmbeddingFormatError(
                        f"non-numeric component: {exc}", lineno
                    ) from exc
                if dim is None:
                    dim = len(vector)
                elif len(vector) != dim:
                    raise EmbeddingFormatError(
                        f"expected {dim} values, got {len(vector)}", lineno
                    )
                if not any(vector):
                    raise EmbeddingFormatError(
                        f"all-zero vector for {word!r}", lineno
                    )
                if word in seen:
                    warnings.warn(
                        f"duplicate word {word!r} at line {lineno}; keeping the first",
                        stacklevel=2,
                    )
                    continue
                seen[word] = lineno
                words.append(word)
                rows.append(vector)
        if not words:
            raise EmbeddingFormatError("empty embedding file")
        return cls(words, np.array(rows, dtype=np.float64), had_header)

    def save(self, path) -> None:
        """Write the text format back (header kept iff the source had one)."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            if self.had_header:
                fh.write(f"{len(self.words)} {self.dim}\n")
            for word, row in zip(self.words, self.matrix):
                values = " ".join(repr(float(v)) for v in row)
                fh.write(f"{word} {values}\n")


def _both_ints(parts) -> bool:
    try:
        [int(p) for p in parts]
    except ValueError:
        return False
    return True


def load_embedding(path) -> Embedding:
    return Embedding.load(path)


@dataclass(frozen=True)
class AnalogyQuestion:
    w1: str
    w2: str
    w3: str
    synset: tuple[str, ...]


@dataclass(frozen=True)
class QuestionVerdict:
    question: AnalogyQuestion
    covered: bool
    predicted: str | None
    correct: bool


@dataclass
class EvalReport:
    accuracy: float | None
    covered: int
    total: int
    per_question: list[QuestionVerdict]

    def summary(self) -> str:
        acc = "n/a" if self.accuracy is None else f"{self.accuracy:.6f}"
        return f"accuracy={acc} covered={self.covered} total={self.total}"


def load_benchmark(path) -> list[AnalogyQuestion]:
    """Read analogy questions: 4 tab (or whitespace) separated columns.

    The 4th column is a '|'-joined synset; a plain 4-word row is a
    singleton synset.
    """
    questions = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            if len(fields) != 4:
                raise ValueError(f"line {lineno}: expected 4 columns")
            w1, w2, w3, synset = (f.strip() for f in fields)
            members = tuple(sorted(set(synset.split("|"))))
            questions.append(AnalogyQuestion(w1, w2, w3, members))
    return questions


def _is_covered(
    emb: Embedding, q: AnalogyQuestion, require_full_synset: bool
) -> bool:
    if not (q.w1 in emb and q.w2 in emb and q.w3 in emb):
        return False
    hits = [w for w in q.synset if w in emb]
    return len(hits) == len(q.synset) if require_full_synset else bool(hits)


def answer_question(
    emb: Embedding, q: AnalogyQuestion, *, require_full_synset: bool = False
) -> str | None:
    """The word most cosine-similar to v3 + v2 - v1, or None when uncovered.

    The question words themselves are excluded; exact similarity ties go to
    the lower row index.
    """
    if not _is_covered(emb, q, require_full_synset):
        return None
    i1, i2, i3 = (emb.vocab[w] for w in (q.w1, q.w2, q.w3))
    if len(emb.words) <= len({i1, i2, i3}):
        return None  # nothing left once the question words are excluded
    target = emb.matrix[i3] + emb.matrix[i2] - emb.matrix[i1]
    # argmax of cosine == argmax of (row . target)/|row|; |target| is constant.
    scores = emb.matrix @ target / emb.row_norms()
    scores[[i1, i2, i3]] = -np.inf
    return emb.words[int(np.argmax(scores))]


def evaluate(
    emb: Embedding, questions, *, require_full_synset: bool = False
) -> EvalReport:
    """Score questions; accuracy = correct/covered (None when covered = 0)."""
    verdicts = []
    covered = correct = 0
    for q in questions:
        answer = answer_question(emb, q, require_full_synset=require_full_synset)
        if answer is None:
            verdicts.append(QuestionVerdict(q, False, None, False))
            continue
        covered += 1
        hit = answer in q.synset
        correct += hit
        verdicts.append(QuestionVerdict(q, True, answer, hit))
    accuracy = correct / covered if covered else None
    return EvalReport(accuracy, covered, len(questions), verdicts)


def write_eval_report(report: EvalReport, path) -> None:
    """Per-question verdict TSV followed by the summary line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in report.per_question:
            q = v.question
            status = "correct" if v.correct else ("incorrect" if v.covered else "uncovered")
            fh.write(
                f"{q.w1}\t{q.w2}\t{q.w3}\t{'|'.join(q.synset)}\t"
                f"{v.predicted or ''}\t{status}\n"
            )
        fh.write(report.summary() + "\n")

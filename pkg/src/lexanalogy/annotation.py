"""Linguist annotation: task queues, verdicts, agreement, verdict application.

Concept analogies are accepted or rejected as a whole; synsets are pruned
word by word.  Verdicts persist in an append-only JSONL log (with periodic
snapshots) inside a session directory, and agreement is summarized with
Fleiss' kappa (mean pairwise Cohen's kappa as a secondary figure).
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .defgraph import ConceptId, DefGraph, parse_definition, serialize_definition
from .extraction import (
    ConceptAnalogy,
    ExtractionVerdicts,
    expand_definition,
)
from .lexicon import FrequencyTable, Lexicon

__all__ = [
    "CORRECT",
    "INCORRECT",
    "KEEP",
    "REMOVE",
    "ConceptAnalogyTask",
    "SynsetTask",
    "Verdict",
    "AgreementReport",
    "AnnotationSession",
    "fleiss_kappa",
    "cohen_kappa",
    "mean_pairwise_cohen",
    "apply_verdicts",
    "extraction_verdicts",
    "build_concept_tasks",
    "build_synset_tasks",
]

CORRECT = "correct"
INCORRECT = "incorrect"
KEEP = "keep"
REMOVE = "remove"

_SNAPSHOT_EVERY = 50


def _digest(*parts) -> str:
    payload = json.dumps(parts, ensure_ascii=False, sort_keys=True)
    return hashlib.sha1(payload.encode("utf-8")).hexdigest()[:16]


def concept_task_id(analogy: ConceptAnalogy) -> str:
    return _digest("concept_analogy", *analogy.key)


def synset_task_id(concept: ConceptId, words) -> str:
    return _digest("synset", concept.key, list(words))


def _highlight(graph: DefGraph, concept: ConceptId) -> list[int]:
    return [
        i
        for i, node in enumerate(graph.nodes)
        if node.concept is not None and node.concept == concept
    ]


@dataclass(frozen=True)
class ConceptAnalogyTask:
    analogy: ConceptAnalogy
    left_graph: DefGraph
    right_graph: DefGraph

    @property
    def id(self) -> str:
        return concept_task_id(self.analogy)

    def payload(self) -> dict:
        ca = self.analogy
        return {
            "id": self.id,
            "kind": "concept_analogy",
            "left": {
                "word": ca.left_word,
                "sense": ca.left_sense,
                "concept": ca.left_concept.key,
                "graph": self.left_graph.to_payload(),
                "highlight": _highlight(self.left_graph, ca.left_concept),
            },
            "right": {
                "word": ca.right_word,
                "sense": ca.right_sense,
                "concept": ca.right_concept.key,
                "graph": self.right_graph.to_payload(),
                "highlight": _highlight(self.right_graph, ca.right_concept),
            },
            "decisions": [CORRECT, INCORRECT],
        }


@dataclass(frozen=True)
class SynsetTask:
    concept: ConceptId
    words: tuple[str, ...]

    @property
    def id(self) -> str:
        return synset_task_id(self.concept, self.words)

    def payload(self) -> dict:
        return {
            "id": self.id,
            "kind": "synset",
            "concept": self.concept.key,
            "words": list(self.words),
            "decisions": [KEEP, REMOVE],
        }


@dataclass(frozen=True)
class Verdict:
    """One annotator's decision on one task.

    ``decision`` is "correct"/"incorrect" for concept-analogy tasks or a
    word -> "keep"/"remove" mapping for synset tasks.
    """

    task_id: str
    annotator: str
    decision: str | dict
    timestamp: float = field(default_factory=time.time)

    def __post_init__(self):
        if isinstance(self.decision, str):
            if self.decision not in (CORRECT, INCORRECT):
                raise ValueError(f"bad decision {self.decision!r}")
        elif isinstance(self.decision, dict):
            bad = {v for v in self.decision.values() if v not in (KEEP, REMOVE)}
            if bad:
                raise ValueError(f"bad per-word decisions: {sorted(bad)}")
        else:
            raise ValueError("decision must be a string or a word mapping")


# -- agreement ----------------------------------------------------------------


class DegenerateAgreementError(ValueError):
    """Expected agreement is 1 while observed agreement is not."""


def fleiss_kappa(labels) -> float:
    """Fleiss' kappa over an item x annotator label matrix.

    Every item must be labeled by the same number (>= 2) of annotators.
    Returns exactly 1.0 on complete agreement.
    """
    rows = [list(row) for row in labels]
    if not rows:
        raise ValueError("no items")
    n = len(rows[0])
    if n < 2:
        raise ValueError("need at least 2 annotators")
    if any(len(row) != n for row in rows):
        raise ValueError("all items need the same number of labels")
    categories = sorted({label for row in rows for label in row}, key=str)
    index = {c: k for k, c in enumerate(categories)}
    counts = np.zeros((len(rows), len(categories)))
    for i, row in enumerate(rows):
        for label in row:
            counts[i, index[label]] += 1
    per_item = ((counts**2).sum(axis=1) - n) / (n * (n - 1))
    observed = float(per_item.mean())
    proportions = counts.sum(axis=0) / counts.sum()
    expected = float((proportions**2).sum())
    if observed == 1.0:
        return 1.0
    if expected == 1.0:
        raise DegenerateAgreementError("all labels fall in one category")
    return (observed - expected) / (1.0 - expected)


def cohen_kappa(a, b) -> float:
    """Cohen's kappa between two annotators' label sequences."""
    a, b = list(a), list(b)
    if len(a) != len(b) or not a:
        raise ValueError("need two equal-length, non-empty label sequences")
    observed = sum(x == y for x, y in zip(a, b)) / len(a)
    categories = set(a) | set(b)
    expected = sum(
        (a.count(c) / len(a)) * (b.count(c) / len(b)) for c in categories
    )
    if observed == 1.0:
        return 1.0
    if expected == 1.0:
        raise DegenerateAgreementError("all labels fall in one category")
    return (observed - expected) / (1.0 - expected)


def mean_pairwise_cohen(labels) -> float:
    """Average Cohen's kappa over all annotator column pairs."""
    rows = [list(row) for row in labels]
    if not rows or len(rows[0]) < 2:
        raise ValueError("need at least 2 annotators")
    n = len(rows[0])
    values = []
    for i in range(n):
        for j in range(i + 1, n):
            values.append(cohen_kappa([r[i] for r in rows], [r[j] for r in rows]))
    return float(np.mean(values))


@dataclass(frozen=True)
class AgreementReport:
    kappa: float | None
    pairwise_cohen: float | None
    n_items: int
    n_annotators: int


# -- sessions -----------------------------------------------------------------


class SessionError(ValueError):
    pass


class AnnotationSession:
    """Task queues plus a persistent verdict store.

    Each annotator gets the full task list in a seeded-shuffle order that is
    stable across restarts.  Re-submitting a (task, annotator) verdict
    overwrites the old one and appends an audit entry to the log.
    """

    def __init__(self, tasks, annotators, seed: int = 0, directory=None):
        self.tasks: dict[str, ConceptAnalogyTask | SynsetTask] = {}
        for task in tasks:
            if task.id in self.tasks:
                raise SessionError(f"duplicate task id {task.id}")
            self.tasks[task.id] = task
        if not self.tasks:
            raise SessionError("empty task list")
        self.annotators = list(dict.fromkeys(annotators))
        if not self.annotators:
            raise SessionError("no annotators")
        self.seed = seed
        self.queues: dict[str, list[str]] = {}
        ids = sorted(self.tasks)
        for annotator in self.annotators:
            order = ids[:]
            random.Random(f"{seed}:{annotator}").shuffle(order)
            self.queues[annotator] = order
        self.verdicts: dict[tuple[str, str], Verdict] = {}
        self.audit: list[dict] = []
        self._events = 0
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._write_manifest()
            self._log_path().touch()

    # -- persistence --------------------------------------------------------

    def _manifest_path(self) -> Path:
        return self.directory / "session.json"

    def _log_path(self) -> Path:
        return self.directory / "verdicts.log"

    def _snapshot_path(self) -> Path:
        return self.directory / "verdicts.snapshot.json"

    def _write_manifest(self) -> None:
        tasks = []
        for task in self.tasks.values():
            if isinstance(task, ConceptAnalogyTask):
                ca = task.analogy
                tasks.append(
                    {
                        "kind": "concept_analogy",
                        "left": [ca.left_word, ca.left_sense, ca.left_concept.key],
                        "right": [ca.right_word, ca.right_sense, ca.right_concept.key],
                        "left_definition": serialize_definition(task.left_graph),
                        "right_definition": serialize_definition(task.right_graph),
                    }
                )
            else:
                tasks.append(
                    {
                        "kind": "synset",
                        "concept": task.concept.key,
                        "words": list(task.words),
                    }
                )
        manifest = {
            "version": 1,
            "seed": self.seed,
            "annotators": self.annotators,
            "tasks": tasks,
        }
        self._manifest_path().write_text(
            json.dumps(manifest, ensure_ascii=False, indent=1), encoding="utf-8"
        )

    @classmethod
    def load(cls, directory) -> "AnnotationSession":
        directory = Path(directory)
        manifest = json.loads(
            (directory / "session.json").read_text(encoding="utf-8")
        )
        tasks = []
        for item in manifest["tasks"]:
            if item["kind"] == "concept_analogy":
                lw, ls, lc = item["left"]
                rw, rs, rc = item["right"]
                tasks.append(
                    ConceptAnalogyTask(
                        ConceptAnalogy(
                            lw, ls, ConceptId.parse(lc), rw, rs, ConceptId.parse(rc)
                        ),
                        parse_definition(item["left_definition"]),
                        parse_definition(item["right_definition"]),
                    )
                )
            else:
                tasks.append(
                    SynsetTask(ConceptId.parse(item["concept"]), tuple(item["words"]))
                )
        session = cls.__new__(cls)
        AnnotationSession.__init__(
            session,
            tasks,
            manifest["annotators"],
            manifest["seed"],
            directory=None,
        )
        session.directory = directory
        session._replay()
        return session

    def _replay(self) -> None:
        skip = 0
        if self._snapshot_path().exists():
            snapshot = json.loads(self._snapshot_path().read_text(encoding="utf-8"))
            skip = snapshot["log_lines"]
            for item in snapshot["verdicts"]:
                v = Verdict(
                    item["task_id"],
                    item["annotator"],
                    item["decision"],
                    item["timestamp"],
                )
                self.verdicts[(v.task_id, v.annotator)] = v
        events = 0
        if self._log_path().exists():
            with open(self._log_path(), encoding="utf-8") as fh:
                for lineno, line in enumerate(fh):
                    events += 1
                    if lineno < skip or not line.strip():
                        continue
                    entry = json.loads(line)
                    if entry["event"] == "verdict":
                        v = Verdict(
                            entry["task_id"],
                            entry["annotator"],
                            entry["decision"],
                            entry["timestamp"],
                        )
                        self.verdicts[(v.task_id, v.annotator)] = v
                    else:
                        self.audit.append(entry)
        self._events = events

    def _append_log(self, entry: dict) -> None:
        if self.directory is None:
            return
        with open(self._log_path(), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
            fh.flush()
        self._events += 1
        if self._events % _SNAPSHOT_EVERY == 0:
            self.snapshot()

    def snapshot(self) -> None:
        """Materialize current verdicts so reloads replay only the log tail."""
        if self.directory is None:
            return
        payload = {
            "log_lines": self._events,
            "verdicts": [
                {
                    "task_id": v.task_id,
                    "annotator": v.annotator,
                    "decision": v.decision,
                    "timestamp": v.timestamp,
                }
                for v in self.verdicts.values()
            ],
        }
        self._snapshot_path().write_text(
            json.dumps(payload, ensure_ascii=False), encoding="utf-8"
        )

    def close(self) -> None:
        self.snapshot()

    # -- the annotation protocol ---------------------------------------------

    def submit_verdict(self, verdict: Verdict) -> None:
        if verdict.task_id not in self.tasks:
            raise SessionError(f"unknown task {verdict.task_id}")
        if verdict.annotator not in self.annotators:
            raise SessionError(f"unknown annotator {verdict.annotator!r}")
        task = self.tasks[verdict.task_id]
        if isinstance(task, SynsetTask) != isinstance(verdict.decision, dict):
            raise SessionError("decision shape does not match the task kind")
        if isinstance(task, SynsetTask):
            unknown = set(verdict.decision) - set(task.words)
            if unknown:
                raise SessionError(f"verdict covers unknown words {sorted(unknown)}")
        key = (verdict.task_id, verdict.annotator)
        previous = self.verdicts.get(key)
        if previous is not None:
            audit = {
                "event": "overwrite",
                "task_id": verdict.task_id,
                "annotator": verdict.annotator,
                "previous": previous.decision,
                "timestamp": verdict.timestamp,
            }
            self.audit.append(audit)
            self._append_log(audit)
        self.verdicts[key] = verdict
        self._append_log(
            {
                "event": "verdict",
                "task_id": verdict.task_id,
                "annotator": verdict.annotator,
                "decision": verdict.decision,
                "timestamp": verdict.timestamp,
            }
        )

    def next_task(self, annotator: str):
        if annotator not in self.queues:
            raise SessionError(f"unknown annotator {annotator!r}")
        for task_id in self.queues[annotator]:
            if (task_id, annotator) not in self.verdicts:
                return self.tasks[task_id]
        return None

    def progress(self) -> dict[str, dict[str, int]]:
        total = len(self.tasks)
        return {
            a: {
                "done": sum(1 for t in self.tasks if (t, a) in self.verdicts),
                "total": total,
            }
            for a in self.annotators
        }

    def export_tsv(self) -> str:
        """task_id, annotator, decision rows; synset decisions as word=keep|..."""
        lines = []
        for (task_id, annotator), v in sorted(self.verdicts.items()):
            if isinstance(v.decision, dict):
                decision = "|".join(f"{w}={v.decision[w]}" for w in sorted(v.decision))
            else:
                decision = v.decision
            lines.append(f"{task_id}\t{annotator}\t{decision}")
        return "\n".join(lines) + ("\n" if lines else "")

    # -- agreement over the session ------------------------------------------

    def _label_matrix(self, kind) -> list[list]:
        rows = []
        for task_id, task in sorted(self.tasks.items()):
            if not isinstance(task, kind):
                continue
            verdicts = [self.verdicts.get((task_id, a)) for a in self.annotators]
            if any(v is None for v in verdicts):
                continue
            if kind is ConceptAnalogyTask:
                rows.append([v.decision for v in verdicts])
            else:
                for word in task.words:
                    labels = [v.decision.get(word) for v in verdicts]
                    if all(labels):
                        rows.append(labels)
        return rows

    def agreement(self) -> dict[str, AgreementReport]:
        out = {}
        for name, kind in (
            ("concept_analogies", ConceptAnalogyTask),
            ("synsets", SynsetTask),
        ):
            rows = self._label_matrix(kind)
            if not rows or len(self.annotators) < 2:
                out[name] = AgreementReport(None, None, len(rows), len(self.annotators))
                continue
            try:
                kappa = fleiss_kappa(rows)
                cohen = mean_pairwise_cohen(rows)
            except DegenerateAgreementError:
                kappa = cohen = None
            out[name] = AgreementReport(kappa, cohen, len(rows), len(self.annotators))
        return out


# -- applying verdicts ---------------------------------------------------------


def _majority_correct(decisions) -> bool | None:
    """True/False for a majority, None for a tie."""
    yes = sum(1 for d in decisions if d == CORRECT)
    no = len(decisions) - yes
    if yes == no:
        return None
    return yes > no


def apply_verdicts(
    concept_analogies,
    synsets: dict[ConceptId, list[str]],
    verdicts,
    policy: str = "permissive",
):
    """Filter concept analogies and prune synsets by annotation outcomes.

    Concept analogies are kept on a majority of "correct" verdicts; ties
    drop the item.  Unlabeled analogies are kept under "permissive" and
    dropped under "strict".  A synset word is dropped when any annotator
    marked it "remove".  Idempotent; output is a subset of the input.
    """
    if policy not in ("permissive", "strict"):
        raise ValueError(f"unknown policy {policy!r}")
    by_task: dict[str, list[Verdict]] = {}
    for v in verdicts:
        by_task.setdefault(v.task_id, []).append(v)

    kept = []
    for ca in concept_analogies:
        decisions = [v.decision for v in by_task.get(concept_task_id(ca), [])]
        if not decisions:
            if policy == "permissive":
                kept.append(ca)
            continue
        majority = _majority_correct(decisions)
        if majority:
            kept.append(ca)

    pruned: dict[ConceptId, list[str]] = {}
    for concept, words in synsets.items():
        removed: set[str] = set()
        task_verdicts = by_task.get(synset_task_id(concept, words), [])
        for v in task_verdicts:
            removed.update(w for w, d in v.decision.items() if d == REMOVE)
        pruned[concept] = [w for w in words if w not in removed]
    return kept, pruned


def extraction_verdicts(session: AnnotationSession, policy: str = "permissive") -> ExtractionVerdicts:
    """Convert a session's verdicts into the extraction pipeline's shape."""
    if policy not in ("permissive", "strict"):
        raise ValueError(f"unknown policy {policy!r}")
    rejected: set[tuple] = set()
    approved: set[tuple] = set()
    removals: dict[str, set[str]] = {}
    by_task: dict[str, list[Verdict]] = {}
    for v in session.verdicts.values():
        by_task.setdefault(v.task_id, []).append(v)
    for task_id, task in session.tasks.items():
        task_verdicts = by_task.get(task_id, [])
        if isinstance(task, ConceptAnalogyTask):
            if not task_verdicts:
                continue
            majority = _majority_correct([v.decision for v in task_verdicts])
            if majority:
                approved.add(task.analogy.key)
            else:
                rejected.add(task.analogy.key)
        else:
            removed = removals.setdefault(task.concept.key, set())
            for v in task_verdicts:
                removed.update(w for w, d in v.decision.items() if d == REMOVE)
    return ExtractionVerdicts(
        rejected=rejected,
        approved=approved if policy == "strict" else None,
        synset_removals={k: v for k, v in removals.items() if v},
    )


# -- task construction ----------------------------------------------------------


def build_concept_tasks(
    concept_analogies, lexicon: Lexicon, expansion_limit: int = 8
) -> list[ConceptAnalogyTask]:
    """Pair each concept analogy with the two expanded graphs it came from."""
    tasks = []
    for ca in concept_analogies:
        left = lexicon.words[ca.left_word][ca.left_sense]
        right = lexicon.words[ca.right_word][ca.right_sense]
        tasks.append(
            ConceptAnalogyTask(
                ca,
                expand_definition(left, lexicon, expansion_limit),
                expand_definition(right, lexicon, expansion_limit),
            )
        )
    return tasks


def build_synset_tasks(
    concept_analogies,
    lexicon: Lexicon,
    frequencies: FrequencyTable | None = None,
    min_freq: int = 0,
) -> list[SynsetTask]:
    """One pruning task per distinct concept needed by the analogies."""
    concepts: dict[str, ConceptId] = {}
    for ca in concept_analogies:
        concepts.setdefault(ca.left_concept.key, ca.left_concept)
        concepts.setdefault(ca.right_concept.key, ca.right_concept)
    tasks = []
    for key in sorted(concepts):
        concept = concepts[key]
        words = lexicon.synset_of(concept)
        if frequencies is not None:
            words = [w for w in words if frequencies.is_common(w, min_freq)]
        if words:
            tasks.append(SynsetTask(concept, tuple(words)))
    return tasks

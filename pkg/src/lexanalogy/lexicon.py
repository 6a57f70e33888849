"""In-memory ontology: word senses, concept definitions, taxonomy, frequencies.

File formats (UTF-8, LF, tab-separated, no header):

* ``lexicon.tsv``  — token, kind (word|concept|attribute), sense_index,
  definition, english_gloss.  Empty fields are allowed where a column does
  not apply (attributes have no definition, concepts no sense index).
* ``taxonomy.tsv`` — child_concept, parent_concept; the root row has an
  empty parent.
* ``freq.tsv``     — word, count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .defgraph import (
    ConceptId,
    DefGraph,
    NodeKind,
    ParseError,
    TokenError,
    TokenKind,
    classify_token,
    parse_definition,
    serialize_definition,
)

__all__ = [
    "LexiconError",
    "TaxonomyError",
    "Sense",
    "ConceptEntry",
    "Lexicon",
    "Taxonomy",
    "FrequencyTable",
    "load_lexicon",
    "load_taxonomy",
    "load_frequencies",
]


class LexiconError(ValueError):
    """Malformed lexicon file; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class TaxonomyError(ValueError):
    pass


@dataclass(frozen=True)
class Sense:
    word: str
    sense_index: int
    definition: DefGraph
    gloss: str | None = None


@dataclass(frozen=True)
class ConceptEntry:
    id: ConceptId
    definition: DefGraph | None = None


@dataclass
class Lexicon:
    """Words with senses, concepts with definitions, and known attributes."""

    words: dict[str, dict[int, Sense]] = field(default_factory=dict)
    concepts: dict[ConceptId, ConceptEntry] = field(default_factory=dict)
    attributes: set[str] = field(default_factory=set)

    def add_sense(self, sense: Sense) -> None:
        senses = self.words.setdefault(sense.word, {})
        if sense.sense_index in senses:
            raise ValueError(f"duplicate sense {sense.word}#{sense.sense_index}")
        senses[sense.sense_index] = sense

    def add_concept(self, entry: ConceptEntry) -> None:
        if entry.id in self.concepts:
            raise ValueError(f"duplicate concept {entry.id.key}")
        self.concepts[entry.id] = entry

    def senses_of(self, word: str) -> list[Sense]:
        return [self.words[word][i] for i in sorted(self.words.get(word, {}))]

    def all_senses(self):
        for word in sorted(self.words):
            yield from self.senses_of(word)

    def concept(self, cid: ConceptId) -> ConceptEntry | None:
        return self.concepts.get(cid)

    def synset_of(self, cid: ConceptId) -> list[str]:
        """Words having at least one sense defined trivially by ``cid``.

        A trivial sense is a definition graph that is exactly one concept
        node.  Sorted by codepoint, deduplicated; unknown concepts give [].
        """
        found = set()
        for senses in self.words.values():
            for sense in senses.values():
                g = sense.definition
                if g.is_single_concept() and g.nodes[g.root].concept == cid:
                    found.add(sense.word)
                    break
        return sorted(found)

    def save(self, path) -> None:
        """Write lexicon.tsv rows: attributes, then concepts, then words."""
        lines = []
        for attr in sorted(self.attributes):
            lines.append(f"{attr}\tattribute\t\t\t")
        for cid in sorted(self.concepts, key=lambda c: c.key):
            entry = self.concepts[cid]
            definition = (
                serialize_definition(entry.definition) if entry.definition else ""
            )
            lines.append(f"{cid.text}\tconcept\t\t{definition}\t")
        for sense in self.all_senses():
            definition = serialize_definition(sense.definition)
            gloss = sense.gloss or ""
            lines.append(
                f"{sense.word}\tword\t{sense.sense_index}\t{definition}\t{gloss}"
            )
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))

    @classmethod
    def load(cls, path) -> "Lexicon":
        lex = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line.strip():
                    continue
                fields = line.split("\t")
                if len(fields) != 5:
                    raise LexiconError(
                        f"expected 5 tab-separated columns, got {len(fields)}", lineno
                    )
                token, kind, sense_index, definition, gloss = (f.strip() for f in fields)
                try:
                    lex._load_row(token, kind, sense_index, definition, gloss)
                except (TokenError, ParseError, ValueError) as exc:
                    raise LexiconError(str(exc), lineno) from exc
        return lex

    def _load_row(self, token, kind, sense_index, definition, gloss) -> None:
        if kind == "attribute":
            if classify_token(token) is not TokenKind.ATTRIBUTE:
                raise ValueError(f"{token!r} is not an attribute token")
            self.attributes.add(token)
        elif kind == "concept":
            if classify_token(token) is not TokenKind.CONCEPT:
                raise ValueError(f"{token!r} is not a concept token")
            graph = parse_definition(definition) if definition else None
            self.add_concept(ConceptEntry(ConceptId.parse(token), graph))
        elif kind == "word":
            if classify_token(token) is not TokenKind.WORD:
                raise ValueError(f"{token!r} is not a word token")
            index = int(sense_index)
            if index < 1:
                raise ValueError(f"sense index must be positive, got {index}")
            graph = parse_definition(definition)
            self.add_sense(Sense(token, index, graph, gloss or None))
        else:
            raise ValueError(f"unknown kind {kind!r}")


class Taxonomy:
    """Single-rooted concept tree with ancestry queries."""

    def __init__(self, parent: dict[ConceptId, ConceptId | None]):
        roots = [c for c, p in parent.items() if p is None]
        if len(roots) != 1:
            raise TaxonomyError(f"expected exactly one root, found {len(roots)}")
        self.parent = dict(parent)
        self.root = roots[0]
        self._check_tree()

    def _check_tree(self) -> None:
        for concept in self.parent:
            seen = set()
            node = concept
            while node is not None:
                if node in seen:
                    raise TaxonomyError(f"cycle through {node.key}")
                seen.add(node)
                parent = self.parent.get(node)
                if parent is None and node != self.root:
                    raise TaxonomyError(f"{node.key} detached from the root")
                node = parent

    def __contains__(self, cid: ConceptId) -> bool:
        return cid in self.parent

    def __len__(self) -> int:
        return len(self.parent)

    def ancestors(self, cid: ConceptId) -> list[ConceptId]:
        """Root path of ``cid``, inclusive, starting at ``cid``."""
        if cid not in self.parent:
            raise TaxonomyError(f"unknown concept {cid.key}")
        path = [cid]
        while (up := self.parent[path[-1]]) is not None:
            path.append(up)
        return path

    def is_under(self, cid: ConceptId, ancestor: ConceptId) -> bool:
        """True iff ``ancestor`` lies on the root path of ``cid`` (reflexive)."""
        if ancestor not in self.parent:
            raise TaxonomyError(f"unknown concept {ancestor.key}")
        return ancestor in self.ancestors(cid)

    def children(self, cid: ConceptId) -> list[ConceptId]:
        return sorted(
            (c for c, p in self.parent.items() if p == cid), key=lambda c: c.key
        )

    def save(self, path) -> None:
        rows = sorted(self.parent.items(), key=lambda item: item[0].key)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for child, parent in rows:
                fh.write(f"{child.text}\t{parent.text if parent else ''}\n")

    @classmethod
    def load(cls, path) -> "Taxonomy":
        parent: dict[ConceptId, ConceptId | None] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line.strip():
                    continue
                fields = line.split("\t")
                if len(fields) != 2:
                    raise TaxonomyError(f"line {lineno}: expected 2 columns")
                child_text, parent_text = (f.strip() for f in fields)
                try:
                    child = ConceptId.parse(child_text)
                    up = ConceptId.parse(parent_text) if parent_text else None
                except TokenError as exc:
                    raise TaxonomyError(f"line {lineno}: {exc}") from exc
                if child in parent:
                    raise TaxonomyError(f"line {lineno}: duplicate child {child.key}")
                parent[child] = up
        # Parents mentioned only in the second column are implicit roots.
        for up in list(parent.values()):
            if up is not None and up not in parent:
                parent[up] = None
        return cls(parent)


class FrequencyTable:
    """Corpus occurrence counts; absent words count 0."""

    def __init__(self, counts: dict[str, int] | None = None):
        self.counts = dict(counts or {})
        for word, count in self.counts.items():
            if count < 0:
                raise ValueError(f"negative count for {word!r}")

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)

    def is_common(self, word: str, threshold: int) -> bool:
        if threshold < 0:
            raise ValueError("threshold must be >= 0")
        return self.count(word) >= threshold

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for word in sorted(self.counts):
                fh.write(f"{word}\t{self.counts[word]}\n")

    @classmethod
    def load(cls, path) -> "FrequencyTable":
        counts: dict[str, int] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line.strip():
                    continue
                fields = line.split("\t")
                if len(fields) != 2:
                    raise ValueError(f"line {lineno}: expected 2 columns")
                word, count = fields[0].strip(), fields[1].strip()
                counts[word] = int(count)
        return cls(counts)


def load_lexicon(path) -> Lexicon:
    return Lexicon.load(path)


def load_taxonomy(path) -> Taxonomy:
    return Taxonomy.load(path)


def load_frequencies(path) -> FrequencyTable:
    return FrequencyTable.load(path)

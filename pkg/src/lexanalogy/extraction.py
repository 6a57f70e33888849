"""Analogy extraction: expand definitions, diff graphs, expand synsets, group.

For each sense pair of two distinct words the pipeline (1) expands trivial
single-concept definitions through the concept's own definition, (2) keeps
the parsed graphs, (3) compares them for a single differing concept node,
(4) expands the left concept into one analogy per synonym word, and (5)
keeps the right concept's synonym words as the answer synset.  Concreteness
(taxonomy ancestry) and corpus-frequency filters gate every participant,
and annotation verdicts can drop concept analogies or prune synset words.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations

from .defgraph import ConceptId, DefGraph, NodeKind
from .lexicon import FrequencyTable, Lexicon, Sense, Taxonomy, TaxonomyError

__all__ = [
    "ExpansionCycleError",
    "ExtractionConfig",
    "ConceptAnalogy",
    "Analogy",
    "ExtractionVerdicts",
    "ExtractionReport",
    "ExtractionResult",
    "RelationClass",
    "expand_definition",
    "compare_graphs",
    "extract_analogies",
    "group_relations",
    "write_analogies",
    "read_analogies",
    "write_concept_analogies",
    "read_concept_analogies",
    "write_relation_classes",
]

_INF = 1 << 30
_MAX_GROUP = 8


class ExpansionCycleError(ValueError):
    """Definition expansion revisited a concept."""

    def __init__(self, cycle: list[ConceptId]):
        self.cycle = list(cycle)
        chain = " -> ".join(c.key for c in self.cycle)
        super().__init__(f"expansion cycle: {chain}")


def expand_definition(sense: Sense, lexicon: Lexicon, limit: int = 8) -> DefGraph:
    """Replace a single-concept definition by the concept's own definition.

    Repeats while the graph stays a single concept node, stopping when it
    grows, when the concept has no definition, or after ``limit``
    replacements.  Raises ExpansionCycleError when a concept repeats.
    """
    if limit < 1:
        raise ValueError("expansion limit must be >= 1")
    graph = sense.definition
    seen: list[ConceptId] = []
    replacements = 0
    while graph.is_single_concept():
        cid = graph.nodes[graph.root].concept
        if cid in seen:
            raise ExpansionCycleError(seen[seen.index(cid) :] + [cid])
        entry = lexicon.concept(cid)
        if entry is None or entry.definition is None:
            break
        if replacements >= limit:
            break
        seen.append(cid)
        graph = entry.definition
        replacements += 1
    return graph


# -- graph comparison --------------------------------------------------------


def _combine(units):
    """Fold per-part (min_cost, single_diff_pairs) results for one node pair.

    A correspondence of the whole costs the sum of its parts, so the total
    is 1 exactly when one part costs 1 and the rest cost 0.
    """
    total = 0
    for cost, _ in units:
        if cost >= _INF:
            return _INF, frozenset()
        total += cost
    if total != 1:
        return total, frozenset()
    ones = frozenset()
    for cost, pairs in units:
        if cost == 1:
            ones = pairs
    return 1, ones


def compare_graphs(
    g1: DefGraph, g2: DefGraph, *, unordered_args: bool = False
) -> tuple[ConceptId, ConceptId] | None:
    """Return the single differing concept pair, or None.

    The pair (c1 from g1, c2 from g2) is returned iff some structure-
    preserving correspondence (equal shapes, edge labels, argument order,
    word labels and function names; SELF maps to SELF; attribute values
    under one label match as a set) leaves exactly one corresponding node
    pair unequal, and both members are concept nodes.  ``unordered_args``
    additionally lets function arguments match as a set.
    """
    memo: dict[tuple[int, int], tuple[int, frozenset]] = {}

    def group_match(children1, children2):
        # Minimum-cost bijection between two same-label child lists, plus
        # the diff pairs achievable at total cost exactly 1.
        if len(children1) != len(children2):
            return _INF, frozenset()
        if len(children1) > _MAX_GROUP:
            raise ValueError(
                f"cannot match attribute groups larger than {_MAX_GROUP}"
            )
        a = sorted(children1, key=g1.subtree_key)
        b = sorted(children2, key=g2.subtree_key)
        best = _INF
        ones: set = set()
        for perm in permutations(range(len(b))):
            cost = 0
            parts = []
            for k, pk in enumerate(perm):
                c, pairs = match(a[k], b[pk])
                cost += c
                parts.append((c, pairs))
                if cost >= _INF:
                    break
            best = min(best, cost)
            if cost == 1:
                for c, pairs in parts:
                    if c == 1:
                        ones.update(pairs)
        return best, frozenset(ones) if best == 1 else frozenset()

    def match(i: int, j: int) -> tuple[int, frozenset]:
        key = (i, j)
        if key in memo:
            return memo[key]
        n1, n2 = g1.nodes[i], g2.nodes[j]
        result = (_INF, frozenset())
        if n1.kind is n2.kind:
            units = []
            compatible = True
            if n1.kind is NodeKind.CONCEPT:
                if n1.concept == n2.concept:
                    units.append((0, frozenset()))
                else:
                    units.append((1, frozenset({(n1.concept, n2.concept)})))
            elif n1.kind is NodeKind.WORD:
                compatible = n1.label == n2.label
            elif n1.kind is NodeKind.FUNCTION:
                compatible = n1.label == n2.label
                if compatible:
                    args1, args2 = g1.arg_targets(i), g2.arg_targets(j)
                    if unordered_args:
                        units.append(group_match(args1, args2))
                    elif len(args1) != len(args2):
                        compatible = False
                    else:
                        units.extend(match(u, v) for u, v in zip(args1, args2))
            if compatible:
                by_label1: dict[str, list[int]] = {}
                for e in g1.attribute_edges(i):
                    by_label1.setdefault(e.label, []).append(e.target)
                by_label2: dict[str, list[int]] = {}
                for e in g2.attribute_edges(j):
                    by_label2.setdefault(e.label, []).append(e.target)
                if set(by_label1) == set(by_label2):
                    for label in sorted(by_label1):
                        units.append(group_match(by_label1[label], by_label2[label]))
                    result = _combine(units)
        memo[key] = result
        return result

    cost, pairs = match(g1.root, g2.root)
    if cost != 1 or not pairs:
        return None
    # Deterministic and swap-symmetric tie-break.
    return min(pairs, key=lambda p: (min(p[0].key, p[1].key), max(p[0].key, p[1].key)))


# -- the pipeline -------------------------------------------------------------


@dataclass(frozen=True)
class ExtractionConfig:
    concrete_root: ConceptId | None = ConceptId.parse("physical|物質")
    min_freq: int = 5
    expansion_depth_limit: int = 8
    unordered_args: bool = False

    def __post_init__(self):
        if self.min_freq < 0:
            raise ValueError("min_freq must be >= 0")
        if self.expansion_depth_limit < 1:
            raise ValueError("expansion_depth_limit must be >= 1")


@dataclass(frozen=True)
class ConceptAnalogy:
    """Two (word, sense, concept) sides whose graphs differ in one concept."""

    left_word: str
    left_sense: int
    left_concept: ConceptId
    right_word: str
    right_sense: int
    right_concept: ConceptId

    @property
    def key(self) -> tuple:
        return (
            self.left_word,
            self.left_sense,
            self.left_concept.key,
            self.right_word,
            self.right_sense,
            self.right_concept.key,
        )


@dataclass(frozen=True)
class Analogy:
    """w1:w2 = w3:synset question with its answer word set."""

    w1: str
    w2: str
    w3: str
    synset: tuple[str, ...]

    def __post_init__(self):
        if self.w1 == self.w2:
            raise ValueError(f"w1 and w2 must differ: {self.w1!r}")
        if self.w3 in (self.w1, self.w2):
            raise ValueError(f"w3 must differ from w1 and w2: {self.w3!r}")
        if not self.synset:
            raise ValueError("empty synset")
        if list(self.synset) != sorted(set(self.synset)):
            raise ValueError("synset must be sorted and deduplicated")


@dataclass
class ExtractionVerdicts:
    """Annotation outcomes applied during extraction.

    ``rejected`` holds ConceptAnalogy.key tuples judged incorrect; when
    ``approved`` is not None (strict policy) only those keys pass at all;
    ``synset_removals`` maps a concept's canonical key to words judged not
    synonymous with it.
    """

    rejected: set[tuple] = field(default_factory=set)
    approved: set[tuple] | None = None
    synset_removals: dict[str, set[str]] = field(default_factory=dict)

    def allows(self, key: tuple) -> bool:
        if key in self.rejected:
            return False
        if self.approved is not None and key not in self.approved:
            return False
        return True

    def removed_words(self, concept: ConceptId) -> set[str]:
        return self.synset_removals.get(concept.key, set())


@dataclass
class ExtractionReport:
    sense_pairs: int = 0
    candidates: int = 0
    post_filter: int = 0
    post_verdict: int = 0
    final: int = 0
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def render(self) -> str:
        lines = [
            "extraction report",
            f"sense_pairs_compared\t{self.sense_pairs}",
            f"concept_analogy_candidates\t{self.candidates}",
            f"post_filter\t{self.post_filter}",
            f"post_verdict\t{self.post_verdict}",
            f"final_analogies\t{self.final}",
            f"skipped\t{len(self.skipped)}",
        ]
        for what, reason in self.skipped:
            lines.append(f"skip\t{what}\t{reason}")
        return "\n".join(lines) + "\n"


@dataclass
class ExtractionResult:
    analogies: list[Analogy]
    concept_analogies: list[ConceptAnalogy]
    report: ExtractionReport


def extract_analogies(
    lexicon: Lexicon,
    taxonomy: Taxonomy | None,
    frequencies: FrequencyTable,
    config: ExtractionConfig = ExtractionConfig(),
    verdicts: ExtractionVerdicts | None = None,
    jobs: int = 1,
) -> ExtractionResult:
    """Run the five-step extraction with concreteness/frequency filters.

    ``taxonomy`` may be None only when ``config.concrete_root`` is None.
    Per-sense expansion failures are recorded in the report and skipped,
    never fatal.  Output is deduplicated and sorted, hence deterministic.
    """
    if config.concrete_root is not None and taxonomy is None:
        raise ValueError("a taxonomy is required when concrete_root is set")
    report = ExtractionReport()

    def concept_concrete(cid: ConceptId) -> bool:
        if config.concrete_root is None:
            return True
        try:
            return taxonomy.is_under(cid, config.concrete_root)
        except TaxonomyError:
            return False

    words = sorted(
        w for w in lexicon.words if frequencies.is_common(w, config.min_freq)
    )
    expanded: dict[tuple[str, int], DefGraph] = {}
    concrete: dict[tuple[str, int], bool] = {}
    for word in words:
        for sense in lexicon.senses_of(word):
            key = (word, sense.sense_index)
            try:
                graph = expand_definition(
                    sense, lexicon, config.expansion_depth_limit
                )
            except ExpansionCycleError as exc:
                report.skipped.append((f"{word}#{sense.sense_index}", str(exc)))
                continue
            expanded[key] = graph
            root = graph.nodes[graph.root]
            concrete[key] = root.kind is NodeKind.CONCEPT and concept_concrete(
                root.concept
            )

    def scan_word_pair(pair: tuple[str, str]):
        wa, wb = pair
        hits = []
        n = 0
        for sa in lexicon.senses_of(wa):
            ka = (wa, sa.sense_index)
            if ka not in expanded:
                continue
            for sb in lexicon.senses_of(wb):
                kb = (wb, sb.sense_index)
                if kb not in expanded:
                    continue
                n += 1
                diff = compare_graphs(
                    expanded[ka], expanded[kb], unordered_args=config.unordered_args
                )
                if diff is not None:
                    hits.append((ka, kb, diff))
        return n, hits

    word_pairs = [
        (words[i], words[j])
        for i in range(len(words))
        for j in range(i + 1, len(words))
    ]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scans = list(pool.map(scan_word_pair, word_pairs))
    else:
        scans = [scan_word_pair(p) for p in word_pairs]

    concept_analogies: list[ConceptAnalogy] = []
    for n, hits in scans:
        report.sense_pairs += n
        for (wa, ia), (wb, ib), (ca, cb) in hits:
            report.candidates += 1
            if not (
                concept_concrete(ca)
                and concept_concrete(cb)
                and concrete[(wa, ia)]
                and concrete[(wb, ib)]
            ):
                continue
            report.post_filter += 1
            concept_analogies.append(ConceptAnalogy(wa, ia, ca, wb, ib, cb))

    def expansion_words(cid: ConceptId) -> list[str]:
        removed = verdicts.removed_words(cid) if verdicts else set()
        return [
            w
            for w in lexicon.synset_of(cid)
            if w not in removed and frequencies.is_common(w, config.min_freq)
        ]

    final: set[Analogy] = set()
    for ca in concept_analogies:
        if verdicts is not None and not verdicts.allows(ca.key):
            continue
        report.post_verdict += 1
        left_words = expansion_words(ca.left_concept)
        synset = expansion_words(ca.right_concept)
        if not left_words or not synset:
            continue
        for w2 in left_words:
            if w2 == ca.left_word or w2 == ca.right_word:
                continue
            final.add(Analogy(ca.left_word, w2, ca.right_word, tuple(synset)))
    analogies = sorted(final, key=lambda a: (a.w1, a.w2, a.w3, a.synset))
    report.final = len(analogies)
    return ExtractionResult(analogies, concept_analogies, report)


# -- relation equivalence classes ---------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            return x
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # Deterministic representative regardless of union order.
            self.parent[rx] = self.parent[ry] = min(rx, ry)


@dataclass(frozen=True)
class RelationClass:
    """Word pairs connected through shared analogies."""

    pairs: tuple[tuple[str, str], ...]


def group_relations(analogies) -> list[RelationClass]:
    """Union word pairs linked by each analogy into equivalence classes.

    Every analogy links (w1, w2) with (w3, s) for each synset member s;
    classes are the connected components, each sorted, the list sorted by
    first pair.
    """
    uf = _UnionFind()
    for a in analogies:
        base = (a.w1, a.w2)
        uf.find(base)
        for s in a.synset:
            uf.union(base, (a.w3, s))
    groups: dict = {}
    for pair in uf.parent:
        groups.setdefault(uf.find(pair), set()).add(pair)
    classes = [RelationClass(tuple(sorted(g))) for g in groups.values()]
    return sorted(classes, key=lambda c: c.pairs[0])


# -- file formats --------------------------------------------------------------


def write_analogies(analogies, path) -> None:
    """analogies.tsv: w1, w2, w3, synset members joined by '|'."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for a in analogies:
            fh.write(f"{a.w1}\t{a.w2}\t{a.w3}\t{'|'.join(a.synset)}\n")


def read_analogies(path) -> list[Analogy]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ValueError(f"line {lineno}: expected 4 columns")
            w1, w2, w3, synset = fields
            members = tuple(sorted(set(synset.split("|"))))
            out.append(Analogy(w1, w2, w3, members))
    return out


def write_concept_analogies(cas, path) -> None:
    """concept_analogies.tsv: the annotation module's task source."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ca in cas:
            fh.write(
                f"{ca.left_word}\t{ca.left_sense}\t{ca.left_concept.key}\t"
                f"{ca.right_word}\t{ca.right_sense}\t{ca.right_concept.key}\n"
            )


def read_concept_analogies(path) -> list[ConceptAnalogy]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 6:
                raise ValueError(f"line {lineno}: expected 6 columns")
            lw, ls, lc, rw, rs, rc = fields
            out.append(
                ConceptAnalogy(
                    lw, int(ls), ConceptId.parse(lc), rw, int(rs), ConceptId.parse(rc)
                )
            )
    return out


def write_relation_classes(classes, path) -> None:
    """relations.tsv: class_id, word_a, word_b."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, cls in enumerate(classes):
            for wa, wb in cls.pairs:
                fh.write(f"{i}\t{wa}\t{wb}\n")

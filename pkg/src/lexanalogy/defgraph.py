"""Structured sense definitions: token classification, parsing, serialization.

A definition string like ``{InstitutePlace|場所:telic={or({experiment|實驗:
location={~}},{research|研究:location={~}})}}`` is parsed into a rooted,
edge-labeled graph.  Nodes are concepts ("english|中文"), bare words, function
heads such as ``or(...)``, or the self-reference ``~``.  Edges carry either
an attribute label or a 0-based function-argument ordinal.

Grammar (whitespace between tokens is ignored)::

    definition := "{" head attrs? "}"
    head       := "~" | concept | word | function
    function   := name "(" definition ("," definition)* ")"
    attrs      := ":" attr "=" definition ("," attr "=" definition)*

Graphs are trees except that every ``~`` in one definition shares a single
SELF node, so a definition with two self-references still has one SELF leaf.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

__all__ = [
    "TokenError",
    "ParseError",
    "GraphError",
    "TokenKind",
    "classify_token",
    "ConceptId",
    "NodeKind",
    "DefNode",
    "EdgeKind",
    "GraphEdge",
    "DefGraph",
    "parse_definition",
    "serialize_definition",
]

_DELIMITERS = set("{}():=,~|")


class TokenError(ValueError):
    """A token that fits no token kind."""


class ParseError(ValueError):
    """Malformed definition text; carries the UTF-8 byte offset of the fault."""

    def __init__(self, message: str, text: str, position: int):
        self.position = position
        self.offset = len(text[:position].encode("utf-8"))
        super().__init__(f"{message} at byte offset {self.offset}")


class GraphError(ValueError):
    """A definition graph violating its structural invariants."""


class TokenKind(Enum):
    WORD = "word"
    CONCEPT = "concept"
    ATTRIBUTE = "attribute"


@lru_cache(maxsize=4096)
def _is_latin_letter(ch: str) -> bool:
    # Script-based check: covers the full Latin repertoire, not an ASCII whitelist.
    return ch.isalpha() and unicodedata.name(ch, "").startswith("LATIN ")


def _is_attribute_shaped(token: str) -> bool:
    return bool(token) and all(_is_latin_letter(ch) for ch in token)


def _is_word_shaped(token: str) -> bool:
    return (
        bool(token)
        and "|" not in token
        and not any(_is_latin_letter(ch) for ch in token)
    )


@dataclass(frozen=True)
class ConceptId:
    """Ontology concept name with an English and a Chinese half.

    Equality and hashing ignore which half was written first ("help|幫助" and
    "幫助|help" are the same concept); the surface order is kept so that
    serialization reproduces the written form.
    """

    english: str
    chinese: str
    english_first: bool = field(default=True, compare=False)

    @classmethod
    def parse(cls, token: str) -> "ConceptId":
        parts = token.split("|")
        if len(parts) != 2:
            raise TokenError(f"concept token needs exactly one vertical bar: {token!r}")
        first, second = parts
        if _is_attribute_shaped(first) and _is_word_shaped(second):
            return cls(english=first, chinese=second, english_first=True)
        if _is_word_shaped(first) and _is_attribute_shaped(second):
            return cls(english=second, chinese=first, english_first=False)
        raise TokenError(
            f"concept token needs one Latin-letter half and one non-Latin half: {token!r}"
        )

    @property
    def key(self) -> str:
        """Canonical order-insensitive rendering, English half first."""
        return f"{self.english}|{self.chinese}"

    @property
    def text(self) -> str:
        """The written surface form."""
        if self.english_first:
            return f"{self.english}|{self.chinese}"
        return f"{self.chinese}|{self.english}"

    def __str__(self) -> str:
        return self.text


def classify_token(token: str) -> TokenKind:
    """Classify an ontology token as a word, a concept, or an attribute.

    Words contain no vertical bar and no Latin letters; concepts contain
    exactly one vertical bar splitting a Latin half from a non-Latin half
    (either order); attributes are Latin letters only.
    """
    if not token:
        raise TokenError("empty token")
    if token != token.strip():
        raise TokenError(f"token has surrounding whitespace: {token!r}")
    if "|" in token:
        ConceptId.parse(token)
        return TokenKind.CONCEPT
    if _is_attribute_shaped(token):
        return TokenKind.ATTRIBUTE
    if _is_word_shaped(token):
        return TokenKind.WORD
    raise TokenError(f"token matches no kind: {token!r}")


class NodeKind(Enum):
    CONCEPT = "concept"
    WORD = "word"
    FUNCTION = "function"
    SELF = "self"


@dataclass(frozen=True)
class DefNode:
    """One definition-graph node.

    CONCEPT nodes carry a ConceptId, WORD nodes a bare word surface,
    FUNCTION nodes a function name; SELF carries nothing.
    """

    kind: NodeKind
    concept: ConceptId | None = None
    label: str | None = None

    @property
    def text(self) -> str:
        if self.kind is NodeKind.CONCEPT:
            return self.concept.text
        if self.kind is NodeKind.SELF:
            return "~"
        return self.label


class EdgeKind(Enum):
    ATTRIBUTE = "attribute"
    ARG = "arg"


@dataclass(frozen=True)
class GraphEdge:
    source: int
    target: int
    kind: EdgeKind
    label: str | None = None  # attribute label
    index: int | None = None  # argument ordinal


class DefGraph:
    """Rooted, edge-labeled definition graph.

    Structurally a tree whose ``~`` references share one SELF leaf.  Equality
    and hashing are structural: node labels, attribute-edge labels (compared
    as a set per source), function names, and argument order all must match;
    the written order of concept halves does not.
    """

    __slots__ = ("nodes", "edges", "root", "_out", "_canon")

    def __init__(self, nodes, edges, root: int):
        self.nodes: tuple[DefNode, ...] = tuple(nodes)
        self.edges: tuple[GraphEdge, ...] = tuple(edges)
        self.root = root
        self._out = None
        self._canon = None

    # -- structure helpers -------------------------------------------------

    def _outgoing(self) -> dict[int, list[GraphEdge]]:
        if self._out is None:
            out: dict[int, list[GraphEdge]] = {i: [] for i in range(len(self.nodes))}
            for e in self.edges:
                out[e.source].append(e)
            self._out = out
        return self._out

    def attribute_edges(self, i: int) -> list[GraphEdge]:
        return [e for e in self._outgoing()[i] if e.kind is EdgeKind.ATTRIBUTE]

    def arg_targets(self, i: int) -> list[int]:
        args = [e for e in self._outgoing()[i] if e.kind is EdgeKind.ARG]
        return [e.target for e in sorted(args, key=lambda e: e.index)]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def is_single_concept(self) -> bool:
        return len(self.nodes) == 1 and self.nodes[self.root].kind is NodeKind.CONCEPT

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        """Raise GraphError unless the graph satisfies its invariants."""
        n = len(self.nodes)
        if not 0 <= self.root < n:
            raise GraphError(f"root index {self.root} out of range")
        indegree = [0] * n
        for e in self.edges:
            if not (0 <= e.source < n and 0 <= e.target < n):
                raise GraphError(f"edge endpoint out of range: {e}")
            indegree[e.target] += 1
            src = self.nodes[e.source]
            if src.kind is NodeKind.SELF:
                raise GraphError("SELF node has an outgoing edge")
            if e.kind is EdgeKind.ARG and src.kind is not NodeKind.FUNCTION:
                raise GraphError("argument edge from a non-function node")
            if e.kind is EdgeKind.ATTRIBUTE and e.label is None:
                raise GraphError("attribute edge without a label")
        if indegree[self.root] != 0:
            raise GraphError("root has an incoming edge")
        for i, node in enumerate(self.nodes):
            if i != self.root and indegree[i] == 0:
                raise GraphError(f"unreachable node {i} ({node.text})")
            if indegree[i] > 1 and node.kind is not NodeKind.SELF:
                raise GraphError(f"node {i} ({node.text}) has multiple parents")
            args = [e for e in self._outgoing()[i] if e.kind is EdgeKind.ARG]
            if node.kind is NodeKind.FUNCTION:
                if not args:
                    raise GraphError(f"function node {node.label!r} has no arguments")
                if sorted(e.index for e in args) != list(range(len(args))):
                    raise GraphError(
                        f"argument ordinals under {node.label!r} not consecutive from 0"
                    )
        # In-degree <=1 for non-SELF nodes plus a 0-indegree root makes cycles
        # impossible once every node is reachable, so only reachability is left.
        seen = set()
        stack = [self.root]
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            stack.extend(e.target for e in self._outgoing()[i])
        if len(seen) != n:
            missing = sorted(set(range(n)) - seen)
            raise GraphError(f"unreachable nodes: {missing}")
        # Duplicate (source, label, value) attribute edges.
        for i in range(n):
            rendered = [
                (e.label, self._render(e.target, canonical=True))
                for e in self.attribute_edges(i)
            ]
            if len(rendered) != len(set(rendered)):
                raise GraphError(f"duplicate attribute value under node {i}")

    # -- rendering ----------------------------------------------------------

    def _render(self, i: int, canonical: bool) -> str:
        node = self.nodes[i]
        if node.kind is NodeKind.SELF:
            head = "~"
        elif node.kind is NodeKind.CONCEPT:
            head = node.concept.key if canonical else node.concept.text
        elif node.kind is NodeKind.FUNCTION:
            args = ",".join(self._render(t, canonical) for t in self.arg_targets(i))
            head = f"{node.label}({args})"
        else:
            head = node.label
        attrs = sorted(
            (e.label, self._render(e.target, canonical))
            for e in self.attribute_edges(i)
        )
        if attrs:
            tail = ":" + ",".join(f"{label}={value}" for label, value in attrs)
        else:
            tail = ""
        return "{" + head + tail + "}"

    def canonical_key(self) -> str:
        """Order-insensitive structural fingerprint; equal graphs share it."""
        if self._canon is None:
            self._canon = self._render(self.root, canonical=True)
        return self._canon

    def subtree_key(self, i: int) -> str:
        return self._render(i, canonical=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DefGraph):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def __repr__(self) -> str:
        return f"DefGraph({serialize_definition(self)!r})"

    # -- export formats -----------------------------------------------------

    def to_payload(self) -> dict:
        """JSON-ready node/edge listing (the annotation API wire format)."""
        nodes = [
            {"id": i, "kind": node.kind.value, "label": node.text}
            for i, node in enumerate(self.nodes)
        ]
        edges = []
        for e in self.edges:
            item = {"source": e.source, "target": e.target, "kind": e.kind.value}
            if e.kind is EdgeKind.ATTRIBUTE:
                item["label"] = e.label
            else:
                item["index"] = e.index
            edges.append(item)
        return {"root": self.root, "nodes": nodes, "edges": edges}

    def to_listing(self) -> str:
        """Plain-text node/edge listing for terminal output."""
        lines = [f"root\t{self.root}"]
        for i, node in enumerate(self.nodes):
            lines.append(f"node\t{i}\t{node.kind.value}\t{node.text}")
        for e in self.edges:
            tag = e.label if e.kind is EdgeKind.ATTRIBUTE else f"arg{e.index}"
            lines.append(f"edge\t{e.source}\t{e.target}\t{tag}")
        return "\n".join(lines)

    def to_dot(self) -> str:
        """Graph-description output for external rendering."""
        lines = ["digraph definition {", "  rankdir=TB;"]
        for i, node in enumerate(self.nodes):
            shape = {
                NodeKind.CONCEPT: "box",
                NodeKind.WORD: "ellipse",
                NodeKind.FUNCTION: "diamond",
                NodeKind.SELF: "circle",
            }[node.kind]
            label = node.text.replace('"', '\\"')
            lines.append(f'  n{i} [label="{label}", shape={shape}];')
        for e in self.edges:
            tag = e.label if e.kind is EdgeKind.ATTRIBUTE else f"arg {e.index}"
            lines.append(f'  n{e.source} -> n{e.target} [label="{tag}"];')
        lines.append("}")
        return "\n".join(lines)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.nodes: list[DefNode] = []
        self.edges: list[GraphEdge] = []
        self.self_index: int | None = None

    def fail(self, message: str, position: int | None = None) -> "ParseError":
        return ParseError(message, self.text, self.pos if position is None else position)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str, what: str) -> None:
        if self.peek() != ch:
            raise self.fail(what)
        self.pos += 1

    def read_token(self) -> tuple[str, int]:
        start = self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in _DELIMITERS and ch != "|" or ch.isspace():
                break
            self.pos += 1
        token = self.text[start : self.pos]
        if not token:
            raise self.fail("expected a token", start)
        return token, start

    def add_node(self, node: DefNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def self_node(self) -> int:
        # All "~" in one definition stand for the same head: share one node.
        if self.self_index is None:
            self.self_index = self.add_node(DefNode(NodeKind.SELF))
        return self.self_index

    def parse(self) -> DefGraph:
        root = self.parse_definition()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.fail("unexpected trailing text")
        return DefGraph(self.nodes, self.edges, root)

    def parse_definition(self) -> int:
        self.skip_ws()
        self.expect("{", "expected '{'")
        self.skip_ws()
        is_self = False
        if self.peek() == "~":
            self.pos += 1
            head = self.self_node()
            is_self = True
        elif self.peek() == "}":
            raise self.fail("missing head")
        else:
            head = self._parse_head()
        self.skip_ws()
        if self.peek() == ":":
            if is_self:
                raise self.fail("self-reference cannot take attributes")
            self.pos += 1
            self._parse_attributes(head)
        self.skip_ws()
        self.expect("}", "unbalanced braces: expected '}'")
        return head

    def _parse_head(self) -> int:
        token, start = self.read_token()
        self.skip_ws()
        if self.peek() == "(":
            if not _is_attribute_shaped(token):
                raise self.fail(f"function name must be Latin letters: {token!r}", start)
            node = self.add_node(DefNode(NodeKind.FUNCTION, label=token))
            self.pos += 1
            self.skip_ws()
            if self.peek() == ")":
                raise self.fail("empty argument list")
            ordinal = 0
            while True:
                target = self.parse_definition()
                self.edges.append(GraphEdge(node, target, EdgeKind.ARG, index=ordinal))
                ordinal += 1
                self.skip_ws()
                if self.peek() == ",":
                    self.pos += 1
                    continue
                self.expect(")", "unbalanced parentheses: expected ')'")
                break
            return node
        if "|" in token:
            try:
                concept = ConceptId.parse(token)
            except TokenError as exc:
                raise self.fail(str(exc), start) from exc
            return self.add_node(DefNode(NodeKind.CONCEPT, concept=concept))
        if _is_word_shaped(token):
            return self.add_node(DefNode(NodeKind.WORD, label=token))
        raise self.fail(f"invalid head token: {token!r}", start)

    def _parse_attributes(self, source: int) -> None:
        seen: set[tuple[str, str]] = set()
        while True:
            self.skip_ws()
            label, start = self.read_token()
            if not _is_attribute_shaped(label):
                raise self.fail(f"attribute label must be Latin letters: {label!r}", start)
            self.skip_ws()
            self.expect("=", f"attribute {label!r} without value")
            self.skip_ws()
            if self.peek() != "{":
                raise self.fail(f"attribute {label!r} without braced value")
            target = self.parse_definition()
            key = (label, self._subtree_key(target))
            if key in seen:
                raise self.fail(f"duplicate value for attribute {label!r}", start)
            seen.add(key)
            self.edges.append(GraphEdge(source, target, EdgeKind.ATTRIBUTE, label=label))
            self.skip_ws()
            if self.peek() == ",":
                self.pos += 1
                continue
            return

    def _subtree_key(self, i: int) -> str:
        # Render from the partial node/edge lists built so far.
        graph = DefGraph(self.nodes, self.edges, 0)
        return graph._render(i, canonical=True)


def parse_definition(text: str) -> DefGraph:
    """Parse one brace-delimited definition string into a DefGraph.

    Raises ParseError (with a UTF-8 byte offset) on malformed input.
    """
    return _Parser(text).parse()


def serialize_definition(graph: DefGraph) -> str:
    """Canonical text form of a graph; the inverse of parse_definition.

    Attribute edges are emitted in lexicographic label order (ties broken by
    the value's canonical form) and function arguments in ordinal order.
    Concept names keep their written half-order.  Raises GraphError on a
    malformed graph.
    """
    graph.validate()
    return graph._render(graph.root, canonical=False)

"""Domain types shared by every stage: documents, argument graphs and label schemes."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

RESERVED_TOKENS = frozenset({"[", "]", "|", "="})


def tokenize(text: str) -> list[str]:
    """Canonical tokenizer: split on Unicode whitespace, nothing else."""
    return text.split()


def word_offsets(text: str) -> list[tuple[int, int]]:
    return [(m.start(), m.end()) for m in re.finditer(r"\S+", text)]


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    words: tuple[str, ...] = ()
    word_char_offsets: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        words = tuple(tokenize(self.text))
        if self.words and tuple(self.words) != words:
            raise ValueError(f"document {self.id!r}: words do not match tokenized text")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "word_char_offsets", tuple(word_offsets(self.text)))

    @classmethod
    def from_words(cls, doc_id: str, words: Iterable[str]) -> "Document":
        return cls(doc_id, " ".join(words))

    def __len__(self):
        return len(self.words)

    def span_words(self, span: "WordSpan") -> tuple[str, ...]:
        return self.words[span.start:span.end]


@dataclass(frozen=True, order=True)
class WordSpan:
    """Half-open word interval ``[start, end)``."""

    start: int
    end: int

    def __len__(self):
        return self.end - self.start

    def overlaps(self, other: "WordSpan") -> bool:
        return self.start < other.end and other.start < self.end

    def intersection(self, other: "WordSpan") -> int:
        return max(0, min(self.end, other.end) - max(self.start, other.start))

    def distance(self, other: "WordSpan") -> int:
        """Number of words strictly between the two spans (0 if touching or overlapping)."""
        if self.overlaps(other):
            return 0
        if self.end <= other.start:
            return other.start - self.end
        return self.start - other.end


@dataclass(frozen=True)
class Component:
    span: WordSpan
    label: str


@dataclass(frozen=True)
class Relation:
    source: int
    target: int
    label: str


@dataclass(frozen=True)
class ArgumentGraph:
    components: tuple[Component, ...] = ()
    relations: tuple[Relation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "relations", tuple(self.relations))

    def relation_set(self) -> set[tuple[WordSpan, WordSpan, str]]:
        """Relations keyed by spans, independent of component indexing and order."""
        comps = self.components
        return {(comps[r.source].span, comps[r.target].span, r.label) for r in self.relations}

    def same_as(self, other: "ArgumentGraph") -> bool:
        """Equality up to relation ordering."""
        return (self.components == other.components
                and sorted(self.relations, key=_rel_key) == sorted(other.relations, key=_rel_key))

    def out_degree(self) -> list[int]:
        deg = [0] * len(self.components)
        for r in self.relations:
            if 0 <= r.source < len(deg):
                deg[r.source] += 1
        return deg


def _rel_key(r: Relation):
    return (r.source, r.target, r.label)


def surface_form(label: str) -> str:
    """``ClaimFor`` -> ``claim for``; ``Partial-Attack`` -> ``partial attack``."""
    words = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", label)
    words = re.sub(r"[-_]+", " ", words)
    return " ".join(words.lower().split())


def _surface_key(surface: str) -> str:
    return re.sub(r"[\s\-_]+", "", surface.lower())


@dataclass(frozen=True)
class LabelScheme:
    name: str
    component_labels: tuple[str, ...]
    relation_labels: tuple[str, ...]
    multi_parent_allowed: bool
    eval_label_map: Mapping[str, str] = field(default_factory=dict)

    def eval_label(self, label: str) -> str:
        return self.eval_label_map.get(label, label)

    @property
    def eval_component_labels(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.eval_label(c) for c in self.component_labels))

    def component_surface(self, label: str) -> str:
        return surface_form(label)

    def relation_surface(self, label: str) -> str:
        return surface_form(label)

    def component_from_surface(self, surface: str) -> str | None:
        return _lookup(self.component_labels, surface)

    def relation_from_surface(self, surface: str) -> str | None:
        return _lookup(self.relation_labels, surface)


def _lookup(labels: Iterable[str], surface: str) -> str | None:
    key = _surface_key(surface)
    if not key:
        return None
    for label in labels:
        if _surface_key(label) == key:
            return label
    return None


AAEC = LabelScheme(
    name="aaec",
    component_labels=("MajorClaim", "ClaimFor", "ClaimAgainst", "Premise"),
    relation_labels=("Support", "Attack"),
    multi_parent_allowed=False,
    eval_label_map={"ClaimFor": "Claim", "ClaimAgainst": "Claim"},
)

ABSTRCT = LabelScheme(
    name="abstrct",
    component_labels=("MajorClaim", "Claim", "Evidence"),
    relation_labels=("Support", "Attack", "Partial-Attack"),
    multi_parent_allowed=True,
)

CDCP = LabelScheme(
    name="cdcp",
    component_labels=("Fact", "Testimony", "Value", "Policy", "Reference"),
    relation_labels=("Reasons", "Evidence"),
    multi_parent_allowed=True,
)

SCHEMES = {s.name: s for s in (AAEC, ABSTRCT, CDCP)}


def get_scheme(name: str) -> LabelScheme:
    try:
        return SCHEMES[name]
    except KeyError:
        raise KeyError(f"unknown label scheme {name!r}; known: {', '.join(SCHEMES)}") from None


@dataclass(frozen=True, order=True)
class Violation:
    kind: str
    detail: str


def validate_graph(doc: Document, graph: ArgumentGraph, scheme: LabelScheme) -> list[Violation]:
    """Check every structural invariant of ``graph``; an empty list means valid."""
    out = []
    n = len(doc.words)
    comps = graph.components
    for i, c in enumerate(comps):
        if not 0 <= c.span.start < c.span.end <= n:
            out.append(Violation("invalid span", f"component {i} span ({c.span.start}, {c.span.end}) outside 0..{n}"))
        if c.label not in scheme.component_labels:
            out.append(Violation("unknown component label", f"component {i} label {c.label!r}"))
    for i in range(1, len(comps)):
        if comps[i].span.start < comps[i - 1].span.start:
            out.append(Violation("unsorted components", f"component {i} starts before component {i - 1}"))
    # adjacent pairs in start order suffice to find every overlap
    ordered = sorted(range(len(comps)), key=lambda k: comps[k].span)
    for x, y in zip(ordered, ordered[1:]):
        if comps[x].span.overlaps(comps[y].span):
            out.append(Violation("overlapping spans", f"components {min(x, y)} and {max(x, y)}"))

    seen = set()
    edges = []
    for r in graph.relations:
        tag = f"relation {r.source}->{r.target} {r.label!r}"
        if r.label not in scheme.relation_labels:
            out.append(Violation("unknown relation label", tag))
        if not (0 <= r.source < len(comps) and 0 <= r.target < len(comps)):
            out.append(Violation("invalid relation index", tag))
            continue
        if r.source == r.target:
            out.append(Violation("self relation", tag))
            continue
        key = (r.source, r.target, r.label)
        if key in seen:
            out.append(Violation("duplicate relation", tag))
            continue
        seen.add(key)
        edges.append((r.source, r.target))

    if not scheme.multi_parent_allowed:
        parents = defaultdict(set)
        for s, t in edges:
            parents[s].add(t)
        for s in sorted(parents):
            if len(parents[s]) > 1:
                out.append(Violation("multi-parent forbidden",
                                     f"component {s} has {len(parents[s])} outgoing relations"))

    cyclic = _cyclic_nodes(len(comps), set(edges))
    if cyclic:
        out.append(Violation("cycle detected", f"components {sorted(cyclic)}"))
    return sorted(set(out))


def _cyclic_nodes(n: int, edges: set[tuple[int, int]]) -> set[int]:
    """Nodes left after repeatedly stripping sources and sinks."""
    alive = set(range(n))
    edges = set(edges)
    changed = True
    while changed:
        changed = False
        has_in = {t for _, t in edges}
        has_out = {s for s, _ in edges}
        drop = {v for v in alive if v not in has_in or v not in has_out}
        if drop:
            alive -= drop
            edges = {(s, t) for s, t in edges if s in alive and t in alive}
            changed = True
    return alive


def map_for_evaluation(graph: ArgumentGraph, scheme: LabelScheme) -> ArgumentGraph:
    comps = tuple(replace(c, label=scheme.eval_label(c.label)) for c in graph.components)
    return ArgumentGraph(comps, graph.relations)

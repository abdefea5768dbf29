"""Render an argument graph as bracket-annotated text.

A component without outgoing relations becomes ``[ span | label ]``, one with a
single parent ``[ span | label | relation = target span ]``.  Components with
several parents are written either as consecutive copies of the block, one
relation each (``repeated``), or as one block carrying every relation clause
(``serial``).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Literal

from .model import RESERVED_TOKENS, ArgumentGraph, Document, LabelScheme, validate_graph


class EncodeError(ValueError):
    pass


class ReservedTokenInInput(EncodeError):
    pass


class SchemeMismatch(EncodeError):
    pass


class InvalidGraph(EncodeError):
    pass


@dataclass(frozen=True)
class EncodeOptions:
    include_nonargumentative: bool = False
    multi_parent_repr: Literal["repeated", "serial"] = "serial"

    def __post_init__(self):
        if self.multi_parent_repr not in ("repeated", "serial"):
            raise ValueError(f"multi_parent_repr must be 'repeated' or 'serial', got {self.multi_parent_repr!r}")


@dataclass(frozen=True)
class AugmentedText:
    text: str
    options: EncodeOptions
    scheme_name: str

    def __str__(self):
        return self.text

    @property
    def words(self) -> list[str]:
        return self.text.split()


def check_reserved(doc: Document) -> None:
    for i, w in enumerate(doc.words):
        if w in RESERVED_TOKENS:
            raise ReservedTokenInInput(f"document {doc.id!r}: word {i} is the reserved token {w!r}")


def encode(doc: Document, graph: ArgumentGraph, scheme: LabelScheme,
           opts: EncodeOptions = EncodeOptions()) -> AugmentedText:
    check_reserved(doc)
    problems = validate_graph(doc, graph, scheme)
    if problems:
        label_kinds = {"unknown component label", "unknown relation label"}
        if any(p.kind in label_kinds for p in problems):
            raise SchemeMismatch("; ".join(p.detail for p in problems if p.kind in label_kinds))
        raise InvalidGraph("; ".join(f"{p.kind}: {p.detail}" for p in problems))

    comps = graph.components
    outgoing = defaultdict(list)
    for r in graph.relations:
        outgoing[r.source].append(r)
    for rels in outgoing.values():
        rels.sort(key=lambda r: (comps[r.target].span.start, r.label))
    serial = not scheme.multi_parent_allowed or opts.multi_parent_repr == "serial"

    out: list[str] = []
    cursor = 0
    for i, comp in enumerate(comps):
        if opts.include_nonargumentative:
            out.extend(doc.words[cursor:comp.span.start])
        head = ["[", *doc.span_words(comp.span), "|", *scheme.component_surface(comp.label).split()]
        clauses = [
            ["|", *scheme.relation_surface(r.label).split(), "=", *doc.span_words(comps[r.target].span)]
            for r in outgoing[i]
        ]
        if not clauses:
            out += head + ["]"]
        elif serial:
            out += head + [w for c in clauses for w in c] + ["]"]
        else:
            for c in clauses:
                out += head + c + ["]"]
        cursor = comp.span.end
    if opts.include_nonargumentative:
        out.extend(doc.words[cursor:])
    return AugmentedText(" ".join(out), opts, scheme.name)


def nonargumentative_words(doc: Document, graph: ArgumentGraph) -> int:
    covered = sum(len(c.span) for c in graph.components)
    return len(doc.words) - covered


def expected_token_savings(doc: Document, graph: ArgumentGraph) -> float:
    """Fraction of document words that eliminating non-argumentative text drops."""
    if not doc.words:
        return 0.0
    return nonargumentative_words(doc, graph) / len(doc.words)

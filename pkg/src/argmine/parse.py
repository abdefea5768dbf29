"""Turn generated bracket-annotated text back into an argument graph.

Generation is noisy, so nothing here raises on bad input.  Problems are
reported as :class:`Diagnostic` records and the offending piece is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .align import AlignmentParams, nw_align, same_word
from .model import ArgumentGraph, Component, Document, LabelScheme, Relation, WordSpan, validate_graph


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    detail: str = ""


@dataclass(frozen=True)
class RawBlock:
    span_words: tuple[str, ...]
    component_surface: str
    label: str
    rel_clauses: tuple[tuple[str, tuple[str, ...]], ...]
    source_position: int
    # plain words between the previous kept block and this one
    preceding_words: tuple[str, ...] = ()


@dataclass(frozen=True)
class SpanCandidate:
    span: WordSpan
    label: str
    identity: float
    blocks: tuple[int, ...]  # source_position of every block folded into this component


@dataclass
class ParseReport:
    graph: ArgumentGraph
    diagnostics: list[Diagnostic] = field(default_factory=list)
    dropped_blocks: int = 0
    unresolved_targets: int = 0

    def summary(self) -> dict:
        kinds: dict[str, int] = {}
        for d in self.diagnostics:
            kinds[d.kind] = kinds.get(d.kind, 0) + 1
        return {
            "components": len(self.graph.components),
            "relations": len(self.graph.relations),
            "dropped_blocks": self.dropped_blocks,
            "unresolved_targets": self.unresolved_targets,
            "diagnostics": dict(sorted(kinds.items())),
        }


def _split(tokens: list[str], sep: str) -> list[list[str]]:
    parts: list[list[str]] = [[]]
    for t in tokens:
        if t == sep:
            parts.append([])
        else:
            parts[-1].append(t)
    return parts


def tolerant_parse(generated: str, scheme: LabelScheme) -> tuple[list[RawBlock], list[Diagnostic]]:
    blocks, _, diags = scan(generated, scheme)
    return blocks, diags


def scan(generated: str, scheme: LabelScheme) -> tuple[list[RawBlock], list[str], list[Diagnostic]]:
    """Like :func:`tolerant_parse`, also returning the plain words after the last block."""
    tokens = generated.split()
    blocks: list[RawBlock] = []
    diags: list[Diagnostic] = []
    plain: list[str] = []
    position = 0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "]":
            diags.append(Diagnostic("StrayBracket", f"unmatched ']' at token {i}"))
            i += 1
            continue
        if tok != "[":
            plain.append(tok)
            i += 1
            continue
        k = i + 1
        while k < len(tokens) and tokens[k] != "]":
            k += 1
        if k == len(tokens):
            diags.append(Diagnostic("UnbalancedBracket", f"'[' at token {i} never closed"))
        inner = tokens[i + 1:k]
        if "[" in inner:
            diags.append(Diagnostic("StrayBracket", f"nested '[' inside block at token {i}"))
            inner = [t for t in inner if t != "["]
        i = k + 1
        pos = position
        position += 1

        parts = _split(inner, "|")
        span_words = parts[0]
        if not span_words:
            diags.append(Diagnostic("EmptySpan", f"block {pos}"))
            continue
        if len(parts) < 2:
            diags.append(Diagnostic("MissingComponentLabel", f"block {pos}: {' '.join(span_words)!r}"))
            plain.extend(span_words)
            continue
        surface = " ".join(parts[1])
        label = scheme.component_from_surface(surface)
        if label is None:
            diags.append(Diagnostic("UnknownComponentLabel", f"block {pos}: {surface!r}"))
            plain.extend(span_words)
            continue
        clauses = []
        for part in parts[2:]:
            if "=" not in part:
                diags.append(Diagnostic("MalformedRelationClause", f"block {pos}: {' '.join(part)!r}"))
                continue
            eq = part.index("=")
            rel, target = part[:eq], part[eq + 1:]
            if not rel or not target:
                diags.append(Diagnostic("MalformedRelationClause", f"block {pos}: {' '.join(part)!r}"))
                continue
            clauses.append((" ".join(rel), tuple(target)))
        blocks.append(RawBlock(tuple(span_words), surface, label, tuple(clauses), pos, tuple(plain)))
        plain = []
    return blocks, plain, diags


def _is_repeat(prev: RawBlock, cur: RawBlock) -> bool:
    """Consecutive copies of one multi-parent component (repeated representation)."""
    return (not cur.preceding_words
            and prev.label == cur.label
            and bool(prev.rel_clauses) and bool(cur.rel_clauses)
            and len(prev.span_words) == len(cur.span_words)
            and all(same_word(a, b) for a, b in zip(prev.span_words, cur.span_words)))


def recover_spans(blocks: list[RawBlock], doc: Document,
                  params: AlignmentParams = AlignmentParams(),
                  trailing_words: tuple[str, ...] | list[str] = ()) -> tuple[list[SpanCandidate], list[Diagnostic]]:
    """Locate each block's span in ``doc`` by aligning the generated text to it.

    The generated surface (plain words plus block spans, annotation removed) is
    aligned to the document as a whole.  A block maps to the interval covering
    the source positions its words aligned to.  Among equally scoring
    alignments, ones that keep each block contiguous in the source win.
    """
    diags: list[Diagnostic] = []
    surface: list[str] = []
    owner: list[int | None] = []
    roots: list[int] = []          # index into blocks of each distinct component
    folded: dict[int, list[int]] = {}
    for b_idx, block in enumerate(blocks):
        if roots and _is_repeat(blocks[roots[-1]], block):
            folded[roots[-1]].append(b_idx)
            continue
        surface.extend(block.preceding_words)
        owner.extend([None] * len(block.preceding_words))
        surface.extend(block.span_words)
        owner.extend([b_idx] * len(block.span_words))
        roots.append(b_idx)
        folded[b_idx] = [b_idx]
    surface.extend(trailing_words)
    owner.extend([None] * len(trailing_words))
    if not roots or not doc.words:
        for r in roots:
            diags.append(Diagnostic("UnalignedSpan", f"block {blocks[r].source_position}"))
        return [], diags

    n = len(surface)
    pen = [0] * (n + 1)
    for i in range(1, n):
        if owner[i] is not None and owner[i] == owner[i - 1]:
            pen[i] = 1
    pairs = nw_align(surface, doc.words, params, pen)

    positions: dict[int, list[int]] = {r: [] for r in roots}
    matches: dict[int, int] = {r: 0 for r in roots}
    for gi, sj in pairs:
        if gi is None or sj is None or owner[gi] is None:
            continue
        positions[owner[gi]].append(sj)
        if same_word(surface[gi], doc.words[sj]):
            matches[owner[gi]] += 1

    cands: list[SpanCandidate] = []
    for r in roots:
        block = blocks[r]
        pos = positions[r]
        if not pos:
            diags.append(Diagnostic("UnalignedSpan", f"block {block.source_position}"))
            continue
        identity = matches[r] / len(block.span_words)
        if identity < params.min_span_identity:
            diags.append(Diagnostic("LowSpanIdentity", f"block {block.source_position}: identity {identity:.2f}"))
            continue
        cands.append(SpanCandidate(WordSpan(min(pos), max(pos) + 1), block.label, identity,
                                   tuple(blocks[k].source_position for k in folded[r])))

    kept: list[SpanCandidate] = []
    for c in sorted(cands, key=lambda c: (-c.identity, c.blocks[0])):
        clash = next((k for k in kept if k.span.overlaps(c.span)), None)
        if clash is not None:
            diags.append(Diagnostic("OverlappingSpan", f"block {c.blocks[0]} overlaps block {clash.blocks[0]}"))
            continue
        kept.append(c)
    kept.sort(key=lambda c: c.span)
    return kept, diags


def _target_identity(target: tuple[str, ...], words: tuple[str, ...], params: AlignmentParams) -> float:
    pairs = nw_align(target, words, params)
    hits = sum(1 for gi, sj in pairs if gi is not None and sj is not None and same_word(target[gi], words[sj]))
    return hits / max(len(target), len(words))


def resolve_targets(blocks: list[RawBlock], components: list[SpanCandidate], doc: Document,
                    scheme: LabelScheme, params: AlignmentParams = AlignmentParams()
                    ) -> tuple[list[Relation], list[Diagnostic], int]:
    """Attach every relation clause to a recovered component.

    Returns the relations (indexed into ``components``), diagnostics and the
    number of clauses whose target could not be resolved.
    """
    diags: list[Diagnostic] = []
    unresolved = 0
    by_block = {p: idx for idx, c in enumerate(components) for p in c.blocks}
    texts = [tuple(w.casefold() for w in doc.span_words(c.span)) for c in components]
    relations: list[Relation] = []
    seen = set()
    for block in blocks:
        for rel_surface, target in block.rel_clauses:
            label = scheme.relation_from_surface(rel_surface)
            if label is None:
                diags.append(Diagnostic("UnknownRelationLabel", f"block {block.source_position}: {rel_surface!r}"))
                continue
            src = by_block.get(block.source_position)
            if src is None:
                unresolved += 1
                diags.append(Diagnostic("UnresolvedTarget",
                                        f"block {block.source_position}: source span was not recovered"))
                continue
            key = tuple(w.casefold() for w in target)
            exact = [k for k, t in enumerate(texts) if t == key and k != src]
            if len(exact) > 1:
                src_span = components[src].span
                exact.sort(key=lambda k: (components[k].span.distance(src_span), components[k].span.start))
                diags.append(Diagnostic("AmbiguousTarget",
                                        f"block {block.source_position}: {len(exact)} candidates, chose nearest"))
            if exact:
                tgt = exact[0]
            else:
                scored = [(_target_identity(target, doc.span_words(c.span), params), -k)
                          for k, c in enumerate(components) if k != src]
                best = max(scored, default=None)
                if best is None or best[0] < params.min_span_identity:
                    unresolved += 1
                    diags.append(Diagnostic("UnresolvedTarget",
                                            f"block {block.source_position}: {' '.join(target)!r}"))
                    continue
                tgt = -best[1]
                diags.append(Diagnostic("FuzzyTarget",
                                        f"block {block.source_position}: identity {best[0]:.2f}"))
            triple = (src, tgt, label)
            if triple in seen:
                continue
            seen.add(triple)
            relations.append(Relation(src, tgt, label))
    return relations, diags, unresolved


def parse_and_align(generated: str, doc: Document, scheme: LabelScheme,
                    params: AlignmentParams = AlignmentParams()) -> ParseReport:
    blocks, trailing, diags = scan(generated, scheme)
    parsed_drops = sum(1 for d in diags if d.kind in _DROP_KINDS)
    cands, span_diags = recover_spans(blocks, doc, params, trailing)
    relations, rel_diags, unresolved = resolve_targets(blocks, cands, doc, scheme, params)
    recovered = {p for c in cands for p in c.blocks}
    graph = ArgumentGraph(tuple(Component(c.span, c.label) for c in cands), tuple(relations))
    # cycles and extra parents are kept (and scored) but reported
    graph_diags = [Diagnostic("StructureViolation", f"{v.kind}: {v.detail}")
                   for v in validate_graph(doc, graph, scheme) if v.kind in _GRAPH_KINDS]
    return ParseReport(
        graph=graph,
        diagnostics=diags + span_diags + rel_diags + graph_diags,
        dropped_blocks=parsed_drops + sum(1 for b in blocks if b.source_position not in recovered),
        unresolved_targets=unresolved,
    )


_DROP_KINDS = {"EmptySpan", "MissingComponentLabel", "UnknownComponentLabel"}
_GRAPH_KINDS = {"cycle detected", "multi-parent forbidden"}

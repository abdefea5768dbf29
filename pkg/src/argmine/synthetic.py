"""Random well-formed (document, graph) pairs for property tests and smoke runs."""

from __future__ import annotations

import random

from .model import ArgumentGraph, Component, Document, LabelScheme, Relation, WordSpan

FUNCTION_WORDS = ("the", "a", "of", "to", "and", "is", ",", ".", "that", "in")


def _vocabulary(size: int) -> list[str]:
    syllables = ["ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "pu", "de", "fi"]
    words = []
    for a in syllables:
        for b in syllables:
            for c in ("", "n", "s", "r"):
                words.append(a + b + c)
    return words[:size]


VOCAB = _vocabulary(400)


def placements(doc: Document, graph: ArgumentGraph, limit: int = 2) -> int:
    """Count the ways to lay the component texts, in order and contiguously, over ``doc``.

    Once non-argumentative words are dropped from the annotated text, a graph can
    only be recovered when this count is 1.  Counting stops at ``limit``.
    """
    words = [w.casefold() for w in doc.words]
    n = len(words)
    # ways[p]: placements of the blocks seen so far with the last one ending at or before p
    ways = [1] * (n + 1)
    for comp in graph.components:
        text = [w.casefold() for w in doc.span_words(comp.span)]
        k = len(text)
        ending = [0] * (n + 1)
        for start in range(n - k + 1):
            if words[start:start + k] == text:
                ending[start + k] = min(limit, ways[start])
        ways = [0] * (n + 1)
        run = 0
        for p in range(n + 1):
            run = min(limit, run + ending[p])
            ways[p] = run
    return ways[n]


def random_pair(rng: random.Random, scheme: LabelScheme, doc_id: str = "doc",
                max_words: int = 60, max_components: int = 6,
                full_coverage: bool = False) -> tuple[Document, ArgumentGraph]:
    """Draw a document and a graph valid under ``scheme``.

    Component texts are pairwise distinct, so relation targets (written as span
    text) are unambiguous, and the component sequence has a single placement in
    the document, so spans survive removal of the non-argumentative words.
    """
    while True:
        doc, graph = _draw(rng, scheme, doc_id, max_words, max_components, full_coverage)
        if placements(doc, graph) == 1:
            return doc, graph


def _draw(rng, scheme, doc_id, max_words, max_components, full_coverage):
    n_words = rng.randint(1, max_words)
    words = [rng.choice(FUNCTION_WORDS) if rng.random() < 0.3 else rng.choice(VOCAB) for _ in range(n_words)]

    k = rng.randint(0, min(max_components, n_words))
    cuts = sorted(rng.sample(range(n_words + 1), min(2 * k, n_words + 1)))
    spans = []
    for s, e in zip(cuts[::2], cuts[1::2]):
        if e > s:
            spans.append(WordSpan(s, e))
    if full_coverage:
        spans = _tile(rng, n_words, max_components)

    comps, texts = [], set()
    for sp in spans:
        text = tuple(words[sp.start:sp.end])
        if text in texts:
            continue
        texts.add(text)
        comps.append(Component(sp, rng.choice(scheme.component_labels)))

    relations = []
    order = list(range(len(comps)))
    rng.shuffle(order)
    rank = {c: r for r, c in enumerate(order)}
    for src in range(len(comps)):
        later = [t for t in range(len(comps)) if rank[t] > rank[src]]
        if not later or rng.random() < 0.3:
            continue
        max_out = 3 if scheme.multi_parent_allowed else 1
        for tgt in rng.sample(later, min(len(later), rng.randint(1, max_out))):
            relations.append(Relation(src, tgt, rng.choice(scheme.relation_labels)))
    relations.sort(key=lambda r: (r.source, r.target, r.label))
    return Document.from_words(doc_id, words), ArgumentGraph(tuple(comps), tuple(relations))


def _tile(rng: random.Random, n: int, max_components: int) -> list[WordSpan]:
    k = rng.randint(1, min(n, max_components))
    cuts = sorted(rng.sample(range(1, n), k - 1)) if k > 1 else []
    bounds = [0, *cuts, n]
    return [WordSpan(a, b) for a, b in zip(bounds, bounds[1:])]


def random_corpus(seed: int, scheme: LabelScheme, size: int, **kw) -> list[tuple[Document, ArgumentGraph]]:
    rng = random.Random(seed)
    return [random_pair(rng, scheme, f"{scheme.name}-{i:05d}", **kw) for i in range(size)]

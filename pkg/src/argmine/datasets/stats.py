from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..codec import EncodeOptions, encode, nonargumentative_words
from ..model import ArgumentGraph, Document, LabelScheme


@dataclass(frozen=True)
class CorpusStats:
    n_documents: int
    n_words: int
    n_components: int
    n_relations: int
    n_multi_parent_components: int
    pct_words_nonargumentative: float

    def line(self) -> str:
        return (f"{self.n_components} components, {self.n_relations} relations, "
                f"{self.n_multi_parent_components} multi-parent, "
                f"nonargumentative {self.pct_words_nonargumentative:.2f}% "
                f"({self.n_documents} documents, {self.n_words} words)")


def compute_stats(items: Iterable[tuple[Document, ArgumentGraph]]) -> CorpusStats:
    docs = words = comps = rels = multi = nonarg = 0
    for doc, graph in items:
        docs += 1
        words += len(doc.words)
        comps += len(graph.components)
        rels += len(graph.relations)
        multi += sum(1 for d in graph.out_degree() if d > 1)
        nonarg += nonargumentative_words(doc, graph)
    pct = 100.0 * nonarg / words if words else 0.0
    return CorpusStats(docs, words, comps, rels, multi, pct)


@dataclass(frozen=True)
class LengthStats:
    mean_words_with_nonarg: float
    mean_words_without_nonarg: float

    @property
    def ratio(self) -> float:
        """Mean target length with elimination over mean length without it."""
        if not self.mean_words_with_nonarg:
            return 1.0
        return self.mean_words_without_nonarg / self.mean_words_with_nonarg


def target_lengths(items: Iterable[tuple[Document, ArgumentGraph]], scheme: LabelScheme,
                   multi_parent_repr: str = "serial") -> LengthStats:
    full = short = n = 0
    for doc, graph in items:
        n += 1
        full += len(encode(doc, graph, scheme, EncodeOptions(True, multi_parent_repr)).words)
        short += len(encode(doc, graph, scheme, EncodeOptions(False, multi_parent_repr)).words)
    if not n:
        return LengthStats(0.0, 0.0)
    return LengthStats(full / n, short / n)

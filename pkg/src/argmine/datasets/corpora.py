"""Adapters for the AAEC, AbstRCT and CDCP corpora.

Each adapter reads the corpus in its published on-disk format and returns
``train``/``dev``/``test`` splits of (Document, ArgumentGraph) pairs.

AAEC (brat standoff, ``essayNNN.txt`` + ``essayNNN.ann``)::

    T1<TAB>MajorClaim 503 575<TAB>surface text
    A1<TAB>Stance T4 For
    R1<TAB>supports Arg1:T5 Arg2:T6

plus ``train-test-split.csv`` (``"essay001";"TRAIN"``).  Claims are fused with
their stance into ClaimFor / ClaimAgainst and claim-to-major-claim links are
left implicit.

AbstRCT (brat standoff in ``<set>_train``, ``<set>_dev``, ``<set>_test``
directories).  ``Premise`` entities become ``Evidence``.

CDCP (``NNNNN.txt`` + ``NNNNN.ann.json`` in ``train/`` and ``test/``)::

    {"prop_offsets": [[0, 76], ...], "prop_labels": ["value", ...],
     "reasons": [[[1, 2], 0], ...], "evidences": [...]}

A link ``[[a, b], c]`` means each proposition ``a..b`` (inclusive) points to
``c``.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ..model import (AAEC, ABSTRCT, CDCP, ArgumentGraph, Component, Document, LabelScheme, Relation,
                     WordSpan, validate_graph)
from .standoff import MalformedAnnotation, MissingStance, read_brat, tokenize_with_boundaries

SPLITS = ("train", "dev", "test")

AAEC_DEV_SIZE = 36
CDCP_DEV_FRACTION = 0.15


@dataclass
class CorpusSplit:
    name: str
    scheme: str
    items: list[tuple[Document, ArgumentGraph]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.items)

    def ids(self) -> list[str]:
        return [d.id for d, _ in self.items]


@dataclass
class Corpus:
    scheme: LabelScheme
    splits: dict[str, CorpusSplit]
    diagnostics: list[str] = field(default_factory=list)

    def items(self) -> list[tuple[Document, ArgumentGraph]]:
        return [it for name in SPLITS if name in self.splits for it in self.splits[name].items]


def _build_graph(doc_id: str, spans: dict[str, tuple[tuple[int, int], str]],
                 links: Iterable[tuple[str, str, str]], diags: list[str]) -> ArgumentGraph:
    order = sorted(spans, key=lambda k: spans[k][0])
    index = {k: i for i, k in enumerate(order)}
    comps = tuple(Component(WordSpan(*spans[k][0]), spans[k][1]) for k in order)
    rels, seen = [], set()
    for src, tgt, label in links:
        if src not in index or tgt not in index:
            diags.append(f"{doc_id}: relation {src}->{tgt} references an unknown component")
            continue
        key = (index[src], index[tgt], label)
        if key[0] == key[1]:
            diags.append(f"{doc_id}: self relation on {src} dropped")
            continue
        if key in seen:
            diags.append(f"{doc_id}: duplicate relation {src}->{tgt} {label} dropped")
            continue
        seen.add(key)
        rels.append(Relation(*key))
    return ArgumentGraph(comps, tuple(sorted(rels, key=lambda r: (r.source, r.target, r.label))))


def _document(doc_id: str, words: list[str]) -> Document:
    return Document.from_words(doc_id, words)


def _check(doc, graph, scheme, diags):
    for v in validate_graph(doc, graph, scheme):
        diags.append(f"{doc.id}: {v.kind}: {v.detail}")


def _carve(ids: list[str], n_dev: int, seed: int) -> set[str]:
    rng = random.Random(seed)
    pool = sorted(ids)
    rng.shuffle(pool)
    return set(pool[:n_dev])


# ---------------------------------------------------------------- AAEC

_AAEC_REL = {"supports": "Support", "support": "Support", "attacks": "Attack", "attack": "Attack"}


def _aaec_components(brat, diags):
    spans = {}
    stance = {a.target: a.value for a in brat.attributes if a.type == "Stance"}
    for ent in brat.entities.values():
        if ent.type == "Claim":
            value = stance.get(ent.id)
            if value not in ("For", "Against"):
                raise MissingStance(f"{brat.name}: claim {ent.id} has stance {value!r}")
            label = "Claim" + value
        elif ent.type in ("MajorClaim", "Premise"):
            label = ent.type
        else:
            diags.append(f"{brat.name}: entity type {ent.type!r} ignored")
            continue
        spans[ent.id] = ((ent.start, ent.end), label)
    links = []
    for r in brat.relations:
        label = _AAEC_REL.get(r.type.lower())
        if label is None:
            diags.append(f"{brat.name}: relation type {r.type!r} ignored")
            continue
        links.append((r.arg1, r.arg2, label))
    return spans, links


def _aaec_docs(brat, granularity, diags):
    spans, links = _aaec_components(brat, diags)
    bounds = {o for (s, e), _ in spans.values() for o in (s, e)}
    tt = tokenize_with_boundaries(brat.text, bounds)
    diags.extend(f"{brat.name}: {d}" for d in tt.diagnostics)
    words = tt.words
    word_spans = {k: (tt.word_span(s, e), lab) for k, ((s, e), lab) in spans.items()}
    if granularity == "essay":
        doc = _document(brat.name, words)
        graph = _build_graph(brat.name, word_spans, links, diags)
        return [(doc, graph)]

    out = []
    offset = 0
    paragraphs = []
    for line in brat.text.split("\n"):
        if line.strip():
            paragraphs.append((offset, offset + len(line)))
        offset += len(line) + 1
    owner = {}
    for p, (ps, pe) in enumerate(paragraphs):
        lo = next((k for k, t in enumerate(tt.tokens) if t.start >= ps), len(tt.tokens))
        hi = next((k for k, t in enumerate(tt.tokens) if t.start >= pe), len(tt.tokens))
        doc_id = f"{brat.name}_p{p}"
        local = {}
        for k, ((ws, we), lab) in word_spans.items():
            if lo <= ws and we <= hi:
                local[k] = ((ws - lo, we - lo), lab)
                owner[k] = p
        local_links = []
        for src, tgt, lab in links:
            if src in local and tgt in local:
                local_links.append((src, tgt, lab))
        graph = _build_graph(doc_id, local, local_links, diags)
        out.append((_document(doc_id, words[lo:hi]), graph))
    for src, tgt, _ in links:
        if src in owner and tgt in owner and owner[src] != owner[tgt]:
            diags.append(f"{brat.name}: cross-paragraph relation {src}->{tgt} dropped")
    return out


def _read_aaec_split(path: Path) -> dict[str, str]:
    found = sorted(path.rglob("train-test-split.csv"))
    if not found:
        raise FileNotFoundError(f"no train-test-split.csv under {path}")
    out = {}
    with found[0].open(encoding="utf-8") as fh:
        for row in csv.reader(fh, delimiter=";"):
            if len(row) >= 2 and row[0] != "ID":
                out[row[0].strip()] = row[1].strip().lower()
    return out


def ingest_aaec(path: str | Path, granularity: str = "essay", dev_ids: Iterable[str] | None = None,
                seed: int = 0) -> Corpus:
    """Ingest the Argument Annotated Essays corpus.

    ``dev_ids`` lists the essays held out from TRAIN as the dev set; without it
    ``AAEC_DEV_SIZE`` training essays are drawn with ``seed``.
    """
    if granularity not in ("essay", "paragraph"):
        raise ValueError("granularity must be 'essay' or 'paragraph'")
    path = Path(path)
    split_of = _read_aaec_split(path)
    txts = {p.stem: p for p in path.rglob("essay*.txt") if p.with_suffix(".ann").exists()}
    train_ids = [i for i, s in split_of.items() if s == "train" and i in txts]
    dev = set(dev_ids) if dev_ids is not None else _carve(train_ids, AAEC_DEV_SIZE, seed)
    diags: list[str] = []
    splits = {name: CorpusSplit(name, AAEC.name, meta={"granularity": granularity}) for name in SPLITS}
    if dev_ids is None:
        splits["dev"].meta["seed"] = seed
    for essay in sorted(split_of):
        if essay not in txts:
            diags.append(f"{essay}: listed in split file but missing on disk")
            continue
        name = "dev" if essay in dev else split_of[essay]
        for doc, graph in _aaec_docs(read_brat(txts[essay]), granularity, diags):
            _check(doc, graph, AAEC, diags)
            splits[name].items.append((doc, graph))
    return Corpus(AAEC, splits, diags)


# ---------------------------------------------------------------- AbstRCT

_ABSTRCT_COMP = {"majorclaim": "MajorClaim", "claim": "Claim", "premise": "Evidence", "evidence": "Evidence"}
_ABSTRCT_REL = {"support": "Support", "supports": "Support", "attack": "Attack", "attacks": "Attack",
                "partial-attack": "Partial-Attack", "partial_attack": "Partial-Attack"}


def _abstrct_item(brat, diags):
    spans = {}
    for ent in brat.entities.values():
        label = _ABSTRCT_COMP.get(ent.type.lower())
        if label is None:
            diags.append(f"{brat.name}: entity type {ent.type!r} ignored")
            continue
        spans[ent.id] = ((ent.start, ent.end), label)
    links = []
    for r in brat.relations:
        label = _ABSTRCT_REL.get(r.type.lower())
        if label is None:
            diags.append(f"{brat.name}: relation type {r.type!r} ignored")
            continue
        links.append((r.arg1, r.arg2, label))
    tt = tokenize_with_boundaries(brat.text, {o for (s, e), _ in spans.values() for o in (s, e)})
    diags.extend(f"{brat.name}: {d}" for d in tt.diagnostics)
    word_spans = {k: (tt.word_span(s, e), lab) for k, ((s, e), lab) in spans.items()}
    graph = _build_graph(brat.name, word_spans, links, diags)
    return _document(brat.name, tt.words), graph


def _abstrct_dir(path: Path, test_set: str, split: str) -> Path | None:
    for cand in sorted(path.rglob(f"{test_set}_{split}")):
        if cand.is_dir():
            return cand
    return None


def ingest_abstrct(path: str | Path, test_set: str = "neoplasm") -> Corpus:
    path = Path(path)
    diags: list[str] = []
    splits = {}
    seen: set[str] = set()
    # dev and test abstracts are removed from train if the train folder also holds them
    for name in ("test", "dev", "train"):
        d = _abstrct_dir(path, test_set, name)
        split = CorpusSplit(name, ABSTRCT.name, meta={"test_set": test_set})
        splits[name] = split
        if d is None:
            diags.append(f"no {test_set}_{name} directory under {path}")
            continue
        for txt in sorted(d.glob("*.txt")):
            if not txt.with_suffix(".ann").exists():
                continue
            if txt.stem in seen:
                diags.append(f"{txt.stem}: already in a held-out split, skipped in {name}")
                continue
            seen.add(txt.stem)
            doc, graph = _abstrct_item(read_brat(txt), diags)
            _check(doc, graph, ABSTRCT, diags)
            split.items.append((doc, graph))
    return Corpus(ABSTRCT, {n: splits[n] for n in SPLITS}, diags)


# ---------------------------------------------------------------- CDCP

_CDCP_COMP = {c.lower(): c for c in CDCP.component_labels}


def _cdcp_item(txt: Path, diags):
    ann = json.loads(txt.with_name(txt.stem + ".ann.json").read_text(encoding="utf-8"))
    text = txt.read_text(encoding="utf-8")
    try:
        offsets = ann["prop_offsets"]
        labels = ann["prop_labels"]
    except KeyError as exc:
        raise MalformedAnnotation(f"{txt}: missing {exc}") from None
    if len(offsets) != len(labels):
        raise MalformedAnnotation(f"{txt}: {len(offsets)} offsets for {len(labels)} labels")
    spans = {}
    for k, ((s, e), lab) in enumerate(zip(offsets, labels)):
        if lab.lower() not in _CDCP_COMP:
            raise MalformedAnnotation(f"{txt}: unknown proposition label {lab!r}")
        spans[str(k)] = ((s, e), _CDCP_COMP[lab.lower()])
    links = []
    for key, label in (("reasons", "Reasons"), ("evidences", "Evidence")):
        for entry in ann.get(key) or []:
            try:
                (a, b), tgt = entry
            except (TypeError, ValueError):
                raise MalformedAnnotation(f"{txt}: bad {key} entry {entry!r}") from None
            for src in range(int(a), int(b) + 1):
                links.append((str(src), str(tgt), label))
    doc_id = txt.stem
    tt = tokenize_with_boundaries(text, {o for (s, e), _ in spans.values() for o in (s, e)})
    diags.extend(f"{doc_id}: {d}" for d in tt.diagnostics)
    word_spans = {}
    for k, ((s, e), lab) in spans.items():
        try:
            word_spans[k] = (tt.word_span(s, e), lab)
        except MalformedAnnotation as exc:
            if text[s:e].strip():
                raise
            diags.append(f"{doc_id}: proposition {k} is blank ({exc}); dropped")
    graph = _build_graph(doc_id, word_spans, links, diags)
    return _document(doc_id, tt.words), graph


def _cdcp_dir(path: Path, split: str) -> Path | None:
    for cand in sorted([path, *path.rglob(split)]):
        if cand.is_dir() and cand.name == split and any(cand.glob("*.ann.json")):
            return cand
    return None


def ingest_cdcp(path: str | Path, seed: int = 0, dev_fraction: float = CDCP_DEV_FRACTION) -> Corpus:
    path = Path(path)
    diags: list[str] = []
    loaded = {}
    for name in ("train", "test"):
        d = _cdcp_dir(path, name)
        if d is None:
            raise FileNotFoundError(f"no CDCP {name} directory with *.ann.json under {path}")
        items = []
        for txt in sorted(d.glob("*.txt")):
            if not txt.with_name(txt.stem + ".ann.json").exists():
                continue
            doc, graph = _cdcp_item(txt, diags)
            _check(doc, graph, CDCP, diags)
            items.append((doc, graph))
        loaded[name] = items
    train_ids = [d.id for d, _ in loaded["train"]]
    dev = _carve(train_ids, round(dev_fraction * len(train_ids)), seed)
    meta = {"seed": seed, "dev_fraction": dev_fraction}
    splits = {
        "train": CorpusSplit("train", CDCP.name, [it for it in loaded["train"] if it[0].id not in dev], dict(meta)),
        "dev": CorpusSplit("dev", CDCP.name, [it for it in loaded["train"] if it[0].id in dev], dict(meta)),
        "test": CorpusSplit("test", CDCP.name, loaded["test"], {}),
    }
    return Corpus(CDCP, splits, diags)


INGESTERS = {"aaec": ingest_aaec, "abstrct": ingest_abstrct, "cdcp": ingest_cdcp}
